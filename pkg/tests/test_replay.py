import pytest

from equichow.errors import OpaqueRelationError, PreconditionError, RelationNotKilledError
from equichow.replay import (FAIL, PASS, REPORTED, LEMMAS, LemmaReport, class_D1_nod, class_D2_nod,
                             class_Dsm, class_Dtilde1_E, class_Dtilde2_E, class_E_blowup,
                             exceptional_bundle, exceptional_ring, gysin_map, key_lemma_audit,
                             pushforward_decomposition, reassemble)

SWEEP = range(3, 13)


class TestD1:
    def test_n3_mod2(self):
        r = class_D1_nod(3, 2)
        assert r.status == PASS and str(r.result) == "c1*h"

    def test_n4_intermediate(self):
        r = class_D1_nod(4, 2)
        assert str(r.result) == "c1*h"
        assert str(r.intermediates["xi0_mod2"]) == "s*h"

    def test_n3_integral_intermediate(self):
        r = class_D1_nod(3, 0)
        assert r.intermediates["xi0"] == r.intermediates["xi0"].ring("3*s*h - 2*c1*h + 9*s^2 - 15*c1*s + 6*c1^2")

    def test_precondition(self):
        with pytest.raises(PreconditionError):
            class_D1_nod(2, 2)
        with pytest.raises(PreconditionError):
            class_D1_nod(3, 4)

    @pytest.mark.parametrize("n", SWEEP)
    def test_sweep(self, n):
        r = class_D1_nod(n, 2)
        assert r.status == PASS and str(r.result) == "c1*h"
        want = "s*h" if n % 2 == 0 else "c1*s + s^2 + s*h"
        assert r.intermediates["xi0_mod2"] == r.intermediates["xi0_mod2"].ring(want)


class TestD2:
    @pytest.mark.parametrize("n", [3, 6])
    def test_vanishes_mod2(self, n):
        r = class_D2_nod(n, 2)
        assert r.status == PASS and r.result.is_zero()

    def test_n3_integral(self):
        r = class_D2_nod(3, 0)
        assert r.result == r.result.ring("6*s + 4*h - 6*c1")

    @pytest.mark.parametrize("n", SWEEP)
    def test_sweep_even_coefficients(self, n):
        r = class_D2_nod(n, 2)
        assert r.status == PASS
        assert all(c % 2 == 0 for c in r.intermediates["xi0"].value.terms.values())


class TestExceptional:
    def test_relations(self):
        R = exceptional_ring()
        by_lead = {r.leading_variable: r for r in R.relations}
        assert set(by_lead) == {"c1", "s", "hE"}
        assert str(by_lead["c1"].polynomial) == "c1 - 2*s"
        assert str(by_lead["s"].polynomial) == "-c2*s + c3 + s^3"
        fE = by_lead["hE"]
        assert fE.opaque and fE.leading_degree == 2

    def test_c1_is_2s(self):
        R = exceptional_ring()
        assert R("c1") == R("2*s")
        R2, to2 = R.base_change(2)
        assert to2(R("c1")).is_zero()

    def test_opaque_fE(self):
        with pytest.raises(OpaqueRelationError):
            exceptional_ring()("hE^2")

    def test_dsl_mentions_opaque(self):
        assert "opaque" in exceptional_ring().to_dsl()


class TestDtilde:
    @pytest.mark.parametrize("n", [3, 4])
    def test_d1(self, n):
        r = class_Dtilde1_E(n)
        assert r.status == PASS and r.result == r.result.ring(f"h + {n}*s")

    def test_degenerate_n0(self):
        assert str(class_Dtilde1_E(0, strict=False).result) == "h"
        with pytest.raises(PreconditionError):
            class_Dtilde1_E(0)

    @pytest.mark.parametrize("n", [3, 5])
    def test_d2_vanishes(self, n):
        r = class_Dtilde2_E(n, 2)
        assert r.status == PASS and r.result.is_zero()

    def test_d2_integral_even(self):
        r = class_Dtilde2_E(3, 0)
        assert all(c % 2 == 0 for c in r.result.value.terms.values())
        assert r.result == r.result.ring("-6*s + 4*h")

    @pytest.mark.parametrize("n", SWEEP)
    def test_sweep(self, n):
        assert str(class_Dtilde1_E(n).result) in (f"h + {n}*s", f"{n}*s + h")
        assert class_Dtilde2_E(n, 2).result.is_zero()

    def test_full_t_relation_is_not_killed(self):
        with pytest.raises(RelationNotKilledError):
            gysin_map(3, full_t_relation=True)


class TestDecomposition:
    def test_h_plus_ns(self):
        total, handle = exceptional_bundle(5)
        E = handle.base("hE")
        comps = pushforward_decomposition(total("h + 5*s"), handle, ("[E]", E))
        assert [(c.label, c.power) for c in comps] == [("base", 0), ("[E]*h^1", 1)]
        assert comps[0].coefficient == handle.base("5*s") and comps[0].pushed is None
        assert comps[1].pushed == E
        assert reassemble(comps, handle) == total("h + 5*s")

    def test_zero(self):
        total, handle = exceptional_bundle(3)
        assert pushforward_decomposition(total(0), handle) == []

    def test_pullback(self):
        total, handle = exceptional_bundle(3)
        a = handle.base("c2 + s^2")
        comps = pushforward_decomposition(handle.pullback(a), handle)
        assert len(comps) == 1 and comps[0].power == 0 and comps[0].coefficient == a


class TestBlowup:
    def test_reported_only(self):
        r = class_E_blowup()
        assert r.status == REPORTED and r.ok
        assert not r.result.is_zero()
        assert r.intermediates["(a,b)"] == "(-2,-2)"
        assert r.intermediates["multiplicity"] == 1

    def test_mod2_is_reported(self):
        r = class_E_blowup()
        assert "mod 2" in r.intermediates
        assert any("reported only" in n for n in r.notes)


class TestDsm:
    def test_n3(self):
        assert class_Dsm(3, 2).result.is_zero()

    def test_n5_integral(self):
        r = class_Dsm(5, 0)
        assert r.result == r.result.ring("12*h")

    def test_n2_degenerate(self):
        assert class_Dsm(2, 0, strict=False).result.is_zero()


class TestAudit:
    @pytest.mark.parametrize("n", [3, 7])
    def test_closes(self, n):
        r = key_lemma_audit(n)
        assert r.status == PASS and r.result == "closed"

    @pytest.mark.parametrize("perturb", ["D1_zero", "D1_even"])
    def test_negative_control_fails_at_degree_1(self, perturb):
        r = key_lemma_audit(3, perturb=perturb)
        assert r.status == FAIL and r.result == "open"
        failed = [name for name, ok in r.checks if not ok]
        assert failed and failed[0].startswith("degree 1")

    def test_unknown_perturbation(self):
        with pytest.raises(PreconditionError):
            key_lemma_audit(3, perturb="nope")

    @pytest.mark.parametrize("n", SWEEP)
    def test_passes_iff_constituents_pass(self, n):
        r = key_lemma_audit(n)
        names = ("Dsm", "D1_nod", "D2_nod", "Dtilde1_E", "Dtilde2_E", "E_blowup")
        parts = {k: LEMMAS[k](n, 2) for k in names}
        assert r.ok == all(p.ok for p in parts.values())
        assert {k: r.intermediates[k] for k in names} == {k: p.status for k, p in parts.items()}


class TestReportSerialization:
    @pytest.mark.parametrize("lemma", sorted(LEMMAS))
    def test_json_roundtrip(self, lemma):
        r = LEMMAS[lemma](3, 2)
        text = r.to_json()
        again = LemmaReport.from_json(text)
        assert again == r and again.to_json() == text

    def test_status_reflects_checks(self):
        r = LemmaReport("x", {})
        r.check("a", True)
        assert r.settle().status == PASS
        r.check("b", False)
        assert r.settle().status == FAIL
