import itertools
import pickle

import pytest
from hypothesis import given
from hypothesis import strategies as st

from equichow.errors import (ConfluenceError, DegreeBoundError, DuplicateLeadingVariableError,
                             ExprSyntaxError, IncompatibleRingError, NonMonicRelationError,
                             OpaqueRelationError, PreconditionError, RelationNotKilledError)
from equichow.parser import parse_expr
from equichow.poly import ZZ, VariableTable
from equichow.ring import (Relation, RingPresentation, base_change_mod_p, coefficient_of, make_ring,
                           make_ring_map, normal_form, parse_ring_dsl, ring_to_dsl)
from strategies import polys

P2_DSL = """
ring P2 over Z;
vars c1:1, c2:2, c3:3, t:1;
rel t^3 + c1*t^2 + c2*t + c3 leading t;
"""

# three interacting relations: c1 is eliminated from the t-cubic at construction
TOWER_DSL = """
ring Tower over Z;
vars c1:1, c2:2, c3:3, s:1, t:1;
rel c1 - 2*s leading c1;
rel s^3 - c2*s + c3 leading s;
rel t^3 + c1*t^2 + c2*t + c3 leading t;
"""


@pytest.fixture(scope="module")
def p2():
    return parse_ring_dsl(P2_DSL)


@pytest.fixture(scope="module")
def tower():
    return parse_ring_dsl(TOWER_DSL)


def rel(text, lead, table, opaque=False):
    return Relation.make(parse_expr(text, table), lead, opaque)


class TestMakeRing:
    def test_plane_cubic(self, p2):
        assert p2.leading_variables == ("t",)
        assert p2.relations[0].leading_degree == 3

    def test_exceptional_shape(self):
        table = VariableTable(("c1", "c2", "c3", "s", "hE", "fE_1", "fE_2"), (1, 2, 3, 1, 1, 1, 2))
        rels = (rel("2*s - c1", "c1", table), rel("s^3 - c1*s^2 + c2*s - c3", "s", table),
                rel("hE^2 + fE_1*hE + fE_2", "hE", table, opaque=True))
        R = make_ring(RingPresentation("E", table, ZZ, rels))
        by_lead = {r.leading_variable: r for r in R.relations}
        # c1 has been substituted inside f_s
        assert by_lead["s"].polynomial == parse_expr("s^3 - c2*s + c3", table)
        assert str(by_lead["c1"].polynomial) == "c1 - 2*s"
        assert by_lead["hE"].opaque
        assert R("c1") == R("2*s")

    def test_duplicate_leading_variable(self):
        table = VariableTable(("c1", "s", "t"))
        with pytest.raises(DuplicateLeadingVariableError) as info:
            make_ring(RingPresentation("bad", table, ZZ, (rel("t^2 - s", "t", table), rel("t^2 - c1", "t", table))))
        assert len(info.value.pair) == 2

    def test_non_monic(self):
        table = VariableTable(("c1", "s"))
        with pytest.raises(NonMonicRelationError):
            rel("2*s - c1", "s", table)

    def test_mixed_leading_terms_rejected(self):
        table = VariableTable(("c1", "s"))
        with pytest.raises(NonMonicRelationError):
            rel("s^2 + c1*s^2", "s", table)

    def test_confluence_failure(self):
        table = VariableTable(("x", "y"))
        with pytest.raises(ConfluenceError):
            make_ring(RingPresentation("bad", table, ZZ, (rel("x^2 - y", "x", table), rel("y^2 - x", "y", table))))

    def test_pickle(self, tower):
        again = pickle.loads(pickle.dumps(tower))
        assert again == tower
        assert again("t^4") == tower("t^4")


class TestNormalForm:
    def test_cubic(self, p2):
        assert str(p2("t^3")) == "-c1*t^2 - c2*t - c3"

    def test_cubic_mod_2(self, p2):
        R2, _ = base_change_mod_p(p2, 2)
        assert str(R2("t^3")) == "c1*t^2 + c2*t + c3"

    def test_quartic_by_hand(self, p2):
        # t * NF(t^3), then one more substitution of t^3
        t3 = p2("t^3").value
        step = parse_expr("t", p2.table) * t3
        hand = step - parse_expr("-c1", p2.table) * parse_expr("t^3", p2.table) \
            + parse_expr("-c1", p2.table) * t3
        assert normal_form(parse_expr("t^4", p2.table), p2) == p2(hand)
        assert p2("t^4") == p2("(c1^2 - c2)*t^2 + (c1*c2 - c3)*t + c1*c3")

    def test_unit_and_zero(self, p2):
        assert str(p2("(c1 + t)^0")) == "1"
        assert p2(0).is_zero()

    def test_opaque_relation_flagged(self):
        R = parse_ring_dsl("ring E over Z; vars s:1, hE:1, a:1, b:2; rel hE^2 + a*hE + b leading hE opaque;")
        assert str(R("hE*s")) == "s*hE"
        with pytest.raises(OpaqueRelationError):
            R("hE^2")
        assert R.normal_form(parse_expr("hE^2", R.table), allow_opaque=True) == R("-a*hE - b")

    def test_degree_bound(self):
        R = parse_ring_dsl("ring B over Z; vars s:1, h:1; bound s < 3;")
        assert str(R("s^2*h")) == "s^2*h"
        with pytest.raises(DegreeBoundError):
            R("s^3")


class TestCoefficientOf:
    def test_coefficient_of_square(self):
        R = parse_ring_dsl("ring X over Z; vars c1:1, s:1, h:1, t:1, x1:2, x2:3;")
        e = R("t^2*(s^2 + s*h + s*c1) + t*x1 + x2")
        assert coefficient_of(e, "t", 2) == R("s^2 + s*h + s*c1")

    def test_constant_part(self, p2):
        R = parse_ring_dsl("ring Y over Z; vars s:1, h:1, t:1;")
        assert coefficient_of(R("h + 5*s"), "t", 0) == R("h + 5*s")

    def test_zero(self, p2):
        assert coefficient_of(p2(0), "t", 5).is_zero()

    def test_unknown_variable(self, p2):
        with pytest.raises(KeyError):
            coefficient_of(p2("t"), "zz", 1)

    def test_reassembles(self, p2):
        e = p2("(t + c1)^5")
        acc = p2(0)
        for k in range(3):
            acc = acc + coefficient_of(e, "t", k) * p2("t") ** k
        assert acc == e


class TestBaseChange:
    def test_dsm_constant(self):
        R = parse_ring_dsl("ring V over Z; vars c1:1, h:1;")
        _, to2 = base_change_mod_p(R, 2)
        assert to2(R("4*(5-2)*h")).is_zero()

    def test_relation_mod_2(self):
        R = parse_ring_dsl("ring V over Z; vars c1:1, s:1;")
        _, to2 = base_change_mod_p(R, 2)
        assert str(to2(R("2*s - c1"))) == "c1"

    def test_d2_class(self):
        R = parse_ring_dsl("ring V over Z; vars c1:1, s:1, h:1;")
        _, to2 = base_change_mod_p(R, 2)
        assert to2(R("6*s + 4*h - 6*c1")).is_zero()

    def test_non_prime(self, p2):
        with pytest.raises(ValueError):
            base_change_mod_p(p2, 4)

    def test_wrong_characteristic(self, p2):
        R3, _ = base_change_mod_p(p2, 3)
        with pytest.raises(IncompatibleRingError):
            base_change_mod_p(R3, 2)


class TestRingMap:
    def test_gysin_shape(self):
        src = parse_ring_dsl("ring S over Z; vars c1:1, s:1, h:1, t:1; bound t < 3;")
        dst = parse_ring_dsl("ring D over Z; vars c1:1, s:1, h:1; rel c1 - 2*s leading c1;")
        phi = make_ring_map(src, dst, {"c1": "c1", "s": "s", "h": "h", "t": "s"})
        assert phi(src("h + 3*t")) == dst("h + 3*s")

    def test_s_to_c1_substitution(self):
        src = parse_ring_dsl("ring S over Fp(2); vars c1:1, s:1, h:1;")
        dst = parse_ring_dsl("ring D over Fp(2); vars c1:1, h:1;")
        phi = make_ring_map(src, dst, {"c1": "c1", "s": "c1", "h": "h"})
        assert str(phi(src("s^2 + s*h + s*c1"))) == "c1*h"

    def test_relation_not_killed(self, p2):
        dst = parse_ring_dsl("ring D over Z; vars c1:1, c2:2, c3:3, s:1; rel s^3 - c1*s^2 + c2*s - c3 leading s;")
        with pytest.raises(RelationNotKilledError) as info:
            make_ring_map(p2, dst, {"c1": "c1", "c2": "c2", "c3": "c3", "t": "s"})
        assert "t^3" in info.value.relation

    def test_missing_image(self, p2):
        with pytest.raises(PreconditionError):
            make_ring_map(p2, p2, {"t": "t"})


class TestDsl:
    def test_roundtrip(self, tower):
        text = ring_to_dsl(tower)
        again = parse_ring_dsl(text)
        assert again == tower and ring_to_dsl(again) == text

    def test_syntax_error_has_position(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse_ring_dsl("ring X over Z; vars s:1; rel s^2 + leading s;")
        assert "statement 3" in str(info.value)

    def test_missing_header(self):
        with pytest.raises(ExprSyntaxError):
            parse_ring_dsl("vars s:1;")

    def test_finite_field(self):
        R = parse_ring_dsl("ring X over Fp(3); vars s:1; rel s^2 + 2 leading s;")
        assert str(R("s^2")) == "1"


# -- properties -----------------------------------------------------------

TOWER_TABLE = VariableTable(("c1", "c2", "c3", "s", "t"), (1, 2, 3, 1, 1))
tower_polys = polys(TOWER_TABLE, max_terms=3, max_exp=4)


@pytest.fixture(scope="module")
def tower_ring():
    return parse_ring_dsl(TOWER_DSL)


@given(f=tower_polys)
def test_normal_form_idempotent(tower_ring, f):
    once = tower_ring.reduce(f)
    assert tower_ring.reduce(once) == once


@given(f=tower_polys, g=tower_polys)
def test_well_defined_on_quotient(tower_ring, f, g):
    R = tower_ring
    assert R.reduce(f * g) == R.reduce(R.reduce(f) * R.reduce(g))
    assert R.reduce(f + g) == R.reduce(R.reduce(f) + R.reduce(g))


@given(f=tower_polys, order=st.permutations(["c1", "s", "t"]), choice=st.sampled_from(["first", "last"]))
def test_confluence(tower_ring, f, order, choice):
    assert tower_ring.reduce_with_order(f, order, choice) == tower_ring.reduce(f)


@given(f=tower_polys, g=tower_polys)
def test_ring_map_is_homomorphism(tower_ring, f, g):
    phi = make_ring_map(tower_ring, tower_ring, {"c1": "c1", "c2": "c2", "c3": "c3", "s": "s", "t": "t"})
    assert phi.apply_poly(f * g) == phi.apply_poly(f) * phi.apply_poly(g)


@given(f=tower_polys, g=tower_polys, p=st.sampled_from([2, 3, 5]))
def test_base_change_commutes(tower_ring, f, g, p):
    Rp, to_p = base_change_mod_p(tower_ring, p)
    assert to_p(tower_ring.normal_form(f * g)) == Rp.normal_form(f.reduce_mod(p) * g.reduce_mod(p))


def test_every_relation_order_is_confluent(tower_ring):
    f = parse_expr("(t + s + c1)^5 * c2", TOWER_TABLE)
    nf = tower_ring.reduce(f)
    for order in itertools.permutations(["c1", "s", "t"]):
        assert tower_ring.reduce_with_order(f, order) == nf
