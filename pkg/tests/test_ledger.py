import pytest
from hypothesis import given
from hypothesis import strategies as st

from equichow.errors import DomainError
from equichow.ledger import (CSV_COLUMNS, SCHEMA, GradedTable, inv_Hg, inv_P_minus_Delta, inv_point_pgl2,
                             poincare_series, table_from_json, table_to_csv, table_to_json)
from equichow.poly import is_prime

ODD_G = range(3, 100, 2)
PRIMES = [p for p in range(3, 98) if is_prime(p)]


def as_set(t):
    return set(t.entries)


class TestPoint:
    def test_p2(self):
        assert str(inv_point_pgl2(2)) == "{1@0, w2@2}"

    @pytest.mark.parametrize("p", [3, 5])
    def test_odd(self, p):
        assert str(inv_point_pgl2(p)) == "{1@0}"

    def test_non_prime(self):
        with pytest.raises(DomainError):
            inv_point_pgl2(6)


class TestComplement:
    def test_base_case(self):
        assert as_set(inv_P_minus_Delta(1, 2)) == {("1", 0), ("x1", 1), ("w2", 2)}

    def test_n2(self):
        assert as_set(inv_P_minus_Delta(2, 2)) == {("1", 0), ("x1", 1), ("x2", 2), ("w2", 2)}

    def test_n5_degrees(self):
        assert sorted(inv_P_minus_Delta(5, 2).degrees) == [0, 1, 2, 2, 3, 4, 5]

    def test_bad_n(self):
        with pytest.raises(DomainError):
            inv_P_minus_Delta(0, 2)

    @pytest.mark.parametrize("n", range(1, 40))
    def test_size(self, n):
        t = inv_P_minus_Delta(n, 2)
        assert t.size() == n + 2
        assert t.size(include_identity=False) == n + 1

    @pytest.mark.parametrize("n", range(2, 40))
    def test_recursion_consistency(self, n):
        low = inv_P_minus_Delta(n, 2).restricted(n)
        if "w2" not in low.labels:
            low = low + GradedTable.of(2, [("w2", 2)])
        assert low == inv_P_minus_Delta(n - 1, 2)


class TestHg:
    def test_g3(self):
        t = inv_Hg(3, 2)
        assert sorted(t.degrees) == [0, 1, 2, 2, 3, 4, 5]
        assert set(t.labels) == {"1", "x1", "w2", "x2", "x3", "x4", "x5"}

    def test_g7_p3(self):
        assert str(inv_Hg(7, 3)) == "{1@0, y@1}"

    def test_g3_p5(self):
        assert str(inv_Hg(3, 5)) == "{1@0}"

    @pytest.mark.parametrize("g", [4, 1, 2, -3])
    def test_domain(self, g):
        with pytest.raises(DomainError):
            inv_Hg(g, 2)

    @pytest.mark.parametrize("g", [3, 5, 7, 9, 11])
    def test_full_generator_list(self, g):
        want = {("1", 0), ("w2", 2)} | {(f"x{i}", i) for i in range(1, g + 3)}
        assert as_set(inv_Hg(g, 2)) == want

    @pytest.mark.parametrize("g", ODD_G)
    def test_generator_degrees(self, g):
        counts = poincare_series(inv_Hg(g, 2))
        assert counts[2] == 2
        assert all(counts[d] == 1 for d in [0, 1] + list(range(3, g + 3)))

    def test_odd_prime_sweep(self):
        for g in ODD_G:
            for p in PRIMES:
                t = inv_Hg(g, p)
                nontrivial = t.size() > 1
                assert nontrivial == ((2 * g + 1) % p == 0)
                if nontrivial:
                    assert t.degrees == [0, 1]


class TestPoincare:
    def test_g3(self):
        assert poincare_series(inv_Hg(3, 2)) == [1, 1, 2, 1, 1, 1]

    def test_point(self):
        assert poincare_series(GradedTable.of(3, [("1", 0)])) == [1]

    def test_empty(self):
        assert poincare_series(GradedTable.of(2, [])) == []

    def test_truncated(self):
        assert poincare_series(inv_Hg(3, 2), max_degree=2) == [1, 1, 2]


class TestTable:
    def test_duplicate_labels(self):
        with pytest.raises(ValueError):
            GradedTable.of(2, [("x1", 1), ("x1", 2)])

    def test_negative_degree(self):
        with pytest.raises(ValueError):
            GradedTable.of(2, [("x1", -1)])

    def test_ordering(self):
        t = GradedTable.of(2, [("x10", 2), ("w2", 2), ("x2", 2), ("1", 0)])
        assert t.labels == ["1", "w2", "x2", "x10"]


class TestEmitters:
    def test_json_roundtrip(self):
        t = inv_Hg(5, 2)
        text = table_to_json(t, g=5)
        assert table_from_json(text) == t
        assert f'"schema": "{SCHEMA}"' in text

    def test_json_reports_both_counts(self):
        text = table_to_json(inv_P_minus_Delta(3, 2))
        assert '"size": 5' in text and '"size_without_identity": 4' in text

    def test_bad_schema(self):
        with pytest.raises(ValueError):
            table_from_json('{"schema": "other"}')

    def test_csv(self):
        lines = table_to_csv(inv_Hg(3, 2)).splitlines()
        assert lines[0] == f"# {SCHEMA} p=2"
        assert lines[1] == ",".join(CSV_COLUMNS)
        assert lines[2] == "0,1,1"
        assert lines[4] == "2,2,w2 x2"


@given(n=st.integers(1, 60))
def test_sum_of_counts_is_size(n):
    t = inv_P_minus_Delta(n, 2)
    assert sum(poincare_series(t)) == t.size()


@given(g=st.integers(1, 60).map(lambda k: 2 * k + 1), p=st.sampled_from(PRIMES))
def test_odd_prime_divisibility(g, p):
    assert (inv_Hg(g, p).size() == 2) == ((2 * g + 1) % p == 0)
