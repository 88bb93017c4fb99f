import pytest
from hypothesis import given
from hypothesis import strategies as st

from quivermoduli.quiver import (
    Arrow,
    Quiver,
    Weight,
    blowup_quiver,
    is_admissible,
    kronecker_quiver,
    toric_form,
    validate,
    weight_from_toric_form,
)

from strategies import quivers


class TestQuiverConstruction:
    def test_blowup_shape(self):
        q = blowup_quiver(2, 0)
        assert [(a.source, a.target, a.name) for a in q.arrows] == [
            (1, 3, "x0"), (1, 2, "e"), (2, 3, "x1"), (2, 3, "x2"),
        ]

    def test_blowup_group_sizes(self):
        q = blowup_quiver(3, 1)
        assert sum(1 for a in q.arrows if (a.source, a.target) == (1, 3)) == 2
        assert sum(1 for a in q.arrows if (a.source, a.target) == (1, 2)) == 1
        assert sum(1 for a in q.arrows if (a.source, a.target) == (2, 3)) == 2

    @pytest.mark.parametrize("n,m", [(2, 1), (1, 0), (3, -1), (3, 2)])
    def test_blowup_bounds(self, n, m):
        with pytest.raises(ValueError):
            blowup_quiver(n, m)

    @pytest.mark.parametrize("n,count", [(2, 3), (3, 4)])
    def test_kronecker(self, n, count):
        q = kronecker_quiver(n)
        assert q.vertex_count == 2
        assert len(q.arrows) == count
        assert all((a.source, a.target) == (1, 2) for a in q.arrows)

    def test_kronecker_bound(self):
        with pytest.raises(ValueError):
            kronecker_quiver(1)

    def test_arrow_counts_formula(self):
        for n in range(2, 7):
            for m in range(0, n - 1):
                assert len(blowup_quiver(n, m).arrows) == n + 2
            assert len(kronecker_quiver(n).arrows) == n + 1

    def test_endpoint_range_rejected(self):
        with pytest.raises(ValueError):
            Quiver(2, (Arrow(1, 3, "a"),))

    def test_json_round_trip(self):
        q = blowup_quiver(3, 0)
        assert Quiver.from_json_dict(q.to_json_dict()) == q


class TestValidate:
    def test_builtins_valid(self):
        for n in range(2, 7):
            for m in range(0, n - 1):
                assert validate(blowup_quiver(n, m)) == []
            assert validate(kronecker_quiver(n)) == []

    def test_single_vertex(self):
        assert validate(Quiver(1, ())) == []

    def test_cycle_reported(self):
        q = Quiver(2, (Arrow(1, 2, "f"), Arrow(2, 1, "g")))
        assert any("acyclicity" in line for line in validate(q))

    def test_disconnected_reported(self):
        q = Quiver(3, (Arrow(1, 2, "f"),))
        report = validate(q)
        assert any("connectivity" in line for line in report)

    def test_non_unique_source_reported(self):
        q = Quiver(3, (Arrow(1, 3, "f"), Arrow(2, 3, "g")))
        assert any("unique source" in line for line in validate(q))

    def test_duplicate_names_reported(self):
        q = Quiver(2, (Arrow(1, 2, "f"), Arrow(1, 2, "f")))
        assert any("duplicate" in line for line in validate(q))


class TestWeights:
    def test_sum_zero_enforced(self):
        with pytest.raises(ValueError):
            Weight((1, 1))

    def test_toric_form_examples(self):
        assert toric_form(Weight((-1, -1, 2))) == (1, 2)
        assert toric_form(Weight((-3, 3))) == (3,)
        assert toric_form(Weight((0, 0, 0))) == (0, 0)

    def test_inverse_examples(self):
        assert weight_from_toric_form((1, 2)).entries == (-1, -1, 2)
        assert weight_from_toric_form((3,)).entries == (-3, 3)
        assert weight_from_toric_form((1, 1)).entries == (-1, 0, 1)

    def test_admissibility(self):
        assert is_admissible(Weight((-1, -1, 2)))
        # toric form of (-1,0,1) is (1,1): both entries positive
        assert is_admissible(Weight((-1, 0, 1)))
        assert not is_admissible(Weight((1, -1, 0)))

    @given(st.lists(st.integers(-50, 50), min_size=1, max_size=6))
    def test_round_trip_from_toric(self, v):
        assert toric_form(weight_from_toric_form(v)) == tuple(v)

    @given(st.lists(st.integers(-50, 50), min_size=1, max_size=6))
    def test_round_trip_from_weight(self, v):
        w = weight_from_toric_form(v)
        assert weight_from_toric_form(toric_form(w)) == w


@given(quivers())
def test_random_quivers_acyclic_connected(q):
    report = validate(q)
    assert not any("acyclicity" in line for line in report)
    assert not any("connectivity" in line for line in report)
