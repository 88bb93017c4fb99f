from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quivermoduli.quiver import Weight, blowup_quiver, kronecker_quiver, weight_from_toric_form
from quivermoduli.stability import (
    Stability,
    ThinRep,
    ZeroPattern,
    chamber_decomposition,
    classify_patterns,
    closed_form_stability,
    fine_moduli_check,
    pattern_of,
    semistability,
    subrep_supports,
    theta_value,
)

from strategies import patterns_for, quiver_weight_pairs, quivers, reps_for


class TestPatterns:
    def test_pattern_of(self):
        rep = ThinRep((Fraction(1), Fraction(0), Fraction(3, 2)))
        assert pattern_of(rep).nonzero == (True, False, True)
        assert pattern_of(ThinRep((0, 0, 0))).nonzero == (False, False, False)
        assert pattern_of(ThinRep((-2, 5, 7))).nonzero == (True, True, True)

    def test_bitstring_round_trip(self):
        p = ZeroPattern.from_string("1011")
        assert p.to_string() == "1011"
        assert ZeroPattern.from_index(11, 4) == p  # 1011 binary


class TestSupports:
    def test_all_nonzero(self):
        q = blowup_quiver(2, 0)
        supports = subrep_supports(q, ZeroPattern.from_string("1111"))
        assert supports == {frozenset({3}), frozenset({2, 3})}

    def test_e_zero(self):
        q = blowup_quiver(2, 0)
        supports = subrep_supports(q, ZeroPattern.from_string("1011"))
        assert supports == {frozenset({3}), frozenset({2, 3}), frozenset({1, 3})}

    def test_all_zero_gives_all_proper_subsets(self):
        q = blowup_quiver(2, 0)
        supports = subrep_supports(q, ZeroPattern.from_string("0000"))
        assert len(supports) == 2 ** 3 - 2

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            subrep_supports(blowup_quiver(2, 0), ZeroPattern.from_string("111"))

    @given(quivers(max_arrows=12), st.data())
    def test_no_nonzero_arrow_exits_support(self, q, data):
        p = data.draw(patterns_for(q))
        for s in subrep_supports(q, p):
            assert 0 < len(s) < q.vertex_count
            for j, a in enumerate(q.arrows):
                if p.nonzero[j] and a.source in s:
                    assert a.target in s

    @given(quivers(max_arrows=12), st.data())
    def test_brute_force_supports_agree(self, q, data):
        p = data.draw(patterns_for(q))
        n = q.vertex_count
        expected = set()
        for mask in range(1, (1 << n) - 1):
            s = frozenset(v for v in range(1, n + 1) if (mask >> (v - 1)) & 1)
            if all(not p.nonzero[j] or a.source not in s or a.target in s
                   for j, a in enumerate(q.arrows)):
                expected.add(s)
        assert subrep_supports(q, p) == expected


class TestThetaValue:
    def test_examples(self):
        assert theta_value(Weight((-1, -1, 2)), {3}) == 2
        assert theta_value(Weight((-2, -1, 3)), {2, 3}) == 2  # p=2, q=3: theta({2,3}) = p
        assert theta_value(Weight((-2, 0, 2)), {2}) == 0

    def test_range_check(self):
        with pytest.raises(ValueError):
            theta_value(Weight((-1, 1)), {3})


class TestSemistability:
    def test_stable_example(self):
        q = blowup_quiver(2, 0)
        assert semistability(q, ZeroPattern.from_string("1111"), Weight((-1, -1, 2))) \
            == Stability.STABLE

    def test_unstable_example(self):
        # x1 = x2 = 0 leaves the middle vertex as a support of negative weight
        q = blowup_quiver(2, 0)
        assert semistability(q, ZeroPattern.from_string("1100"), Weight((-1, -1, 2))) \
            == Stability.UNSTABLE

    def test_kronecker_all_zero(self):
        q = kronecker_quiver(2)
        assert semistability(q, ZeroPattern.from_string("000"), Weight((-1, 1))) \
            == Stability.UNSTABLE

    def test_strictly_semistable_on_wall(self):
        q = blowup_quiver(2, 0)
        # e and x0 nonzero, late arrows zero: support {2} has weight zero
        assert semistability(q, ZeroPattern.from_string("1100"), Weight((-1, 0, 1))) \
            == Stability.STRICTLY_SEMISTABLE

    @given(quivers(max_arrows=8), st.data())
    def test_depends_only_on_pattern(self, q, data):
        r1 = data.draw(reps_for(q))
        w = data.draw(st.lists(st.integers(-5, 5),
                               min_size=q.vertex_count - 1,
                               max_size=q.vertex_count - 1).map(weight_from_toric_form))
        # a second representation with the same pattern but different scalars
        r2 = ThinRep(tuple(3 * v for v in r1.values))
        assert pattern_of(r1) == pattern_of(r2)
        assert semistability(q, pattern_of(r1), w) == semistability(q, pattern_of(r2), w)


class TestClassifyPatterns:
    def test_kronecker_counts(self):
        classes = classify_patterns(kronecker_quiver(2), Weight((-1, 1)))
        unstable = [p for p, c in classes.items() if c == Stability.UNSTABLE]
        assert unstable == [ZeroPattern.from_string("000")]
        assert sum(1 for c in classes.values() if c == Stability.STABLE) == 7

    def test_zero_weight_all_strictly_semistable(self):
        classes = classify_patterns(kronecker_quiver(2), Weight((0, 0)))
        assert all(c == Stability.STRICTLY_SEMISTABLE for c in classes.values())

    def test_deterministic_order(self):
        classes = classify_patterns(kronecker_quiver(2), Weight((-1, 1)))
        keys = [p.to_string() for p in classes]
        assert keys == sorted(keys)
        assert keys[0] == "000" and keys[-1] == "111"

    def test_bound(self):
        with pytest.raises(ValueError):
            classify_patterns(kronecker_quiver(3), Weight((-1, 1)), bound=3)

    @given(quiver_weight_pairs(max_arrows=10), st.integers(1, 4))
    def test_scaling_invariance(self, qw, k):
        q, w = qw
        assert classify_patterns(q, w) == classify_patterns(q, w.scaled(k))

    @given(quiver_weight_pairs(max_arrows=10))
    def test_fine_implies_no_strictly_semistable(self, qw):
        q, w = qw
        if fine_moduli_check(w):
            classes = classify_patterns(q, w)
            assert not any(c == Stability.STRICTLY_SEMISTABLE for c in classes.values())


class TestFineModuli:
    def test_examples(self):
        assert fine_moduli_check(Weight((-1, -1, 2)))
        assert not fine_moduli_check(Weight((-1, 0, 1)))
        assert fine_moduli_check(Weight((-3, 3)))

    def test_chamber_family(self):
        for p in range(1, 5):
            for q in range(p + 1, 5):
                assert fine_moduli_check(Weight((-p, p - q, q)))


class TestClosedFormOracle:
    def test_examples(self):
        assert closed_form_stability(2, 0, ZeroPattern.from_string("1110"), "chamber") \
            == Stability.STABLE
        assert closed_form_stability(2, 0, ZeroPattern.from_string("1000"), "chamber") \
            == Stability.UNSTABLE
        assert closed_form_stability(2, 0, ZeroPattern.from_string("1000"), "wall") \
            != Stability.UNSTABLE

    def test_bad_regime(self):
        with pytest.raises(ValueError):
            closed_form_stability(2, 0, ZeroPattern.from_string("1111"), "nonsense")

    @pytest.mark.parametrize("n", range(2, 6))
    @pytest.mark.parametrize("pq", [(1, 2), (1, 3), (2, 3)])
    def test_oracle_equivalence_exhaustive(self, n, pq):
        p_val, q_val = pq
        for m in range(0, n - 1):
            quiver = blowup_quiver(n, m)
            chamber = classify_patterns(quiver, Weight((-p_val, p_val - q_val, q_val)))
            for pattern, cls in chamber.items():
                assert closed_form_stability(n, m, pattern, "chamber") == cls
            wall = classify_patterns(quiver, Weight((-p_val, 0, p_val)))
            for pattern, cls in wall.items():
                assert closed_form_stability(n, m, pattern, "wall") == cls


class TestChamberDecomposition:
    def test_kronecker(self):
        dec = chamber_decomposition(kronecker_quiver(2))
        assert len(dec.hyperplanes) == 1
        assert len(dec.chambers) == 2
        assert all(w.realizable for w in dec.walls)
        # one chamber holds the weights (-p, p): first entry negative
        negatives = [c for c in dec.chambers if c.representative[0] < 0]
        assert len(negatives) == 1

    def test_blowup_chamber_constancy(self):
        dec = chamber_decomposition(blowup_quiver(2, 0))
        hyps = dec.hyperplanes

        def signs_of(weight):
            from quivermoduli.quiver import toric_form
            from quivermoduli.lattice import dot
            t = toric_form(weight)
            return tuple(1 if dot(h, t) > 0 else -1 if dot(h, t) < 0 else 0
                         for h in hyps)

        base = signs_of(Weight((-1, -2 - (-1) - 1, 2)))
        for p in range(1, 4):
            for q in range(p + 1, 5):
                s = signs_of(Weight((-p, p - q, q)))
                assert 0 not in s
                assert s == base
        assert any(c.signs == base for c in dec.chambers)

    def test_wall_weight_on_wall(self):
        dec = chamber_decomposition(blowup_quiver(2, 0))
        from quivermoduli.quiver import toric_form
        from quivermoduli.lattice import dot
        t = toric_form(Weight((-1, 0, 1)))
        middle = [w for w in dec.walls if w.subset == (2,)]
        assert len(middle) == 1
        assert dot(middle[0].normal, t) == 0
        assert middle[0].realizable

    def test_rank_bound(self):
        from quivermoduli.quiver import Arrow, Quiver
        q = Quiver(5, tuple(Arrow(i, i + 1, f"a{i}") for i in range(1, 5)))
        with pytest.raises(ValueError):
            chamber_decomposition(q)

    def test_chamber_representatives_off_walls(self):
        from quivermoduli.lattice import dot
        dec = chamber_decomposition(blowup_quiver(3, 1))
        for c in dec.chambers:
            assert all(s * dot(h, c.toric_point) > 0
                       for s, h in zip(c.signs, dec.hyperplanes))
