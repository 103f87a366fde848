import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from congruence_stacks.oracle import (
    ENUMERATION_CAP,
    StackWitness,
    count_stacks,
    enumerate_stacks,
    witnesses_from_json,
    witnesses_to_json,
)
from congruence_stacks.params import StackParams, Variant
from congruence_stacks.qseries import stack_gf

P13 = StackParams(1, 3)
P14 = StackParams(1, 4)
G34 = StackParams(3, 4, Variant.GAP)


class TestWitness:
    def test_valid_witness(self):
        w = StackWitness((1, 1, 4), 7, (5, 2, 2))
        assert w.weight == 22

    def test_left_must_be_nondecreasing(self):
        with pytest.raises(ValueError):
            StackWitness((4, 1), 7, ())

    def test_right_must_be_nonincreasing(self):
        with pytest.raises(ValueError):
            StackWitness((), 7, (2, 5))

    def test_peak_strictly_exceeds_right(self):
        with pytest.raises(ValueError):
            StackWitness((), 5, (5,))

    def test_peak_bounds_left(self):
        with pytest.raises(ValueError):
            StackWitness((9,), 5, ())
        StackWitness((5,), 5, ())  # equality on the left is allowed

    def test_positive_parts_only(self):
        with pytest.raises(ValueError):
            StackWitness((0,), 5, ())
        with pytest.raises(ValueError):
            StackWitness((), 0, ())

    def test_congruence_check(self):
        w = StackWitness((1, 1), 4, (2,))
        w.check_congruence(P13)
        with pytest.raises(ValueError):
            w.check_congruence(StackParams(2, 5))


class TestPlainCounts:
    def test_first_values(self):
        assert [count_stacks(n) for n in range(11)] == [0, 1, 2, 4, 8, 15, 27, 47, 79, 130, 209]

    def test_figure_example(self):
        assert count_stacks(4) == 8

    def test_enumeration_matches_counts(self):
        for n in range(1, 13):
            ws = enumerate_stacks(n)
            assert len(ws) == count_stacks(n)
            assert len(set(ws)) == len(ws)
            assert all(w.weight == n for w in ws)


class TestCongruenceCounts:
    def test_first_values_modulus_three(self):
        assert [count_stacks(n, P13) for n in range(7)] == [0, 1, 1, 1, 2, 2, 3]

    def test_peak_example_modulus_four(self):
        assert count_stacks(12, P14) == 7
        peaks = sorted(w.peak for w in enumerate_stacks(12, P14))
        assert peaks == [1, 5, 5, 5, 5, 9, 9]

    def test_gap_variant_small_values(self):
        assert [count_stacks(n, G34) for n in range(8)] == [0, 0, 0, 1, 1, 1, 2, 3]

    @pytest.mark.parametrize("r,m", [(1, 3), (1, 4), (2, 5), (3, 4), (3, 5)])
    def test_matches_generating_function(self, r, m):
        params = StackParams.from_residue(r, m)
        series = stack_gf(params, 40)
        for n in range(41):
            assert series[n] == count_stacks(n, params)

    @pytest.mark.parametrize("r,m", [(1, 3), (1, 4), (2, 5), (3, 4)])
    def test_enumeration_matches_counts(self, r, m):
        params = StackParams.from_residue(r, m)
        for n in range(1, 21):
            ws = enumerate_stacks(n, params)
            assert len(ws) == count_stacks(n, params)
            for w in ws:
                w.check_congruence(params)
                assert w.weight == n


class TestEnumerationLimits:
    def test_cap_enforced(self):
        with pytest.raises(ValueError):
            enumerate_stacks(ENUMERATION_CAP + 1)

    def test_negative_size_rejected(self):
        with pytest.raises(ValueError):
            count_stacks(-1)
        with pytest.raises(ValueError):
            count_stacks(-1, P13)


class TestWitnessSerialization:
    def test_roundtrip(self):
        ws = enumerate_stacks(9, P13)
        assert witnesses_from_json(witnesses_to_json(ws)) == ws


@given(st.integers(1, 18))
@settings(max_examples=18, deadline=None)
def test_plain_enumeration_is_exhaustive(n):
    ws = enumerate_stacks(n)
    assert len(set(ws)) == count_stacks(n)


@given(st.integers(1, 24), st.sampled_from([(1, 3), (1, 4), (2, 5), (3, 4), (2, 7)]))
@settings(max_examples=40, deadline=None)
def test_congruence_enumeration_is_exhaustive(n, pair):
    params = StackParams.from_residue(*pair)
    ws = enumerate_stacks(n, params)
    assert len(set(ws)) == count_stacks(n, params)
    for w in ws:
        w.check_congruence(params)
