import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rmstream import DayPattern, DistanceConfig, InvalidInputError, dtw_distance, pairwise_distance_matrix

from .conftest import make_days, random_days
from .oracles import enumerate_path_dtw


def d(values, idx=0):
    return DayPattern(day_index=idx, values=tuple(values))


class TestDtwDistance:
    def test_identity(self):
        assert dtw_distance(d([1, 2, 3]), d([1, 2, 3], 1)) == 0.0

    def test_hand_case(self):
        # all warping paths over [0,0] vs [1,1] cost at least 2
        assert dtw_distance(d([0, 0]), d([1, 1], 1)) == 2.0

    def test_length_mismatch(self):
        with pytest.raises(InvalidInputError):
            dtw_distance(d([1, 2, 3]), d([1, 2], 1))

    def test_weighted_not_symmetric(self):
        cfg = DistanceConfig(weights=(2.0, 3.0, 5.0))
        a, b = d([3, 2, 3]), d([1, 3, 3], 1)
        assert dtw_distance(a, b, cfg) != dtw_distance(b, a, cfg)

    def test_squared_cost(self):
        cfg = DistanceConfig(squared=True)
        assert dtw_distance(d([0, 0]), d([3, 3], 1), cfg) == 18.0

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.floats(min_value=0, max_value=10), min_size=2, max_size=6),
           st.lists(st.floats(min_value=0, max_value=10), min_size=2, max_size=6))
    def test_symmetry_uniform_weights(self, xs, ys):
        n = min(len(xs), len(ys))
        a, b = d(xs[:n]), d(ys[:n], 1)
        assert dtw_distance(a, b) == dtw_distance(b, a)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(min_value=0, max_value=10), min_size=2, max_size=6),
           st.lists(st.floats(min_value=0, max_value=10), min_size=2, max_size=6),
           st.floats(min_value=0.1, max_value=2.0))
    def test_matches_path_enumeration(self, xs, ys, wscale):
        n = min(len(xs), len(ys))
        xs, ys = xs[:n], ys[:n]
        weights = tuple(wscale + i * 0.1 for i in range(n))
        cfg = DistanceConfig(weights=weights)
        got = dtw_distance(d(xs), d(ys, 1), cfg)
        want = enumerate_path_dtw(xs, ys, weights)
        assert got == pytest.approx(want, rel=1e-12, abs=1e-12)

    def test_band_monotone_and_unbanded_limit(self, rng):
        for _ in range(20):
            m = 6
            a, b = random_days(rng, 2, m, scale=5.0)
            unbanded = dtw_distance(a, b)
            prev = None
            for band in range(m - 1, -1, -1):
                cur = dtw_distance(a, b, DistanceConfig(band_radius=band))
                if band == m - 1:
                    assert cur == unbanded
                if prev is not None:
                    assert cur >= prev  # shrinking band never decreases cost
                prev = cur

    def test_banded_matches_banded_enumeration(self, rng):
        for band in (0, 1, 2):
            a, b = random_days(rng, 2, 5, scale=3.0)
            got = dtw_distance(a, b, DistanceConfig(band_radius=band))
            want = enumerate_path_dtw(list(a.values), list(b.values), band=band)
            assert got == pytest.approx(want, rel=1e-12)

    def test_nonnegative(self, rng):
        for _ in range(50):
            a, b = random_days(rng, 2, 8, scale=4.0)
            assert dtw_distance(a, b) >= 0.0


class TestPairwiseMatrix:
    def test_all_zero(self):
        days = make_days([[0, 0], [0, 0]])
        assert np.array_equal(pairwise_distance_matrix(days), np.zeros((2, 2)))

    def test_three_day_case(self):
        days = make_days([[0, 0], [0, 0], [10, 10]])
        mat = pairwise_distance_matrix(days)
        assert mat[0, 1] == 0.0
        assert mat[0, 2] == mat[1, 2] == 20.0
        assert np.array_equal(mat, mat.T)

    def test_symmetric_random(self, rng):
        days = random_days(rng, 7, 6, scale=3.0)
        mat = pairwise_distance_matrix(days)
        assert np.array_equal(mat, mat.T)
        assert np.array_equal(np.diag(mat), np.zeros(7))

    def test_needs_two_days(self):
        with pytest.raises(InvalidInputError):
            pairwise_distance_matrix(make_days([[1, 2]]))
