import pytest

from rmstream import (
    AdditiveState,
    InvalidInputError,
    additive_update,
    compute_similarity_profile,
    extract_rm,
)
from rmstream.additive import stream

from .conftest import make_days, random_days


def assert_matches_batch(state, rel=1e-9):
    batch = compute_similarity_profile(state.tsd, state.threshold, state.cfg)
    assert state.d_max == pytest.approx(batch.d_max, rel=rel)
    for got, want in zip(state.records, batch.records):
        assert got.count == want.count
        assert got.norm_mean_dist == pytest.approx(want.norm_mean_dist, rel=rel, abs=1e-12)
    assert extract_rm(state).source_index == extract_rm(batch).source_index


class TestAdditiveUpdate:
    def test_three_day_case(self):
        days = make_days([[0, 0], [0, 0], [10, 10]])
        state = AdditiveState.initial(days[0], threshold=5.0)
        state = stream(state, days[1:])
        assert [r.count for r in state.records] == [1, 1, 0]
        assert [r.norm_mean_dist for r in state.records] == [0.5, 0.5, 1.0]
        assert state.d_max == 20.0

    def test_duplicate_day_reinforces(self, rng):
        days = random_days(rng, 6, 4)
        state = stream(AdditiveState.initial(days[0], threshold=0.8), days[1:])
        before = state.records[2].count
        state = additive_update(state, days[2])
        assert state.records[2].count == before + 1
        # an exact duplicate ends up with the same record as the original
        assert state.records[-1].count == state.records[2].count
        assert state.records[-1].norm_mean_dist == pytest.approx(
            state.records[2].norm_mean_dist, rel=1e-9)

    def test_stream_matches_batch(self, rng):
        days = random_days(rng, 25, 6)
        state = stream(AdditiveState.initial(days[0], threshold=0.9), days[1:])
        assert_matches_batch(state)

    def test_d_max_monotone(self, rng):
        days = random_days(rng, 15, 4)
        state = AdditiveState.initial(days[0], threshold=0.5)
        prev = state.d_max
        for day in days[1:]:
            state = additive_update(state, day)
            assert state.d_max >= prev
            prev = state.d_max

    def test_length_mismatch(self):
        state = AdditiveState.initial(make_days([[1, 2]])[0], threshold=1.0)
        with pytest.raises(InvalidInputError):
            additive_update(state, make_days([[1, 2, 3]])[0])

    def test_rm_after_each_update_matches_batch(self, rng):
        days = random_days(rng, 12, 5)
        state = AdditiveState.initial(days[0], threshold=0.7)
        for day in days[1:]:
            state = additive_update(state, day)
            batch = compute_similarity_profile(state.tsd, state.threshold, state.cfg)
            assert extract_rm(state).source_index == extract_rm(batch).source_index

    def test_stored_units(self, rng):
        days = random_days(rng, 9, 4)
        state = stream(AdditiveState.initial(days[0], threshold=0.5), days[1:])
        assert state.stored_units() == 9 * 4 + 2 * 9
