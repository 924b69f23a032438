"""Lossless append-only SP updating.

Each incoming day is compared against every stored day (O(N) distance
evaluations), the per-day counts and distance sums are adjusted, and the
day is appended.  After any number of updates the state matches a batch
recomputation over the full history; memory grows one day per update.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

from .batch import BatchProfile
from .core import (
    DayPattern,
    DistanceConfig,
    InvalidInputError,
    SimilarityRecord,
)
from .distance import dtw_distance


@dataclass(frozen=True)
class AdditiveState:
    """Growing history plus its SP components and running max distance."""

    tsd: tuple[DayPattern, ...]
    records: tuple[SimilarityRecord, ...]
    d_max: float
    threshold: float
    cfg: DistanceConfig

    def patterns(self) -> tuple[DayPattern, ...]:
        return self.tsd

    @property
    def n_days(self) -> int:
        return len(self.tsd)

    def stored_units(self) -> int:
        """Scalar-equivalent storage: N*m samples + 2 SP components per day."""
        return len(self.tsd) * self.tsd[0].m + 2 * len(self.records) if self.tsd else 0

    @classmethod
    def initial(cls, first_day: DayPattern, threshold: float,
                cfg: DistanceConfig = DistanceConfig()) -> "AdditiveState":
        """Single-day seed state: no neighbors, zero distances."""
        cfg.validate_for_length(first_day.m)
        return cls(
            tsd=(first_day,),
            records=(SimilarityRecord(count=0, norm_mean_dist=0.0),),
            d_max=0.0,
            threshold=float(threshold),
            cfg=cfg,
        )

    @classmethod
    def from_batch(cls, profile: BatchProfile) -> "AdditiveState":
        return cls(
            tsd=profile.tsd,
            records=profile.records,
            d_max=profile.d_max,
            threshold=profile.threshold,
            cfg=profile.cfg,
        )


def additive_update(state: AdditiveState, new_day: DayPattern) -> AdditiveState:
    """Append one day and return the updated state.

    The stored normalized means are rescaled from the old to the new
    maximum distance by way of their underlying distance sums, so the
    result is identical (up to round-off) to recomputing from scratch.
    """
    if not state.tsd:
        raise InvalidInputError("additive state must hold at least one day")
    n = len(state.tsd)
    m = state.tsd[0].m
    if new_day.m != m:
        raise InvalidInputError(f"pattern length {new_day.m} does not match state length {m}")

    dists = [dtw_distance(new_day, day, state.cfg) for day in state.tsd]
    d_max_new = max(state.d_max, max(dists))

    records = []
    for rec, d in zip(state.records, dists):
        dist_sum = rec.norm_mean_dist * (n - 1) * state.d_max + d
        count = rec.count + (1 if d <= state.threshold else 0)
        norm = dist_sum / (n * d_max_new) if d_max_new > 0 else 0.0
        records.append(SimilarityRecord(count=count, norm_mean_dist=norm))

    new_sum = sum(dists)
    new_count = sum(1 for d in dists if d <= state.threshold)
    new_norm = new_sum / (n * d_max_new) if d_max_new > 0 else 0.0
    records.append(SimilarityRecord(count=new_count, norm_mean_dist=new_norm))

    return replace(
        state,
        tsd=state.tsd + (new_day,),
        records=tuple(records),
        d_max=d_max_new,
    )


def stream(state: AdditiveState, days: Sequence[DayPattern]) -> AdditiveState:
    """Fold a sequence of days into the state, one update per day."""
    for day in days:
        state = additive_update(state, day)
    return state
