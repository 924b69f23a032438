"""Constant-memory SP updating over a window of M days.

Once the window is full, every incoming day replaces one stored day.
Which day is dropped is the strategy choice: oldest (low inertia), median
SP (medium), or lowest SP (high).  The normalizing maximum distance is a
running maximum over pairs ever stored together, never decreased, so SP
values are lossy but their ordering -- and hence the extracted motif --
tracks a windowed recomputation pinned to the same maximum.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .core import (
    DayPattern,
    DistanceConfig,
    DropStrategy,
    InvalidInputError,
    InvalidStateError,
    SimilarityRecord,
)
from .distance import dtw_distance


@dataclass(frozen=True)
class FixedMemoryState:
    """Window of at most M days, their SP components, and the running max."""

    window: tuple[DayPattern, ...]
    ages: tuple[int, ...]  # insertion sequence numbers, smaller = older
    records: tuple[SimilarityRecord, ...]
    d_max: float
    threshold: float
    memory: int
    strategy: DropStrategy
    cfg: DistanceConfig
    next_age: int = 0

    def patterns(self) -> tuple[DayPattern, ...]:
        return self.window

    @property
    def is_full(self) -> bool:
        return len(self.window) >= self.memory

    def stored_units(self) -> int:
        """Scalar-equivalent storage: window samples + 2 SP components per day."""
        if not self.window:
            return 0
        return len(self.window) * self.window[0].m + 2 * len(self.records)

    @classmethod
    def empty(cls, threshold: float, memory: int,
              strategy: DropStrategy = DropStrategy.LOW_INERTIA,
              cfg: DistanceConfig = DistanceConfig()) -> "FixedMemoryState":
        if memory < 2:
            raise InvalidInputError(f"memory must be >= 2, got {memory}")
        return cls(
            window=(), ages=(), records=(), d_max=0.0,
            threshold=float(threshold), memory=int(memory),
            strategy=strategy, cfg=cfg,
        )


def select_drop_index(state: FixedMemoryState) -> int:
    """Window index to evict, per the state's strategy.

    Requires a full window.  SP ties break toward the oldest day; the
    median uses the lower median for even window sizes.
    """
    if not state.is_full:
        raise InvalidStateError("cannot select a drop index before the window is full")
    if state.strategy is DropStrategy.LOW_INERTIA:
        return min(range(len(state.window)), key=lambda i: state.ages[i])
    sp = [rec.sp_value() for rec in state.records]
    if state.strategy is DropStrategy.HIGH_INERTIA:
        target = min(sp)
    else:  # MEDIUM_INERTIA: lower median
        target = sorted(sp)[(len(sp) - 1) // 2]
    candidates = [i for i, v in enumerate(sp) if v == target]
    return min(candidates, key=lambda i: state.ages[i])


def fixed_update(state: FixedMemoryState, new_day: DayPattern) -> FixedMemoryState:
    """Fold one day into the window.

    Behaves additively until the window fills; afterwards the selected day
    is dropped and every remaining record has the dropped day's distance
    swapped out for the new day's.
    """
    if state.window and new_day.m != state.window[0].m:
        raise InvalidInputError(
            f"pattern length {new_day.m} does not match state length {state.window[0].m}")
    state.cfg.validate_for_length(new_day.m)
    if not state.is_full:
        return _growing_update(state, new_day)

    drop = select_drop_index(state)
    out_day = state.window[drop]
    kept = [i for i in range(len(state.window)) if i != drop]
    window = [state.window[i] for i in kept]
    ages = [state.ages[i] for i in kept]
    records = [state.records[i] for i in kept]

    k = len(window)  # = M - 1 remaining days
    d_out = [dtw_distance(out_day, day, state.cfg) for day in window]
    d_in = [dtw_distance(new_day, day, state.cfg) for day in window]
    d_max_new = max(state.d_max, max(d_in))

    new_records = []
    for rec, do, di in zip(records, d_out, d_in):
        dist_sum = rec.norm_mean_dist * k * state.d_max - do + di
        count = rec.count - (1 if do <= state.threshold else 0) \
            + (1 if di <= state.threshold else 0)
        norm = dist_sum / (k * d_max_new) if d_max_new > 0 else 0.0
        new_records.append(SimilarityRecord(count=count, norm_mean_dist=norm))

    in_sum = sum(d_in)
    in_count = sum(1 for d in d_in if d <= state.threshold)
    in_norm = in_sum / (k * d_max_new) if d_max_new > 0 else 0.0
    new_records.append(SimilarityRecord(count=in_count, norm_mean_dist=in_norm))

    return replace(
        state,
        window=tuple(window) + (new_day,),
        ages=tuple(ages) + (state.next_age,),
        records=tuple(new_records),
        d_max=d_max_new,
        next_age=state.next_age + 1,
    )


def _growing_update(state: FixedMemoryState, new_day: DayPattern) -> FixedMemoryState:
    """Warm-up path: append without dropping (window not yet full)."""
    n = len(state.window)
    if n == 0:
        return replace(
            state,
            window=(new_day,),
            ages=(state.next_age,),
            records=(SimilarityRecord(count=0, norm_mean_dist=0.0),),
            next_age=state.next_age + 1,
        )
    dists = [dtw_distance(new_day, day, state.cfg) for day in state.window]
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
        window=state.window + (new_day,),
        ages=state.ages + (state.next_age,),
        records=tuple(records),
        d_max=d_max_new,
        next_age=state.next_age + 1,
    )


def stream(state: FixedMemoryState, days: Sequence[DayPattern]) -> FixedMemoryState:
    for day in days:
        state = fixed_update(state, day)
    return state


def detect_type_switch_latency(
    days: Sequence[DayPattern],
    switch_day: int,
    model,
    template: FixedMemoryState,
) -> Optional[int]:
    """Updates needed after a behavior switch before the motif's label flips.

    The stream is folded into a copy of ``template``; the classifier label
    of the extracted motif just before ``switch_day`` is the baseline.
    Returns the number of post-switch updates at which the label first
    differs, or None if it never does within the stream ("undetected").
    """
    from .batch import extract_rm
    from .classifier import predict

    if model is None:
        raise InvalidStateError("a trained classifier model is required")
    if switch_day < 1:
        raise InvalidInputError(f"switch_day must be >= 1, got {switch_day}")
    if switch_day >= len(days):
        return None

    state = stream(template, days[:switch_day])
    _, base_label = predict(model, extract_rm(state))
    for t, day in enumerate(days[switch_day:], start=1):
        state = fixed_update(state, day)
        _, label = predict(model, extract_rm(state))
        if label != base_label:
            return t
    return None
