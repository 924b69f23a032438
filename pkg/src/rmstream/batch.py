"""Brute-force similarity profile and refined-motif extraction.

This is the quadratic reference path: it recomputes every pairwise
distance.  The streaming updaters are defined to reproduce it, so it
doubles as their correctness oracle and as the initializer for new states.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import (
    DayPattern,
    DistanceConfig,
    InvalidInputError,
    RefinedMotif,
    SimilarityRecord,
)
from .distance import pairwise_distance_matrix


@dataclass(frozen=True)
class BatchProfile:
    """SP over a full time-series, computed from scratch."""

    records: tuple[SimilarityRecord, ...]
    d_max: float
    threshold: float
    tsd: tuple[DayPattern, ...]
    cfg: DistanceConfig

    def patterns(self) -> tuple[DayPattern, ...]:
        return self.tsd


def compute_similarity_profile(
    tsd: Sequence[DayPattern],
    threshold: float,
    cfg: DistanceConfig = DistanceConfig(),
    d_max_override: Optional[float] = None,
) -> BatchProfile:
    """Compute the SP of a day sequence by full pairwise comparison.

    ``d_max_override`` pins the normalizing maximum distance instead of
    taking it from the matrix; the fixed-memory updater's running maximum
    is checked against windowed recomputations this way.
    """
    n = len(tsd)
    if n < 2:
        raise InvalidInputError("need at least 2 days to compute a similarity profile")
    if threshold < 0:
        raise InvalidInputError(f"threshold must be >= 0, got {threshold}")
    dist = pairwise_distance_matrix(tsd, cfg)
    d_max = float(dist.max()) if d_max_override is None else float(d_max_override)
    records = []
    for i in range(n):
        row = np.delete(dist[i], i)
        count = int(np.count_nonzero(row <= threshold))
        norm_mean = float(row.sum() / ((n - 1) * d_max)) if d_max > 0 else 0.0
        records.append(SimilarityRecord(count=count, norm_mean_dist=norm_mean))
    return BatchProfile(
        records=tuple(records),
        d_max=d_max,
        threshold=float(threshold),
        tsd=tuple(tsd),
        cfg=cfg,
    )


def default_threshold(
    tsd: Sequence[DayPattern],
    cfg: DistanceConfig = DistanceConfig(),
    quantile: float = 0.3,
) -> float:
    """Nearest-rank quantile of the off-diagonal pairwise distances.

    The similarity threshold is a free parameter; this gives a data-driven
    default (30th percentile unless overridden).
    """
    if len(tsd) < 2:
        raise InvalidInputError("need at least 2 days to derive a threshold")
    if not (0.0 < quantile < 1.0):
        raise InvalidInputError(f"quantile must lie in (0, 1), got {quantile}")
    dist = pairwise_distance_matrix(tsd, cfg)
    n = len(tsd)
    vals = sorted(dist[i, j] for i in range(n) for j in range(i + 1, n))
    rank = max(1, int(np.ceil(quantile * len(vals))))
    return float(vals[rank - 1])


def extract_rm(state) -> RefinedMotif:
    """Refined motif of any profile-like state.

    The state must expose ``records`` and ``patterns()`` of equal length.
    Ties in the SP argmax break toward the lowest index.
    """
    records = state.records
    if not records:
        raise InvalidInputError("cannot extract a refined motif from an empty state")
    patterns = state.patterns()
    best = 0
    best_sp = records[0].sp_value()
    for i in range(1, len(records)):
        sp = records[i].sp_value()
        if sp > best_sp:
            best, best_sp = i, sp
    return RefinedMotif(pattern=patterns[best], sp_value=best_sp, source_index=best)
