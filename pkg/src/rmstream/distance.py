"""Warped distance between daily sub-patterns.

The metric is a weighted dynamic time warping: aligning reading i of the
query day with reading j of the other day costs weights[i] * |a_i - b_j|
(squared difference behind a config switch), the warping path optionally
constrained to a Sakoe-Chiba band.  Weights default to uniform, in which
case the distance is symmetric.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ._kernels import KERNEL_NAME, dtw_cost
from .core import DayPattern, DistanceConfig, InvalidInputError

_UNIFORM = (1.0,)


def kernel_name() -> str:
    """Which DTW kernel is active: 'compiled' or 'python'."""
    return KERNEL_NAME


def _weights_for(cfg: DistanceConfig, m: int) -> tuple[float, ...]:
    if cfg.weights is None:
        return _UNIFORM * m
    return cfg.weights


def dtw_distance(a: DayPattern, b: DayPattern, cfg: DistanceConfig = DistanceConfig()) -> float:
    """Warped distance between two day patterns of equal length."""
    if a.m != b.m:
        raise InvalidInputError(f"pattern lengths differ: {a.m} vs {b.m}")
    cfg.validate_for_length(a.m)
    band = -1 if cfg.band_radius is None else cfg.band_radius
    return dtw_cost(a.values, b.values, _weights_for(cfg, a.m), band, cfg.squared)


def pairwise_distance_matrix(
    tsd: Sequence[DayPattern], cfg: DistanceConfig = DistanceConfig()
) -> np.ndarray:
    """Full N x N distance matrix over a sequence of days.

    The diagonal is zero; the matrix is symmetric under uniform weights
    (cells are computed once with i as the query axis and mirrored only
    when weights are uniform).
    """
    n = len(tsd)
    if n < 2:
        raise InvalidInputError("need at least 2 days for a pairwise matrix")
    out = np.zeros((n, n), dtype=np.float64)
    symmetric = cfg.weights is None
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if symmetric and j < i:
                out[i, j] = out[j, i]
            else:
                out[i, j] = dtw_distance(tsd[i], tsd[j], cfg)
    return out
