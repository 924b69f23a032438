"""Shared domain types for similarity-profile streaming.

A similarity profile (SP) assigns each stored day a score

    sp = count - norm_mean_dist

where ``count`` is the number of other stored days within the similarity
threshold and ``norm_mean_dist`` is the day's mean distance to the other
stored days divided by the running maximum pairwise distance.  The day at
the SP argmax is the refined motif (RM).

The two SP components are stored separately: reconstructing the fractional
part from a single scalar via ceil(sp) - sp is ambiguous when the
normalized mean is exactly 1, the separate storage is not.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence


class RmStreamError(Exception):
    """Base class for all package errors."""


class InvalidInputError(RmStreamError, ValueError):
    """Raised when caller-supplied data violates a precondition."""


class InvalidStateError(RmStreamError, RuntimeError):
    """Raised when an operation is applied to a state that cannot support it."""


class SnapshotVersionError(RmStreamError):
    """Snapshot file written by an unsupported format version."""


class SnapshotCorruptionError(RmStreamError):
    """Snapshot file failed its integrity check or cannot be decoded."""


class DropStrategy(enum.Enum):
    """Dropping strategy for the fixed-memory updater.

    LOW_INERTIA drops the oldest stored day, HIGH_INERTIA the day with the
    lowest SP value, MEDIUM_INERTIA the day with the median SP value.
    """

    LOW_INERTIA = "low"
    MEDIUM_INERTIA = "medium"
    HIGH_INERTIA = "high"


@dataclass(frozen=True)
class DayPattern:
    """One day's consumption sub-pattern: m interval readings plus a day index."""

    day_index: int
    values: tuple[float, ...]

    def __post_init__(self):
        if self.day_index < 0:
            raise InvalidInputError(f"day_index must be >= 0, got {self.day_index}")
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 2:
            raise InvalidInputError("a day pattern needs at least 2 readings")
        for v in vals:
            if not math.isfinite(v) or v < 0:
                raise InvalidInputError(f"readings must be finite and >= 0, got {v}")
        object.__setattr__(self, "values", vals)

    @property
    def m(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class SimilarityRecord:
    """Per-day SP components: similar-day count and normalized mean distance."""

    count: int
    norm_mean_dist: float

    def __post_init__(self):
        if self.count < 0:
            raise InvalidInputError(f"count must be >= 0, got {self.count}")
        if not (0.0 <= self.norm_mean_dist <= 1.0 + 1e-12):
            raise InvalidInputError(
                f"norm_mean_dist must lie in [0, 1], got {self.norm_mean_dist}")

    def sp_value(self) -> float:
        """Derived SP score: count minus normalized mean distance."""
        return self.count - self.norm_mean_dist


def sp_value(rec: SimilarityRecord) -> float:
    """Functional form of :meth:`SimilarityRecord.sp_value`."""
    return rec.sp_value()


@dataclass(frozen=True)
class DistanceConfig:
    """Knobs for the warped distance between two day patterns.

    band_radius  half-width of the Sakoe-Chiba band, in intervals;
                 None disables the band.
    weights      per-interval annotation weights on the query axis;
                 None means uniform.
    day_slice    half-open interval-index range applied at ingestion
                 (e.g. daylight hours); None keeps the whole day.
    squared      use squared instead of absolute local differences.
    """

    band_radius: Optional[int] = None
    weights: Optional[tuple[float, ...]] = None
    day_slice: Optional[tuple[int, int]] = None

    squared: bool = False

    def __post_init__(self):
        if self.weights is not None:
            w = tuple(float(x) for x in self.weights)
            if not w:
                raise InvalidInputError("weights must not be empty")
            for x in w:
                if not math.isfinite(x) or x < 0:
                    raise InvalidInputError(f"weights must be finite and >= 0, got {x}")
            if all(x == 0.0 for x in w):
                raise InvalidInputError("weights must not be all zero")
            object.__setattr__(self, "weights", w)
        if self.day_slice is not None:
            a, b = self.day_slice
            if not (0 <= a < b):
                raise InvalidInputError(f"day_slice must be a valid half-open range, got {self.day_slice}")
            object.__setattr__(self, "day_slice", (int(a), int(b)))

    def validate_for_length(self, m: int) -> None:
        """Check length-dependent constraints against pattern length m."""
        if self.band_radius is not None and not (0 <= self.band_radius <= m - 1):
            raise InvalidInputError(
                f"band_radius must lie in [0, {m - 1}], got {self.band_radius}")
        if self.weights is not None and len(self.weights) != m:
            raise InvalidInputError(
                f"weights length {len(self.weights)} does not match pattern length {m}")


def default_band_radius(m: int) -> int:
    """Default warping-band half-width: m/8 rounded up."""
    return math.ceil(m / 8)


@dataclass(frozen=True)
class ProfileParams:
    """Parameter bundle shared by the updaters."""

    threshold: float
    d_rep: float = 0.0
    memory: int = 15
    strategy: DropStrategy = DropStrategy.LOW_INERTIA

    def __post_init__(self):
        if self.threshold < 0:
            raise InvalidInputError(f"threshold must be >= 0, got {self.threshold}")
        if self.d_rep < 0:
            raise InvalidInputError(f"d_rep must be >= 0, got {self.d_rep}")
        if self.memory < 2:
            raise InvalidInputError(f"memory must be >= 2, got {self.memory}")
        if self.d_rep > self.threshold:
            # Allowed for experimentation, but replaced days would then be
            # counted dissimilar to their own codeword.
            warnings.warn(
                f"d_rep={self.d_rep} exceeds threshold={self.threshold}; "
                "replaceable days may not count as similar", stacklevel=2)


@dataclass(frozen=True)
class RefinedMotif:
    """The argmax sub-pattern of an SP, with its score and source position."""

    pattern: DayPattern
    sp_value: float
    source_index: int
