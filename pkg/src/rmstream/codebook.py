"""Compressed-state SP updating via a codebook of representative days.

An incoming day within ``d_rep`` of its closest codeword is absorbed by
that codeword (the pattern itself is discarded); otherwise it becomes a
new codeword.  Two bookkeeping variants:

* WITH_CR keeps a per-day pointer sequence, so the full (approximate)
  history can be recovered in temporal order.
* PATTERNS_DICTIONARY keeps only per-codeword occurrence counts; records
  are stored grouped in codeword blocks and carry no insertion order,
  which is the anonymized form.

Both variants produce the same multiset of SP components on the same
stream.  Codewords are frozen once inserted.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .core import (
    DayPattern,
    DistanceConfig,
    InvalidInputError,
    InvalidStateError,
    SimilarityRecord,
)
from .distance import dtw_distance


class CodebookVariant(enum.Enum):
    WITH_CR = "cr"
    PATTERNS_DICTIONARY = "pd"


@dataclass(frozen=True)
class CodebookState:
    """Codewords plus either a pointer sequence (CR) or occurrence counts (PD).

    ``cr`` entries are 1-based codeword indices, one per stored day, in
    temporal order.  ``occurrences`` is parallel to ``codewords``; records
    are then contiguous blocks of those sizes in codeword order.
    """

    codewords: tuple[DayPattern, ...]
    variant: CodebookVariant
    records: tuple[SimilarityRecord, ...]
    d_max: float
    threshold: float
    d_rep: float
    cfg: DistanceConfig
    cr: Optional[tuple[int, ...]] = None
    occurrences: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.variant is CodebookVariant.WITH_CR:
            if self.cr is None or self.occurrences is not None:
                raise InvalidInputError("WITH_CR state needs cr and no occurrences")
            if len(self.cr) != len(self.records):
                raise InvalidInputError("cr and records must have equal length")
            w = len(self.codewords)
            for idx in self.cr:
                if not (1 <= idx <= w):
                    raise InvalidInputError(f"cr index {idx} outside [1, {w}]")
        else:
            if self.occurrences is None or self.cr is not None:
                raise InvalidInputError("PD state needs occurrences and no cr")
            if len(self.occurrences) != len(self.codewords):
                raise InvalidInputError("occurrences must be parallel to codewords")
            if sum(self.occurrences) != len(self.records):
                raise InvalidInputError("occurrences must sum to the record count")

    @property
    def n_days(self) -> int:
        return len(self.records)

    @property
    def n_codewords(self) -> int:
        return len(self.codewords)

    def patterns(self) -> tuple[DayPattern, ...]:
        """Stored pattern behind each record (codewords, possibly repeated)."""
        if self.variant is CodebookVariant.WITH_CR:
            return tuple(self.codewords[i - 1] for i in self.cr)
        out = []
        for cw, n in zip(self.codewords, self.occurrences):
            out.extend([cw] * n)
        return tuple(out)

    def stored_units(self) -> int:
        """Scalar-equivalent storage: codeword samples, pointers/counts, SP."""
        w = len(self.codewords)
        m = self.codewords[0].m if self.codewords else 0
        pointers = len(self.cr) if self.variant is CodebookVariant.WITH_CR else w
        return w * m + pointers + 2 * len(self.records)

    @classmethod
    def initial(cls, first_day: DayPattern, variant: CodebookVariant,
                threshold: float, d_rep: float,
                cfg: DistanceConfig = DistanceConfig()) -> "CodebookState":
        cfg.validate_for_length(first_day.m)
        rec = (SimilarityRecord(count=0, norm_mean_dist=0.0),)
        common = dict(codewords=(first_day,), variant=variant, records=rec,
                      d_max=0.0, threshold=float(threshold),
                      d_rep=float(d_rep), cfg=cfg)
        if variant is CodebookVariant.WITH_CR:
            return cls(cr=(1,), **common)
        return cls(occurrences=(1,), **common)


def recover_tsd(codewords: Sequence[DayPattern], cr: Sequence[int]) -> tuple[DayPattern, ...]:
    """Expand a pointer sequence back into day patterns (1-based indices)."""
    out = []
    for idx in cr:
        if not (1 <= idx <= len(codewords)):
            raise InvalidStateError(f"cr index {idx} outside codebook of size {len(codewords)}")
        out.append(codewords[idx - 1])
    return tuple(out)


def _replacement_index(dists: Sequence[float], d_rep: float) -> Optional[int]:
    """0-based index of the closest codeword within d_rep, lowest on ties."""
    best = None
    best_d = None
    for i, d in enumerate(dists):
        if d <= d_rep and (best_d is None or d < best_d):
            best, best_d = i, d
    return best


def codebook_cr_update(state: CodebookState, new_day: DayPattern) -> CodebookState:
    """One update of the pointer-sequence variant.

    Distances are evaluated once per codeword and shared by all days
    mapped to it; otherwise the record arithmetic is the additive rule
    over the recovered history.
    """
    if state.variant is not CodebookVariant.WITH_CR:
        raise InvalidInputError("state is not a WITH_CR codebook")
    m = state.codewords[0].m
    if new_day.m != m:
        raise InvalidInputError(f"pattern length {new_day.m} does not match state length {m}")

    cw_dists = [dtw_distance(new_day, cw, state.cfg) for cw in state.codewords]
    day_dists = [cw_dists[idx - 1] for idx in state.cr]
    n = len(state.cr)
    d_max_new = max(state.d_max, max(day_dists))

    records = []
    for rec, d in zip(state.records, day_dists):
        dist_sum = rec.norm_mean_dist * (n - 1) * state.d_max + d
        count = rec.count + (1 if d <= state.threshold else 0)
        norm = dist_sum / (n * d_max_new) if d_max_new > 0 else 0.0
        records.append(SimilarityRecord(count=count, norm_mean_dist=norm))

    new_sum = sum(day_dists)
    new_count = sum(1 for d in day_dists if d <= state.threshold)
    new_norm = new_sum / (n * d_max_new) if d_max_new > 0 else 0.0
    records.append(SimilarityRecord(count=new_count, norm_mean_dist=new_norm))

    rep = _replacement_index(cw_dists, state.d_rep)
    if rep is not None:
        codewords = state.codewords
        cr = state.cr + (rep + 1,)
    else:
        codewords = state.codewords + (new_day,)
        cr = state.cr + (len(codewords),)

    return replace(state, codewords=codewords, cr=cr,
                   records=tuple(records), d_max=d_max_new)


def codebook_pd_update(state: CodebookState, new_day: DayPattern) -> CodebookState:
    """One update of the patterns-dictionary variant.

    One distance per codeword; each codeword's contribution to the new
    day's sums is weighted by its occurrence count, and every record in a
    codeword's block receives the same adjustment.
    """
    if state.variant is not CodebookVariant.PATTERNS_DICTIONARY:
        raise InvalidInputError("state is not a PATTERNS_DICTIONARY codebook")
    m = state.codewords[0].m
    if new_day.m != m:
        raise InvalidInputError(f"pattern length {new_day.m} does not match state length {m}")

    cw_dists = [dtw_distance(new_day, cw, state.cfg) for cw in state.codewords]
    n = len(state.records)
    d_max_new = max(state.d_max, max(cw_dists))

    blocks = []
    pos = 0
    new_sum = 0.0
    new_count = 0
    for d, occ in zip(cw_dists, state.occurrences):
        block = []
        similar = d <= state.threshold
        for rec in state.records[pos:pos + occ]:
            dist_sum = rec.norm_mean_dist * (n - 1) * state.d_max + d
            count = rec.count + (1 if similar else 0)
            norm = dist_sum / (n * d_max_new) if d_max_new > 0 else 0.0
            block.append(SimilarityRecord(count=count, norm_mean_dist=norm))
        pos += occ
        new_sum += d * occ
        if similar:
            new_count += occ
        blocks.append(block)

    new_norm = new_sum / (n * d_max_new) if d_max_new > 0 else 0.0
    new_rec = SimilarityRecord(count=new_count, norm_mean_dist=new_norm)

    rep = _replacement_index(cw_dists, state.d_rep)
    if rep is not None:
        occurrences = list(state.occurrences)
        occurrences[rep] += 1
        blocks[rep].append(new_rec)
        codewords = state.codewords
    else:
        codewords = state.codewords + (new_day,)
        occurrences = list(state.occurrences) + [1]
        blocks.append([new_rec])

    records = tuple(rec for block in blocks for rec in block)
    return replace(state, codewords=codewords, occurrences=tuple(occurrences),
                   records=records, d_max=d_max_new)


def codebook_update(state: CodebookState, new_day: DayPattern) -> CodebookState:
    """Variant dispatch."""
    if state.variant is CodebookVariant.WITH_CR:
        return codebook_cr_update(state, new_day)
    return codebook_pd_update(state, new_day)


def stream(state: CodebookState, days: Sequence[DayPattern]) -> CodebookState:
    for day in days:
        state = codebook_update(state, day)
    return state


def memory_saving(state: CodebookState, baseline_days: int) -> float:
    """Fraction of memory saved versus storing every raw day.

    Units: one per stored sample, one per pointer or occurrence count.
    Stored units are W*m + N pointers (CR) or W*m + W counts (PD); the
    baseline is N*m raw samples.  Negative when the codebook does not
    compress (short or incompressible streams).
    """
    if baseline_days < 1:
        raise InvalidInputError(f"baseline_days must be >= 1, got {baseline_days}")
    w = len(state.codewords)
    m = state.codewords[0].m
    if state.variant is CodebookVariant.WITH_CR:
        stored = w * m + len(state.cr)
    else:
        stored = w * m + w
    return 1.0 - stored / (baseline_days * m)
