"""CSV ingestion, synthetic stream generation, and state snapshots.

Snapshots are self-describing JSON with a format-version tag and a
content checksum, so a truncated or tampered file fails loudly instead of
yielding a silently wrong edge state.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from .additive import AdditiveState
from .classifier import ClassifierModel
from .codebook import CodebookState, CodebookVariant
from .core import (
    DayPattern,
    DistanceConfig,
    DropStrategy,
    InvalidInputError,
    SimilarityRecord,
    SnapshotCorruptionError,
    SnapshotVersionError,
)
from .fixed_memory import FixedMemoryState

SNAPSHOT_FORMAT_VERSION = 1
SNAPSHOT_SUFFIX = ".rmstate.json"


# ---------------------------------------------------------------------------
# CSV ingestion

@dataclass(frozen=True)
class DailyCsvSchema:
    """How to read per-user daily readings from a CSV file.

    Wide layout: one row per day, readings in ``value_cols`` (or every
    column that is not the user/date column, in file order).  Long layout:
    one row per reading; set ``time_col`` and ``value_col``.  With
    ``pv_col`` set (long layout), the ingested series is the net import
    max(value - pv, 0).
    """

    user_col: str = "user"
    date_col: str = "date"
    value_cols: Optional[tuple[str, ...]] = None
    time_col: Optional[str] = None
    value_col: Optional[str] = None
    pv_col: Optional[str] = None
    interval_minutes: int = 30
    missing_policy: str = "reject"  # or "interpolate"

    def __post_init__(self):
        if self.interval_minutes <= 0 or 1440 % self.interval_minutes != 0:
            raise InvalidInputError(
                f"interval_minutes must divide 1440, got {self.interval_minutes}")
        if self.missing_policy not in ("reject", "interpolate"):
            raise InvalidInputError(f"unknown missing_policy {self.missing_policy!r}")

    @property
    def readings_per_day(self) -> int:
        return 1440 // self.interval_minutes


@dataclass(frozen=True)
class RejectedDay:
    user: str
    date: str
    reason: str


def _finish_day(values: np.ndarray, policy: str) -> Optional[np.ndarray]:
    """Resolve missing readings; None means the day is rejected."""
    if not np.isnan(values).any():
        return values
    if policy == "reject":
        return None
    s = pd.Series(values).interpolate(limit_direction="both")
    if s.isna().any():
        return None
    return s.to_numpy()


def load_daily_csv(
    path,
    schema: DailyCsvSchema = DailyCsvSchema(),
    day_slice: Optional[tuple[int, int]] = None,
) -> tuple[dict[str, list[DayPattern]], list[RejectedDay]]:
    """Read per-user chronological day patterns from a CSV file.

    Returns the patterns keyed by user plus a report of rejected days.
    Ordering is deterministic: users and dates sorted ascending, day
    indices assigned 0-based per user after rejection.
    """
    try:
        # round_trip parsing keeps readings bit-identical to their text form
        frame = pd.read_csv(path, float_precision="round_trip")
    except Exception as exc:
        raise InvalidInputError(f"cannot parse {path}: {exc}") from exc

    m_full = schema.readings_per_day
    long_layout = schema.time_col is not None
    if long_layout and schema.value_col is None:
        raise InvalidInputError("long layout needs value_col")

    per_day: dict[tuple[str, str], np.ndarray] = {}
    rejected: list[RejectedDay] = []

    if long_layout:
        for col in (schema.user_col, schema.time_col, schema.value_col):
            if col not in frame.columns:
                raise InvalidInputError(f"missing column {col!r} in {path}")
        ts = pd.to_datetime(frame[schema.time_col], errors="coerce")
        if ts.isna().any():
            bad = int(ts.isna().idxmax()) + 2  # 1-based plus header
            raise InvalidInputError(f"{path}: malformed timestamp at line {bad}")
        vals = pd.to_numeric(frame[schema.value_col], errors="coerce").to_numpy(dtype=float)
        if schema.pv_col is not None:
            pv = pd.to_numeric(frame[schema.pv_col], errors="coerce").to_numpy(dtype=float)
            vals = np.maximum(vals - pv, 0.0)
        slot = (ts.dt.hour * 60 + ts.dt.minute) // schema.interval_minutes
        users = frame[schema.user_col].astype(str)
        dates = ts.dt.date.astype(str)
        for (user, date), idx in frame.groupby([users, dates], sort=True).groups.items():
            day = np.full(m_full, np.nan)
            rows = list(idx)
            slots = slot.iloc[rows].to_numpy()
            if len(set(slots)) != len(slots):
                rejected.append(RejectedDay(user, date, "duplicate interval"))
                continue
            day[slots] = vals[rows]
            done = _finish_day(day, schema.missing_policy)
            if done is None:
                n_have = int(np.count_nonzero(~np.isnan(day)))
                rejected.append(RejectedDay(user, date, f"{n_have}/{m_full} readings"))
            else:
                per_day[(user, date)] = done
    else:
        for col in (schema.user_col, schema.date_col):
            if col not in frame.columns:
                raise InvalidInputError(f"missing column {col!r} in {path}")
        if schema.value_cols is not None:
            value_cols = list(schema.value_cols)
            for col in value_cols:
                if col not in frame.columns:
                    raise InvalidInputError(f"missing column {col!r} in {path}")
        else:
            value_cols = [c for c in frame.columns
                          if c not in (schema.user_col, schema.date_col)]
        if len(value_cols) != m_full:
            raise InvalidInputError(
                f"{path}: expected {m_full} value columns, found {len(value_cols)}")
        for pos, row in enumerate(frame.itertuples(index=False)):
            rowd = dict(zip(frame.columns, row))
            user = str(rowd[schema.user_col])
            date = str(rowd[schema.date_col])
            try:
                day = np.array([float(rowd[c]) for c in value_cols])
            except (TypeError, ValueError) as exc:
                raise InvalidInputError(
                    f"{path}: malformed row at line {pos + 2}: {exc}") from exc
            done = _finish_day(day, schema.missing_policy)
            if done is None:
                n_have = int(np.count_nonzero(~np.isnan(day)))
                rejected.append(RejectedDay(user, date, f"{n_have}/{m_full} readings"))
            else:
                per_day[(user, date)] = done

    out: dict[str, list[DayPattern]] = {}
    for user, date in sorted(per_day):
        values = per_day[(user, date)]
        if day_slice is not None:
            a, b = day_slice
            if b > len(values):
                raise InvalidInputError(
                    f"day_slice {day_slice} exceeds day length {len(values)}")
            values = values[a:b]
        days = out.setdefault(user, [])
        days.append(DayPattern(day_index=len(days), values=tuple(values)))
    return out, rejected


# ---------------------------------------------------------------------------
# Synthetic streams

@dataclass(frozen=True)
class SyntheticScenario:
    """Shape of a generated user stream.

    Solar days show a midday net-import depression (self-consumption from
    rooftop PV); non-solar days peak around midday instead.  From
    ``switch_day`` on, the archetype flips.
    """

    archetype: str = "solar"  # or "non_solar"
    days: int = 30
    m: int = 24
    switch_day: Optional[int] = None
    noise: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.archetype not in ("solar", "non_solar"):
            raise InvalidInputError(f"unknown archetype {self.archetype!r}")
        if self.days < 1:
            raise InvalidInputError(f"days must be >= 1, got {self.days}")
        if self.m < 2:
            raise InvalidInputError(f"m must be >= 2, got {self.m}")
        if self.noise < 0:
            raise InvalidInputError(f"noise must be >= 0, got {self.noise}")


def archetype_profile(archetype: str, m: int) -> np.ndarray:
    """Noise-free daily profile for one archetype."""
    t = (np.arange(m) + 0.5) / m
    base = 0.4 + 0.35 * np.sin(np.pi * t) ** 2
    if archetype == "solar":
        pv = 0.65 * np.sin(np.pi * t) ** 4
        return np.maximum(base - pv, 0.02)
    return base


def midday_slice(m: int) -> tuple[int, int]:
    """The middle half of the day, where PV self-consumption shows."""
    return m // 4, (3 * m) // 4


def generate_synthetic(scenario: SyntheticScenario) -> list[DayPattern]:
    """Deterministic per-seed stream of day patterns for one user."""
    rng = np.random.default_rng(scenario.seed)
    out = []
    for day in range(scenario.days):
        archetype = scenario.archetype
        if scenario.switch_day is not None and day >= scenario.switch_day:
            archetype = "non_solar" if archetype == "solar" else "solar"
        values = archetype_profile(archetype, scenario.m)
        if scenario.noise > 0:
            values = values + rng.normal(0.0, scenario.noise, scenario.m)
        values = np.maximum(values, 0.0)
        out.append(DayPattern(day_index=day, values=tuple(float(v) for v in values)))
    return out


# ---------------------------------------------------------------------------
# Snapshots

def _pattern_to(p: DayPattern) -> dict:
    return {"day_index": p.day_index, "values": list(p.values)}


def _pattern_from(d: dict) -> DayPattern:
    return DayPattern(day_index=d["day_index"], values=tuple(d["values"]))


def _cfg_to(cfg: DistanceConfig) -> dict:
    return {
        "band_radius": cfg.band_radius,
        "weights": list(cfg.weights) if cfg.weights is not None else None,
        "day_slice": list(cfg.day_slice) if cfg.day_slice is not None else None,
        "squared": cfg.squared,
    }


def _cfg_from(d: dict) -> DistanceConfig:
    return DistanceConfig(
        band_radius=d["band_radius"],
        weights=tuple(d["weights"]) if d["weights"] is not None else None,
        day_slice=tuple(d["day_slice"]) if d["day_slice"] is not None else None,
        squared=d["squared"],
    )


def _records_to(records) -> list:
    return [[r.count, r.norm_mean_dist] for r in records]


def _records_from(items) -> tuple[SimilarityRecord, ...]:
    return tuple(SimilarityRecord(count=c, norm_mean_dist=nm) for c, nm in items)


def _state_to_payload(state) -> tuple[str, dict]:
    if isinstance(state, AdditiveState):
        return "additive", {
            "tsd": [_pattern_to(p) for p in state.tsd],
            "records": _records_to(state.records),
            "d_max": state.d_max,
            "threshold": state.threshold,
            "cfg": _cfg_to(state.cfg),
        }
    if isinstance(state, FixedMemoryState):
        return "fixed", {
            "window": [_pattern_to(p) for p in state.window],
            "ages": list(state.ages),
            "records": _records_to(state.records),
            "d_max": state.d_max,
            "threshold": state.threshold,
            "memory": state.memory,
            "strategy": state.strategy.value,
            "cfg": _cfg_to(state.cfg),
            "next_age": state.next_age,
        }
    if isinstance(state, CodebookState):
        return "codebook", {
            "codewords": [_pattern_to(p) for p in state.codewords],
            "variant": state.variant.value,
            "cr": list(state.cr) if state.cr is not None else None,
            "occurrences": list(state.occurrences) if state.occurrences is not None else None,
            "records": _records_to(state.records),
            "d_max": state.d_max,
            "threshold": state.threshold,
            "d_rep": state.d_rep,
            "cfg": _cfg_to(state.cfg),
        }
    if isinstance(state, ClassifierModel):
        return "classifier", {
            "weights": list(state.weights),
            "bias": state.bias,
            "decision_threshold": state.decision_threshold,
            "scale_input": state.scale_input,
        }
    raise InvalidInputError(f"cannot snapshot object of type {type(state).__name__}")


def _state_from_payload(kind: str, payload: dict):
    if kind == "additive":
        return AdditiveState(
            tsd=tuple(_pattern_from(p) for p in payload["tsd"]),
            records=_records_from(payload["records"]),
            d_max=payload["d_max"],
            threshold=payload["threshold"],
            cfg=_cfg_from(payload["cfg"]),
        )
    if kind == "fixed":
        return FixedMemoryState(
            window=tuple(_pattern_from(p) for p in payload["window"]),
            ages=tuple(payload["ages"]),
            records=_records_from(payload["records"]),
            d_max=payload["d_max"],
            threshold=payload["threshold"],
            memory=payload["memory"],
            strategy=DropStrategy(payload["strategy"]),
            cfg=_cfg_from(payload["cfg"]),
            next_age=payload["next_age"],
        )
    if kind == "codebook":
        return CodebookState(
            codewords=tuple(_pattern_from(p) for p in payload["codewords"]),
            variant=CodebookVariant(payload["variant"]),
            cr=tuple(payload["cr"]) if payload["cr"] is not None else None,
            occurrences=tuple(payload["occurrences"]) if payload["occurrences"] is not None else None,
            records=_records_from(payload["records"]),
            d_max=payload["d_max"],
            threshold=payload["threshold"],
            d_rep=payload["d_rep"],
            cfg=_cfg_from(payload["cfg"]),
        )
    if kind == "classifier":
        return ClassifierModel(
            weights=tuple(payload["weights"]),
            bias=payload["bias"],
            decision_threshold=payload["decision_threshold"],
            scale_input=payload["scale_input"],
        )
    raise SnapshotCorruptionError(f"unknown snapshot kind {kind!r}")


def _checksum(kind: str, payload: dict) -> str:
    blob = json.dumps({"kind": kind, "payload": payload},
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def snapshot_save(state, path) -> None:
    """Write a state or model snapshot atomically (temp file + rename)."""
    kind, payload = _state_to_payload(state)
    doc = {
        "format_version": SNAPSHOT_FORMAT_VERSION,
        "kind": kind,
        "checksum": _checksum(kind, payload),
        "payload": payload,
    }
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(doc, fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def snapshot_load(path):
    """Load a snapshot, verifying format version and checksum first."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SnapshotCorruptionError(f"cannot read snapshot {path}: {exc}") from exc
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise SnapshotCorruptionError(f"{path} is not a snapshot file")
    if doc["format_version"] != SNAPSHOT_FORMAT_VERSION:
        raise SnapshotVersionError(
            f"{path}: format version {doc['format_version']} is not supported "
            f"(expected {SNAPSHOT_FORMAT_VERSION})")
    try:
        kind, payload, checksum = doc["kind"], doc["payload"], doc["checksum"]
    except KeyError as exc:
        raise SnapshotCorruptionError(f"{path}: missing field {exc}") from exc
    if _checksum(kind, payload) != checksum:
        raise SnapshotCorruptionError(f"{path}: checksum mismatch")
    return _state_from_payload(kind, payload)
