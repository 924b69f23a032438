"""Experiment drivers: switch detection, compression sweep, timing bench.

These back the CLI's ``experiment`` and ``bench`` subcommands and return
plain row dictionaries so reports can be written as CSV and regenerated
with any plotting tool.  Everything is deterministic under a fixed seed.
"""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass
from typing import Optional, Sequence

from . import classifier
from .additive import AdditiveState, additive_update
from .batch import compute_similarity_profile, default_threshold, extract_rm
from .codebook import CodebookState, CodebookVariant, codebook_update, memory_saving
from .codebook import stream as codebook_stream
from .core import (
    DayPattern,
    DistanceConfig,
    DropStrategy,
    RefinedMotif,
    SimilarityRecord,
)
from .data_io import SyntheticScenario, generate_synthetic
from .fixed_memory import FixedMemoryState, detect_type_switch_latency, fixed_update
from .fixed_memory import stream as fixed_stream

UNDETECTED = "undetected"


def _as_motif(pattern: DayPattern) -> RefinedMotif:
    return RefinedMotif(pattern=pattern, sp_value=0.0, source_index=pattern.day_index)


def train_archetype_classifier(
    m: int,
    noise: float,
    seed: int,
    samples_per_class: int = 30,
    learning_rate: float = 1.0,
    epochs: int = 400,
) -> classifier.ClassifierModel:
    """Fit the solar-vs-non-solar neuron on generated daily patterns.

    Solar is the positive class.
    """
    motifs = []
    for cls_i, archetype in enumerate(("non_solar", "solar")):
        days = generate_synthetic(SyntheticScenario(
            archetype=archetype, days=samples_per_class, m=m,
            noise=noise, seed=seed * 2 + cls_i))
        motifs.extend((_as_motif(day), archetype == "solar") for day in days)
    return classifier.train(motifs, learning_rate=learning_rate, epochs=epochs)


def _user_threshold(days: Sequence[DayPattern], cfg: DistanceConfig,
                    quantile: float) -> float:
    return default_threshold(days, cfg, quantile)


def run_switch_experiment(
    users: int = 20,
    days: int = 30,
    switch_day: int = 10,
    memory: int = 5,
    noise: float = 0.02,
    m: int = 24,
    seed: int = 0,
    threshold: Optional[float] = None,
    quantile: float = 0.3,
    cfg: DistanceConfig = DistanceConfig(),
) -> dict:
    """Detection-latency study for a solar-to-non-solar switching fleet.

    Every user starts solar and loses the PV system at ``switch_day``.
    Returns per-user latencies for each dropping strategy plus medians
    and undetected counts (latency None).
    """
    model = train_archetype_classifier(m, noise, seed)
    rows = []
    latencies = {s: [] for s in DropStrategy}
    for u in range(users):
        scenario = SyntheticScenario(
            archetype="solar", days=days, m=m, switch_day=switch_day,
            noise=noise, seed=seed * 100003 + u)
        user_days = generate_synthetic(scenario)
        th = threshold if threshold is not None \
            else _user_threshold(user_days[:switch_day], cfg, quantile)
        for strategy in DropStrategy:
            template = FixedMemoryState.empty(th, memory, strategy, cfg)
            latency = detect_type_switch_latency(user_days, switch_day, model, template)
            latencies[strategy].append(latency)
            rows.append({
                "user": u,
                "strategy": strategy.value,
                "latency": latency if latency is not None else UNDETECTED,
            })
    summary = {}
    for strategy, vals in latencies.items():
        finite = [v for v in vals if v is not None]
        as_inf = [v if v is not None else math.inf for v in vals]
        summary[strategy.value] = {
            "median_latency": statistics.median(as_inf),
            "undetected": len(vals) - len(finite),
            "users": len(vals),
        }
    return {"rows": rows, "summary": summary, "model": model}


def latency_histogram(rows: Sequence[dict]) -> list[dict]:
    """Bin the per-user latencies per strategy (undetected as its own bin)."""
    counts: dict[tuple[str, object], int] = {}
    for row in rows:
        key = (row["strategy"], row["latency"])
        counts[key] = counts.get(key, 0) + 1
    out = []
    for (strategy, latency), count in sorted(
            counts.items(),
            key=lambda kv: (kv[0][0], math.inf if kv[0][1] == UNDETECTED else kv[0][1])):
        out.append({"strategy": strategy, "latency": latency, "count": count})
    return out


def run_compression_experiment(
    users: int = 20,
    days: int = 40,
    m: int = 24,
    noise: float = 0.05,
    seed: int = 0,
    d_rep_values: Sequence[float] = (0.0, 0.5, 1.0, 2.0),
    lengths: Sequence[int] = (),
    variant: CodebookVariant = CodebookVariant.PATTERNS_DICTIONARY,
    threshold: Optional[float] = None,
    quantile: float = 0.3,
    cfg: DistanceConfig = DistanceConfig(),
) -> dict:
    """Memory-saving sweep over the replaceability threshold.

    Half the fleet is solar, half non-solar.  For every ``d_rep`` value
    the per-user saving and the fleet classification accuracy of the
    extracted motifs are reported; ``lengths`` additionally yields the
    mean saving as a function of stream length for each ``d_rep``.
    """
    model = train_archetype_classifier(m, noise, seed)
    fleet = []
    for u in range(users):
        archetype = "solar" if u % 2 == 0 else "non_solar"
        user_days = generate_synthetic(SyntheticScenario(
            archetype=archetype, days=days, m=m, noise=noise,
            seed=seed * 100003 + u))
        th = threshold if threshold is not None \
            else _user_threshold(user_days, cfg, quantile)
        fleet.append((u, archetype, user_days, th))

    sweep_rows = []
    accuracy_rows = []
    for d_rep in d_rep_values:
        correct = 0
        for u, archetype, user_days, th in fleet:
            state = CodebookState.initial(user_days[0], variant, th, d_rep, cfg)
            state = codebook_stream(state, user_days[1:])
            saving = memory_saving(state, state.n_days)
            sweep_rows.append({
                "d_rep": d_rep, "user": u, "archetype": archetype,
                "n_days": state.n_days, "n_codewords": state.n_codewords,
                "saving": saving,
            })
            _, label = classifier.predict(model, extract_rm(state))
            if label == (archetype == "solar"):
                correct += 1
        accuracy_rows.append({
            "d_rep": d_rep,
            "mean_saving": statistics.mean(
                r["saving"] for r in sweep_rows if r["d_rep"] == d_rep),
            "accuracy": correct / len(fleet),
        })

    length_rows = []
    for d_rep in d_rep_values:
        for length in lengths:
            savings = []
            for u, archetype, user_days, th in fleet:
                sub = user_days[:length]
                state = CodebookState.initial(sub[0], variant, th, d_rep, cfg)
                state = codebook_stream(state, sub[1:])
                savings.append(memory_saving(state, state.n_days))
            length_rows.append({
                "d_rep": d_rep, "days": length,
                "mean_saving": statistics.mean(savings),
            })
    return {"sweep": sweep_rows, "accuracy": accuracy_rows, "lengths": length_rows}


# ---------------------------------------------------------------------------
# Timing bench

def _bench_days(n: int, m: int, seed: int) -> list[DayPattern]:
    return generate_synthetic(SyntheticScenario(
        archetype="solar", days=n, m=m, noise=0.05, seed=seed))


def _representative_additive_state(days: Sequence[DayPattern], threshold: float,
                                   cfg: DistanceConfig) -> AdditiveState:
    # Timing-only shortcut: per-update cost depends on the history length,
    # not on the record values, so dummy records avoid the O(N^2) build.
    records = tuple(SimilarityRecord(count=0, norm_mean_dist=0.5) for _ in days)
    return AdditiveState(tsd=tuple(days), records=records, d_max=1.0,
                         threshold=threshold, cfg=cfg)


def _best_update_time(update, state, probe_days, repeats: int) -> float:
    # minimum over repeats: the least noise-sensitive per-update estimate
    times = []
    update(state, probe_days[0])  # warm-up
    for i in range(repeats):
        day = probe_days[i % len(probe_days)]
        t0 = time.perf_counter()
        update(state, day)
        times.append(time.perf_counter() - t0)
    return min(times)


def run_complexity_bench(
    n_values: Sequence[int] = (100, 1000),
    m: int = 24,
    memory: int = 15,
    d_rep: float = 1.0,
    threshold: float = 1.0,
    repeats: int = 30,
    seed: int = 0,
    cfg: DistanceConfig = DistanceConfig(),
) -> list[dict]:
    """Per-update wall time and stored units versus history length.

    The additive method scales linearly with the history, the fixed-memory
    method is flat, and the codebook methods scale with the codebook size.
    """
    probe = _bench_days(8, m, seed + 999)
    rows = []
    for n in n_values:
        days = _bench_days(n, m, seed)

        add_state = _representative_additive_state(days, threshold, cfg)
        t_add = _best_update_time(additive_update, add_state, probe, repeats)
        rows.append({"method": "additive", "n_history": n,
                     "per_update_seconds": t_add,
                     "stored_units": add_state.stored_units()})

        fixed_state = fixed_stream(
            FixedMemoryState.empty(threshold, memory, DropStrategy.LOW_INERTIA, cfg),
            days)
        t_fix = _best_update_time(fixed_update, fixed_state, probe, repeats)
        rows.append({"method": "fixed", "n_history": n,
                     "per_update_seconds": t_fix,
                     "stored_units": fixed_state.stored_units()})

        for variant, name in ((CodebookVariant.WITH_CR, "codebook-cr"),
                              (CodebookVariant.PATTERNS_DICTIONARY, "codebook-pd")):
            cb_state = codebook_stream(
                CodebookState.initial(days[0], variant, threshold, d_rep, cfg),
                days[1:])
            t_cb = _best_update_time(codebook_update, cb_state, probe, repeats)
            rows.append({"method": name, "n_history": n,
                         "per_update_seconds": t_cb,
                         "stored_units": cb_state.stored_units(),
                         "n_codewords": cb_state.n_codewords})
    return rows


def kernel_comparison(m: int = 48, calls: int = 2000, seed: int = 0) -> list[dict]:
    """Throughput of the compiled DTW kernel versus the pure-Python twin."""
    from ._kernels import KERNEL_NAME, dtw_cost, dtw_cost_python

    days = _bench_days(2, m, seed)
    a, b = days[0].values, days[1].values
    weights = (1.0,) * m
    kernels = [("python", dtw_cost_python)]
    if KERNEL_NAME == "compiled":
        kernels.append(("compiled", dtw_cost))
    rows = []
    for name, fn in kernels:
        fn(a, b, weights, -1, False)  # warm-up
        t0 = time.perf_counter()
        for _ in range(calls):
            fn(a, b, weights, -1, False)
        elapsed = time.perf_counter() - t0
        rows.append({"kernel": name, "m": m, "calls": calls,
                     "seconds_per_call": elapsed / calls})
    return rows
