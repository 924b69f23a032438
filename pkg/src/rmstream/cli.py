"""Command-line surface: state lifecycle, classification, experiments.

Exit codes: 0 success, 2 invalid input, 3 corrupt or unsupported snapshot.
"""

from __future__ import annotations

import csv
import functools
import math
import sys
from typing import Optional

import click
import pandas as pd

from . import __version__
from .additive import AdditiveState, additive_update
from .batch import compute_similarity_profile, default_threshold, extract_rm
from .classifier import ClassifierModel
from . import classifier as classifier_mod
from .codebook import CodebookState, CodebookVariant, codebook_update
from .codebook import stream as codebook_stream
from .core import (
    DayPattern,
    DistanceConfig,
    DropStrategy,
    InvalidInputError,
    InvalidStateError,
    RefinedMotif,
    RmStreamError,
    SnapshotCorruptionError,
    SnapshotVersionError,
    default_band_radius,
)
from .data_io import (
    DailyCsvSchema,
    load_daily_csv,
    snapshot_load,
    snapshot_save,
)
from .distance import kernel_name
from .experiments import (
    UNDETECTED,
    kernel_comparison,
    latency_histogram,
    run_complexity_bench,
    run_compression_experiment,
    run_switch_experiment,
)
from .fixed_memory import FixedMemoryState, fixed_update
from .fixed_memory import stream as fixed_stream

STRATEGIES = {s.value: s for s in DropStrategy}
METHODS = ("additive", "fixed", "codebook-cr", "codebook-pd")


def handle_errors(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except (SnapshotVersionError, SnapshotCorruptionError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(3)
        except (InvalidInputError, InvalidStateError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except RmStreamError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
    return wrapper


def _parse_slice(text: Optional[str], m_full: int) -> Optional[tuple[int, int]]:
    """--slice value: 'a:b', 'none', or 'auto' (middle half of the day)."""
    if text is None or text == "auto":
        return m_full // 4, (3 * m_full) // 4
    if text == "none":
        return None
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError:
        raise InvalidInputError(f"--slice must look like 'a:b', got {text!r}")


def _parse_band(text: str, m: int) -> Optional[int]:
    if text == "none":
        return None
    if text == "auto":
        return min(default_band_radius(m), m - 1)
    try:
        return int(text)
    except ValueError:
        raise InvalidInputError(f"--band must be an integer, 'auto' or 'none', got {text!r}")


def _parse_threshold(text: str) -> Optional[float]:
    if text == "auto":
        return None
    try:
        value = float(text)
    except ValueError:
        raise InvalidInputError(f"--threshold must be a number or 'auto', got {text!r}")
    if value < 0:
        raise InvalidInputError(f"--threshold must be >= 0, got {value}")
    return value


def _write_report(path, rows, fieldnames, header: dict) -> None:
    """CSV with '# key=value' provenance comment lines on top."""
    with open(path, "w", newline="") as fh:
        for key, value in header.items():
            fh.write(f"# {key}={value}\n")
        writer = csv.DictWriter(fh, fieldnames=fieldnames, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def _schema_from(fmt, user_col, date_col, time_col, value_col, pv_col,
                 interval_minutes, missing) -> DailyCsvSchema:
    if fmt == "long":
        return DailyCsvSchema(
            user_col=user_col, date_col=date_col,
            time_col=time_col or "timestamp", value_col=value_col or "value",
            pv_col=pv_col, interval_minutes=interval_minutes,
            missing_policy=missing)
    return DailyCsvSchema(user_col=user_col, date_col=date_col,
                          interval_minutes=interval_minutes, missing_policy=missing)


def _emit_rejections(rejected, report_path) -> None:
    if report_path:
        _write_report(report_path, [vars(r) for r in rejected],
                      ["user", "date", "reason"], {"rejected_days": len(rejected)})
    else:
        for r in rejected:
            click.echo(f"rejected: user={r.user} date={r.date} ({r.reason})", err=True)


@click.group()
@click.version_option(__version__)
def cli():
    """Streaming similarity-profile and refined-motif toolkit."""


ingest_options = [
    click.option("--format", "fmt", type=click.Choice(["wide", "long"]), default="wide",
                 show_default=True, help="CSV layout."),
    click.option("--user-col", default="user", show_default=True),
    click.option("--date-col", default="date", show_default=True),
    click.option("--time-col", default=None, help="Timestamp column (long layout)."),
    click.option("--value-col", default=None, help="Reading column (long layout)."),
    click.option("--pv-col", default=None,
                 help="PV column (long layout); ingests net = max(load - pv, 0)."),
    click.option("--interval-minutes", default=30, show_default=True),
    click.option("--missing", type=click.Choice(["reject", "interpolate"]),
                 default="reject", show_default=True),
    click.option("--report", "report_path", default=None,
                 help="Write rejected-day report CSV here instead of stderr."),
]


def add_options(options):
    def deco(f):
        for option in reversed(options):
            f = option(f)
        return f
    return deco


@cli.command()
@click.argument("input_csv", type=click.Path(exists=True))
@click.option("--snapshot", required=True, type=click.Path(),
              help="Where to write the state snapshot.")
@click.option("--user", "user_id", default=None,
              help="User to initialize (required when the file has several).")
@click.option("--method", type=click.Choice(METHODS), default="additive",
              show_default=True)
@click.option("--strategy", type=click.Choice(sorted(STRATEGIES)), default="low",
              show_default=True, help="Dropping strategy (fixed method).")
@click.option("--memory", default=15, show_default=True,
              help="Window size M (fixed method).")
@click.option("--threshold", default="auto", show_default=True,
              help="Similarity threshold, or 'auto' for a quantile default.")
@click.option("--quantile", default=0.3, show_default=True,
              help="Quantile used by --threshold auto.")
@click.option("--d-rep", default=0.0, show_default=True,
              help="Replaceability threshold (codebook methods).")
@click.option("--band", default="auto", show_default=True,
              help="Warping band half-width: integer, 'auto' (m/8 up), or 'none'.")
@click.option("--slice", "slice_text", default="auto", show_default=True,
              help="Half-open interval range 'a:b' kept per day, 'auto' "
                   "(middle half, daylight) or 'none'.")
@add_options(ingest_options)
@handle_errors
def init(input_csv, snapshot, user_id, method, strategy, memory, threshold,
         quantile, d_rep, band, slice_text, fmt, user_col, date_col, time_col,
         value_col, pv_col, interval_minutes, missing, report_path):
    """Build an initial state from historical daily data."""
    schema = _schema_from(fmt, user_col, date_col, time_col, value_col, pv_col,
                          interval_minutes, missing)
    day_slice = _parse_slice(slice_text, schema.readings_per_day)
    per_user, rejected = load_daily_csv(input_csv, schema, day_slice)
    _emit_rejections(rejected, report_path)
    if not per_user:
        raise InvalidInputError(f"no usable days in {input_csv}")
    if user_id is None:
        if len(per_user) > 1:
            raise InvalidInputError(
                f"{input_csv} has {len(per_user)} users; pick one with --user")
        user_id = next(iter(per_user))
    if user_id not in per_user:
        raise InvalidInputError(f"user {user_id!r} not present in {input_csv}")
    days = per_user[user_id]
    if len(days) < 2:
        raise InvalidInputError(f"user {user_id!r} has {len(days)} usable day(s); need >= 2")

    m = days[0].m
    cfg = DistanceConfig(band_radius=_parse_band(band, m), day_slice=day_slice)
    th = _parse_threshold(threshold)
    if th is None:
        th = default_threshold(days, cfg, quantile)

    if method == "additive":
        state = AdditiveState.from_batch(compute_similarity_profile(days, th, cfg))
    elif method == "fixed":
        state = fixed_stream(
            FixedMemoryState.empty(th, memory, STRATEGIES[strategy], cfg), days)
    else:
        variant = CodebookVariant.WITH_CR if method == "codebook-cr" \
            else CodebookVariant.PATTERNS_DICTIONARY
        state = codebook_stream(
            CodebookState.initial(days[0], variant, th, d_rep, cfg), days[1:])

    snapshot_save(state, snapshot)
    click.echo(f"initialized {method} state for user {user_id}: "
               f"{len(days)} days, m={m}, threshold={th:.6g} -> {snapshot}")


def _load_day_row(day_csv, cfg: DistanceConfig) -> DayPattern:
    """One incoming day from a single-row wide CSV (user/date columns optional)."""
    try:
        frame = pd.read_csv(day_csv, float_precision="round_trip")
    except Exception as exc:
        raise InvalidInputError(f"cannot parse {day_csv}: {exc}") from exc
    if len(frame) != 1:
        raise InvalidInputError(f"{day_csv} must contain exactly one day row, has {len(frame)}")
    row = frame.iloc[0]
    values = []
    for col in frame.columns:
        if col in ("user", "date"):
            continue
        try:
            values.append(float(row[col]))
        except (TypeError, ValueError) as exc:
            raise InvalidInputError(f"{day_csv}: malformed value in column {col!r}") from exc
    if cfg.day_slice is not None:
        a, b = cfg.day_slice
        if b > len(values):
            raise InvalidInputError(
                f"day has {len(values)} readings; state expects a full day of "
                f">= {b} before slicing")
        values = values[a:b]
    return DayPattern(day_index=0, values=tuple(values))


def _next_day_index(state) -> int:
    if isinstance(state, AdditiveState):
        return len(state.tsd)
    if isinstance(state, FixedMemoryState):
        return state.next_age
    return state.n_days


@cli.command()
@click.argument("snapshot", type=click.Path(exists=True))
@click.argument("day_csv", type=click.Path(exists=True))
@handle_errors
def update(snapshot, day_csv):
    """Apply one daily update to a state snapshot (rewritten atomically)."""
    state = snapshot_load(snapshot)
    if isinstance(state, ClassifierModel):
        raise InvalidInputError(f"{snapshot} holds a classifier model, not an updater state")
    day = _load_day_row(day_csv, state.cfg)
    day = DayPattern(day_index=_next_day_index(state), values=day.values)
    if isinstance(state, AdditiveState):
        state = additive_update(state, day)
    elif isinstance(state, FixedMemoryState):
        state = fixed_update(state, day)
    else:
        state = codebook_update(state, day)
    snapshot_save(state, snapshot)
    motif = extract_rm(state)
    click.echo(f"updated {snapshot}: {len(state.records)} records, "
               f"rm_index={motif.source_index}, rm_sp={motif.sp_value:.6g}")


@cli.command("rm")
@click.argument("snapshot", type=click.Path(exists=True))
@handle_errors
def rm_cmd(snapshot):
    """Print the refined motif of a state snapshot."""
    state = snapshot_load(snapshot)
    if isinstance(state, ClassifierModel):
        raise InvalidInputError(f"{snapshot} holds a classifier model, not an updater state")
    motif = extract_rm(state)
    click.echo(f"index={motif.source_index}")
    click.echo(f"sp={motif.sp_value!r}")
    click.echo("pattern=" + ",".join(repr(v) for v in motif.pattern.values))


def _read_labeled_rms(input_csv) -> list[tuple[RefinedMotif, bool]]:
    try:
        frame = pd.read_csv(input_csv)
    except Exception as exc:
        raise InvalidInputError(f"cannot parse {input_csv}: {exc}") from exc
    if "label" not in frame.columns:
        raise InvalidInputError(f"{input_csv} needs a 'label' column")
    value_cols = [c for c in frame.columns if c not in ("label", "user")]
    positives = {"1", "true", "solar", "positive", "yes"}
    samples = []
    for i, row in enumerate(frame.itertuples(index=False)):
        rowd = dict(zip(frame.columns, row))
        label = str(rowd["label"]).strip().lower() in positives
        pattern = DayPattern(day_index=i,
                             values=tuple(float(rowd[c]) for c in value_cols))
        samples.append((RefinedMotif(pattern=pattern, sp_value=0.0, source_index=i), label))
    return samples


@cli.command()
@click.argument("input_csv", type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path(), help="Model snapshot path.")
@click.option("--learning-rate", default=0.5, show_default=True)
@click.option("--epochs", default=500, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--scale/--no-scale", default=False, show_default=True,
              help="Max-scale each motif before the neuron.")
@handle_errors
def train(input_csv, out, learning_rate, epochs, seed, scale):
    """Train the single-neuron classifier on labeled refined motifs.

    INPUT_CSV needs a 'label' column plus one column per motif interval.
    """
    samples = _read_labeled_rms(input_csv)
    model = classifier_mod.train(samples, learning_rate=learning_rate,
                                 epochs=epochs, seed=seed, scale_input=scale)
    snapshot_save(model, out)
    correct = sum(1 for rm, label in samples
                  if classifier_mod.predict(model, rm)[1] == label)
    click.echo(f"trained on {len(samples)} motifs, "
               f"training accuracy {correct / len(samples):.1%} -> {out}")


@cli.command()
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.argument("inputs", nargs=-1, required=True, type=click.Path(exists=True))
@handle_errors
def classify(model_path, inputs):
    """Label refined motifs from state snapshots (.json) or motif CSVs."""
    model = snapshot_load(model_path)
    if not isinstance(model, ClassifierModel):
        raise InvalidInputError(f"{model_path} is not a classifier model snapshot")
    click.echo("source,index,probability,label")
    for path in inputs:
        if str(path).endswith(".json"):
            state = snapshot_load(path)
            motifs = [extract_rm(state)]
        else:
            motifs = [rm for rm, _ in _read_labeled_rms_or_plain(path)]
        for motif in motifs:
            prob, label = classifier_mod.predict(model, motif)
            word = "positive" if label else "negative"
            click.echo(f"{path},{motif.source_index},{prob:.6f},{word}")


def _read_labeled_rms_or_plain(path):
    """Motif CSV rows, with or without a label column."""
    try:
        frame = pd.read_csv(path)
    except Exception as exc:
        raise InvalidInputError(f"cannot parse {path}: {exc}") from exc
    value_cols = [c for c in frame.columns if c not in ("label", "user")]
    out = []
    for i, row in enumerate(frame.itertuples(index=False)):
        rowd = dict(zip(frame.columns, row))
        pattern = DayPattern(day_index=i,
                             values=tuple(float(rowd[c]) for c in value_cols))
        out.append((RefinedMotif(pattern=pattern, sp_value=0.0, source_index=i), None))
    return out


@cli.group()
def experiment():
    """Fleet-scale experiment drivers (synthetic data)."""


@experiment.command()
@click.option("--users", default=20, show_default=True)
@click.option("--days", default=30, show_default=True)
@click.option("--switch-day", default=10, show_default=True)
@click.option("--memory", default=5, show_default=True)
@click.option("--noise", default=0.02, show_default=True)
@click.option("--m", default=24, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--threshold", default="auto", show_default=True)
@click.option("--out", required=True, type=click.Path(), help="Per-user latency CSV.")
@click.option("--hist", "hist_path", default=None, type=click.Path(),
              help="Latency histogram CSV.")
@handle_errors
def switch(users, days, switch_day, memory, noise, m, seed, threshold, out, hist_path):
    """Type-switch detection latency per dropping strategy."""
    th = _parse_threshold(threshold)
    result = run_switch_experiment(users=users, days=days, switch_day=switch_day,
                                   memory=memory, noise=noise, m=m, seed=seed,
                                   threshold=th)
    header = {"experiment": "switch", "users": users, "days": days,
              "switch_day": switch_day, "memory": memory, "noise": noise,
              "m": m, "seed": seed, "threshold": threshold,
              "kernel": kernel_name()}
    _write_report(out, result["rows"], ["user", "strategy", "latency"], header)
    if hist_path:
        _write_report(hist_path, latency_histogram(result["rows"]),
                      ["strategy", "latency", "count"], header)
    for strategy, stats in result["summary"].items():
        med = stats["median_latency"]
        med_text = UNDETECTED if math.isinf(med) else f"{med:g}"
        click.echo(f"{strategy}: median latency {med_text}, "
                   f"undetected {stats['undetected']}/{stats['users']}")


@experiment.command()
@click.option("--users", default=20, show_default=True)
@click.option("--days", default=40, show_default=True)
@click.option("--noise", default=0.05, show_default=True)
@click.option("--m", default=24, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--d-rep-sweep", default="0,0.5,1,2", show_default=True)
@click.option("--lengths", default="", help="Comma list of stream lengths for the trend rows.")
@click.option("--variant", type=click.Choice(["cr", "pd"]), default="pd", show_default=True)
@click.option("--threshold", default="auto", show_default=True)
@click.option("--out", required=True, type=click.Path())
@handle_errors
def compression(users, days, noise, m, seed, d_rep_sweep, lengths, variant,
                threshold, out):
    """Memory-saving versus replaceability-threshold sweep.

    Writes the per-user sweep to OUT, the per-threshold accuracy summary
    to OUT.accuracy.csv, and (with --lengths) the stream-length trend to
    OUT.lengths.csv.
    """
    try:
        d_reps = [float(x) for x in d_rep_sweep.split(",") if x.strip() != ""]
        length_list = [int(x) for x in lengths.split(",") if x.strip() != ""]
    except ValueError:
        raise InvalidInputError("--d-rep-sweep and --lengths must be comma-separated numbers")
    th = _parse_threshold(threshold)
    result = run_compression_experiment(
        users=users, days=days, noise=noise, m=m, seed=seed,
        d_rep_values=d_reps, lengths=length_list,
        variant=CodebookVariant.WITH_CR if variant == "cr"
        else CodebookVariant.PATTERNS_DICTIONARY,
        threshold=th)
    header = {"experiment": "compression", "users": users, "days": days,
              "noise": noise, "m": m, "seed": seed, "variant": variant,
              "threshold": threshold, "d_rep_sweep": d_rep_sweep,
              "units": "1 per stored sample, 1 per pointer/count",
              "kernel": kernel_name()}
    _write_report(out, result["sweep"],
                  ["d_rep", "user", "archetype", "n_days", "n_codewords", "saving"],
                  header)
    _write_report(f"{out}.accuracy.csv", result["accuracy"],
                  ["d_rep", "mean_saving", "accuracy"], header)
    if length_list:
        _write_report(f"{out}.lengths.csv", result["lengths"],
                      ["d_rep", "days", "mean_saving"], header)
    for row in result["accuracy"]:
        click.echo(f"d_rep={row['d_rep']:g}: mean saving {row['mean_saving']:.1%}, "
                   f"accuracy {row['accuracy']:.1%}")


@cli.command()
@click.option("--n-values", default="100,1000", show_default=True)
@click.option("--m", default=24, show_default=True)
@click.option("--memory", default=15, show_default=True)
@click.option("--d-rep", default=1.0, show_default=True)
@click.option("--threshold", default=1.0, show_default=True)
@click.option("--repeats", default=30, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", required=True, type=click.Path())
@handle_errors
def bench(n_values, m, memory, d_rep, threshold, repeats, seed, out):
    """Per-update latency and memory accounting versus history length.

    Writes method timings to OUT and a compiled-versus-Python DTW kernel
    comparison to OUT.kernels.csv.
    """
    try:
        ns = [int(x) for x in n_values.split(",") if x.strip() != ""]
    except ValueError:
        raise InvalidInputError("--n-values must be comma-separated integers")
    rows = run_complexity_bench(n_values=ns, m=m, memory=memory, d_rep=d_rep,
                                threshold=threshold, repeats=repeats, seed=seed)
    header = {"bench": "complexity", "n_values": n_values, "m": m,
              "memory": memory, "d_rep": d_rep, "threshold": threshold,
              "repeats": repeats, "seed": seed,
              "units": "1 per stored sample, 1 per pointer/count, 2 per SP record",
              "kernel": kernel_name()}
    _write_report(out, rows,
                  ["method", "n_history", "per_update_seconds", "stored_units",
                   "n_codewords"], header)
    kernels = kernel_comparison(m=m, seed=seed)
    _write_report(f"{out}.kernels.csv", kernels,
                  ["kernel", "m", "calls", "seconds_per_call"], header)
    for row in rows:
        click.echo(f"{row['method']} @ N={row['n_history']}: "
                   f"{row['per_update_seconds'] * 1e3:.3f} ms/update, "
                   f"{row['stored_units']} units")
    for row in kernels:
        click.echo(f"kernel {row['kernel']}: {row['seconds_per_call'] * 1e6:.2f} us/call")


def main():
    cli()


if __name__ == "__main__":
    main()
