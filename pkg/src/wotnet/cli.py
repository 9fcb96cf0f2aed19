"""Command-line front end: reproducible analysis runs with CSV outputs.

Every run that writes files also writes a `manifest.json` recording the
resolved configuration, the input checksum, the tool version and the list
of produced files.  Outputs are written atomically (temp file + rename)
and floats are formatted with %.12g, so identical (input, config, seed)
runs produce byte-identical files except for the manifest timestamp.

Exit codes: 0 success, 1 usage error, 2 input error, 3 analysis error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import __version__
from .categories import (
    CategoryLabel,
    CategoryThresholds,
    categorize,
    category_summary,
    negative_fraction,
    reputation_vs_indegree_scatter,
)
from .distributions import Distribution, from_values, log_binned_ccdf
from .dynamics import (
    Snapshot,
    TrajectorySelection,
    gini_point,
    plain_jaccard,
    snapshot_series,
    stability_step,
    top_k_lists,
    trajectories,
)
from .model import (
    EventLog,
    IngestError,
    IngestReport,
    Layer,
    SynthConfig,
    ingest,
    node_metrics,
    split_layers,
    synth_log,
    write_log_csv,
)
from .static import (
    RANKING_KEYS,
    avg_neighbor_degree_spectrum,
    clustering_spectrum,
    configuration_null,
    log_binned_means,
    mean_clustering,
    ranking_report,
    reputation_by_indegree,
    reputation_distributions,
    spectrum_trend,
    weight_distribution,
)
from .temporal import (
    MAX_TZ_SHIFT,
    MIN_TZ_SHIFT,
    annotations_for,
    burstiness,
    circadian_profile,
    daily_series,
    interevent_distribution,
    interevent_times,
    load_annotations,
    weekly_profile,
    yearly_burstiness,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_ANALYSIS = 3

LAYERS = (Layer.REWARDING, Layer.PUNITIVE)


class InputError(Exception):
    """Problem with the input data or auxiliary files (exit 2)."""


class UsageError(Exception):
    """Invalid configuration discovered after argument parsing (exit 1)."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract here reserves 2
    # for input problems, so route usage failures to exit 1
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.12g" % value
    if isinstance(value, date):
        return value.isoformat()
    if isinstance(value, Layer):
        return value.value
    if isinstance(value, CategoryLabel):
        return value.value
    return str(value)


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.parent / (path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


class RunWriter:
    """Collects the CSV outputs of one run and finalizes the manifest."""

    def __init__(self, out_dir: Path):
        out_dir.mkdir(parents=True, exist_ok=True)
        self.out_dir = out_dir
        self.outputs: list[str] = []

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
        lines = [",".join(header)]
        lines.extend(",".join(_fmt(cell) for cell in row) for row in rows)
        _atomic_write(self.out_dir / name, "\n".join(lines) + "\n")
        self.outputs.append(name)

    def write_manifest(self, command: str, config: dict, input_sha256: str | None) -> None:
        manifest = {
            "command": command,
            "config": config,
            "created_utc": datetime.now(timezone.utc).isoformat(),
            "input_sha256": input_sha256,
            "outputs": sorted(self.outputs),
            "tool": "wotnet",
            "version": __version__,
        }
        _atomic_write(
            self.out_dir / "manifest.json",
            json.dumps(manifest, indent=2, sort_keys=True) + "\n",
        )


def _sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


# ---------------------------------------------------------------------------
# configuration


DEFAULTS: dict = {
    "input": None,
    "out": None,
    "tz_shift": -6,
    "thresholds": (0.25, 0.75),
    "topk": 10,
    "null_samples": 20,
    "seed": None,
    "mode": "lenient",
    "annotations": None,
}

_CONFIG_PARSERS = {
    "input": str,
    "out": str,
    "tz_shift": int,
    "thresholds": lambda s: _parse_thresholds(s),
    "topk": int,
    "null_samples": int,
    "seed": int,
    "mode": str,
    "annotations": str,
}


def _parse_thresholds(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError("thresholds must be LOW,HIGH")
    return float(parts[0]), float(parts[1])


def _thresholds_arg(text: str) -> tuple[float, float]:
    try:
        return _parse_thresholds(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read_config_file(path: str) -> dict:
    values: dict = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise InputError(f"cannot read config file: {exc}") from exc
    for i, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in _CONFIG_PARSERS:
            raise UsageError(f"{path}: line {i}: unknown config entry {line!r}")
        try:
            values[key] = _CONFIG_PARSERS[key](value.strip())
        except ValueError as exc:
            raise UsageError(f"{path}: line {i}: {exc}") from None
    return values


def _resolve_config(args: argparse.Namespace) -> dict:
    """DEFAULTS, overlaid by the config file, overlaid by explicit flags."""
    config = dict(DEFAULTS)
    if getattr(args, "config", None):
        config.update(_read_config_file(args.config))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            config[key] = value
    if config["mode"] not in ("strict", "lenient"):
        raise UsageError(f"mode must be 'strict' or 'lenient', got {config['mode']!r}")
    if not MIN_TZ_SHIFT <= config["tz_shift"] <= MAX_TZ_SHIFT:
        raise UsageError(
            f"tz-shift must be in [{MIN_TZ_SHIFT}, {MAX_TZ_SHIFT}], got {config['tz_shift']}"
        )
    if config["topk"] < 1:
        raise UsageError(f"topk must be >= 1, got {config['topk']}")
    if config["null_samples"] < 1:
        raise UsageError(f"null-samples must be >= 1, got {config['null_samples']}")
    try:
        CategoryThresholds(*config["thresholds"])
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return config


def _require(config: dict, key: str, why: str):
    if config[key] is None:
        raise UsageError(f"--{key.replace('_', '-')} is required {why}")
    return config[key]


def _config_for_manifest(config: dict) -> dict:
    out = dict(config)
    out["thresholds"] = list(config["thresholds"])
    return out


def _load_log(config: dict) -> tuple[EventLog, IngestReport]:
    path = _require(config, "input", "to read an event log")
    if not os.path.exists(path):
        raise InputError(f"input file not found: {path}")
    try:
        return ingest(path, mode=config["mode"])
    except IngestError as exc:
        raise InputError(str(exc)) from exc
    except OSError as exc:
        raise InputError(f"cannot read input: {exc}") from exc


def _thresholds(config: dict) -> CategoryThresholds:
    low, high = config["thresholds"]
    try:
        return CategoryThresholds(low, high)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------
# per-analysis output builders (shared between the subcommands and `all`)


def _distribution_rows(dist: Distribution, *prefix) -> Iterable[tuple]:
    for v, p, c in zip(dist.support, dist.pmf, dist.ccdf):
        yield (*prefix, int(v), float(p), float(c))


def _write_static(writer: RunWriter, log: EventLog, config: dict) -> None:
    seed = _require(config, "seed", "for the configuration-model null")
    n_samples = config["null_samples"]
    if n_samples < 1:
        raise UsageError("--null-samples must be >= 1")
    metrics = node_metrics(log)
    layer_plus, layer_minus = split_layers(log)
    pair = ((Layer.REWARDING, layer_plus), (Layer.PUNITIVE, layer_minus))

    writer.write_csv(
        "weight_distribution.csv",
        ["layer", "weight", "pmf", "ccdf"],
        (row for layer, view in pair for row in _distribution_rows(weight_distribution(view), layer)),
    )

    def degree_rows():
        for layer in LAYERS:
            for direction in ("in", "out"):
                attr = f"k_{direction}_{layer.short}"
                dist = from_values([getattr(m, attr) for m in metrics.values()])
                for row in _distribution_rows(dist, layer, direction):
                    yield row

    writer.write_csv(
        "degree_distributions.csv",
        ["layer", "direction", "degree", "pmf", "ccdf"],
        degree_rows(),
    )

    rho_p, rho_m, rho = reputation_distributions(metrics)
    writer.write_csv(
        "reputation_distributions.csv",
        ["measure", "value", "pmf", "ccdf"],
        (
            row
            for measure, dist in (
                ("rho_plus", rho_p),
                ("rho_minus", rho_m),
                ("rho", rho),
            )
            for row in _distribution_rows(dist, measure)
        ),
    )

    clustering_rows = []
    clustering_binned_rows = []
    null_summary_rows = []
    for layer, view in pair:
        spectrum = clustering_spectrum(view)
        centers, means = log_binned_means(spectrum)
        clustering_binned_rows.extend(
            (layer, float(c), float(m)) for c, m in zip(centers, means)
        )
        null = configuration_null(view, n_samples, seed)
        null_by_degree = {
            int(d): (float(m), float(s))
            for d, m, s in zip(null.degree, null.null_mean, null.null_std)
        }
        for d, m, s, n in zip(
            spectrum.degree, spectrum.mean_value, spectrum.std_value, spectrum.n_nodes
        ):
            nm, ns = null_by_degree.get(int(d), (None, None))
            clustering_rows.append((layer, int(d), float(m), float(s), int(n), nm, ns))
        null_summary_rows.append(
            (
                layer,
                null.empirical_mean_clustering,
                null.null_mean_clustering,
                null.null_std_clustering,
                null.n_samples,
                null.swaps_target,
                min(null.swaps_done),
                null.seed,
            )
        )
    writer.write_csv(
        "clustering_spectrum.csv",
        ["layer", "degree", "mean_clustering", "std_clustering", "n_nodes", "null_mean", "null_std"],
        clustering_rows,
    )
    writer.write_csv(
        "clustering_binned.csv",
        ["layer", "bin_center", "mean_clustering"],
        clustering_binned_rows,
    )
    writer.write_csv(
        "clustering_null.csv",
        [
            "layer",
            "empirical_mean",
            "null_mean",
            "null_std",
            "n_samples",
            "swaps_target",
            "min_swaps_done",
            "seed",
        ],
        null_summary_rows,
    )

    # single-rating vs. repeated/strong-rating sub-layers of L+, under both
    # degree conventions (all nodes vs. degree >= 2 only)
    norm_rows = []
    for convention, include_low in (("all_nodes", True), ("degree_ge_2", False)):
        for sublayer, lo, hi in (("w_eq_1", 1, 1), ("w_gt_1", 2, 10)):
            view = layer_plus.restrict_weights(lo, hi)
            norm_rows.append((convention, sublayer, mean_clustering(view, include_low)))
    writer.write_csv(
        "norm_breaking_clustering.csv",
        ["convention", "sublayer", "mean_clustering"],
        norm_rows,
    )

    annd_rows = []
    binned_rows = []
    trend_rows = []
    for layer, view in pair:
        spectrum = avg_neighbor_degree_spectrum(view)
        for d, m, s, n in zip(
            spectrum.degree, spectrum.mean_value, spectrum.std_value, spectrum.n_nodes
        ):
            annd_rows.append((layer, int(d), float(m), float(s), int(n)))
        centers, means = log_binned_means(spectrum)
        binned_rows.extend(
            (layer, float(c), float(m)) for c, m in zip(centers, means)
        )
        trend_rows.append((layer, spectrum_trend(spectrum)))
    writer.write_csv(
        "neighbor_degree_spectrum.csv",
        ["layer", "degree", "mean_neighbor_degree", "std_neighbor_degree", "n_nodes"],
        annd_rows,
    )
    writer.write_csv(
        "neighbor_degree_binned.csv",
        ["layer", "bin_center", "mean_neighbor_degree"],
        binned_rows,
    )
    writer.write_csv(
        "neighbor_degree_trend.csv", ["layer", "spearman"], trend_rows
    )

    report = ranking_report(metrics)
    writer.write_csv(
        "tau_matrix.csv",
        ["key", *RANKING_KEYS],
        (
            (key, *(float(report.tau_matrix[i, j]) for j in range(len(RANKING_KEYS))))
            for i, key in enumerate(RANKING_KEYS)
        ),
    )
    writer.write_csv(
        "ranking.csv",
        ["rank", "user", "k_in_plus", "k_in_minus", "k_out_plus", "k_out_minus", "rho"],
        report.by_inplus_rank,
    )

    rep_rows = []
    for layer in LAYERS:
        spectrum = reputation_by_indegree(metrics, layer)
        rep_rows.extend(
            (layer, int(d), float(m), float(s), int(n))
            for d, m, s, n in zip(
                spectrum.degree, spectrum.mean_value, spectrum.std_value, spectrum.n_nodes
            )
        )
    writer.write_csv(
        "reputation_by_indegree.csv",
        ["layer", "in_degree", "mean_rho", "std_rho", "n_users"],
        rep_rows,
    )


def _write_categories(writer: RunWriter, log: EventLog, config: dict) -> None:
    thresholds = _thresholds(config)
    metrics = node_metrics(log)
    labels = categorize(metrics, thresholds)

    writer.write_csv(
        "categories.csv",
        ["user", "rho_plus", "rho_minus", "rho", "r", "label"],
        (
            (
                u,
                m.rho_plus,
                m.rho_minus,
                m.rho,
                negative_fraction(m),
                labels[u],
            )
            for u, m in sorted(metrics.items())
        ),
    )

    stats = category_summary(metrics, labels)
    summary_rows = []
    for label, cs in stats.items():
        for quantity, summary in (
            ("rho", cs.rho),
            ("activity_plus", cs.activity_plus),
            ("activity_minus", cs.activity_minus),
            ("activity_total", cs.activity_total),
        ):
            summary_rows.append(
                (
                    label,
                    quantity,
                    cs.count,
                    summary.minimum,
                    summary.q1,
                    summary.median,
                    summary.q3,
                    summary.maximum,
                )
            )
    writer.write_csv(
        "category_summary.csv",
        ["category", "quantity", "count", "min", "q1", "median", "q3", "max"],
        summary_rows,
    )

    scatter = reputation_vs_indegree_scatter(metrics, labels)
    writer.write_csv(
        "reputation_scatter.csv",
        ["user", "k_in_total", "rho", "category"],
        ((p.user, p.k_in_total, p.rho, p.label) for p in scatter.points),
    )
    writer.write_csv(
        "reputation_scatter_slopes.csv",
        ["slope_per_rating"],
        ((s,) for s in scatter.limit_slopes),
    )


def _write_temporal(writer: RunWriter, log: EventLog, config: dict) -> None:
    shift = config["tz_shift"]
    windows = []
    if config["annotations"]:
        if not os.path.exists(config["annotations"]):
            raise InputError(f"annotation file not found: {config['annotations']}")
        try:
            windows = load_annotations(config["annotations"])
        except ValueError as exc:
            raise InputError(str(exc)) from exc

    shifts = [0] if shift == 0 else [0, shift]

    writer.write_csv(
        "daily_activity.csv",
        ["tz_shift_hours", "date", "count_plus", "count_minus", "annotations"],
        (
            (s, row.day, row.count_plus, row.count_minus, annotations_for(row.day, windows))
            for s in shifts
            for row in daily_series(log, s)
        ),
    )

    interevent_rows = []
    binned_rows = []
    burst_rows = []
    for layer in LAYERS:
        # layers without enough repeat ratings simply contribute no rows
        deltas = interevent_times(log, layer)
        if deltas.size > 0:
            dist = interevent_distribution(log, layer)
            interevent_rows.extend(_distribution_rows(dist, layer))
            binned_rows.extend(
                (layer, float(v), float(c)) for v, c in log_binned_ccdf(dist)
            )
        if deltas.size >= 2:
            burst_rows.append((None, layer, burstiness(deltas), len(deltas)))
    for row in yearly_burstiness(log):
        burst_rows.append((row.year, row.layer, row.value, row.n_samples))
    writer.write_csv(
        "interevent_distribution.csv",
        ["layer", "dt_seconds", "pmf", "ccdf"],
        interevent_rows,
    )
    writer.write_csv(
        "interevent_binned_ccdf.csv",
        ["layer", "dt_seconds", "ccdf"],
        binned_rows,
    )
    # empty year marks the whole-log rows
    writer.write_csv(
        "burstiness.csv", ["year", "layer", "B", "n_samples"], burst_rows
    )

    circ_rows = []
    week_rows = []
    for s in shifts:
        hourly = circadian_profile(log, s)
        circ_rows.extend(
            (s, hour, float(hourly[Layer.REWARDING][hour]), float(hourly[Layer.PUNITIVE][hour]))
            for hour in range(24)
        )
        weekly = weekly_profile(log, s)
        week_rows.extend(
            (s, weekday, float(weekly[Layer.REWARDING][weekday]), float(weekly[Layer.PUNITIVE][weekday]))
            for weekday in range(7)
        )
    writer.write_csv(
        "circadian_profile.csv",
        ["tz_shift_hours", "hour", "frac_plus", "frac_minus"],
        circ_rows,
    )
    writer.write_csv(
        "weekly_profile.csv",
        ["tz_shift_hours", "weekday", "frac_plus", "frac_minus"],
        week_rows,
    )


def _final_state_check(last: Snapshot, log: EventLog) -> None:
    if last.metrics != node_metrics(log):
        raise RuntimeError(
            "internal consistency check failed: final snapshot does not match "
            "aggregate per-user metrics"
        )


def _write_dynamics(writer: RunWriter, log: EventLog, config: dict) -> None:
    k = config["topk"]
    if k < 1:
        raise UsageError("--topk must be >= 1")
    gini_rows = []
    stability_rows = []
    prev_day = prev_lists = None
    last = None
    for snap in snapshot_series(log):
        point = gini_point(snap)
        if point is not None:
            gini_rows.append((point.day, point.gini_plus, point.gini_minus))
        lists = top_k_lists(snap, k)
        if prev_lists is not None:
            p = stability_step(prev_day, prev_lists, lists, k)
            # plain set overlap next to the order-sensitive index
            sj = {
                key: None
                if not prev_lists[key] and not lists[key]
                else plain_jaccard(prev_lists[key], lists[key])
                for key in ("rho_plus", "rho_minus", "rho")
            }
            stability_rows.append(
                (
                    p.day,
                    p.j_plus,
                    p.j_minus,
                    p.j_global,
                    sj["rho_plus"],
                    sj["rho_minus"],
                    sj["rho"],
                    p.truncated,
                )
            )
        prev_day, prev_lists = snap.day, lists
        last = snap
    _final_state_check(last, log)
    writer.write_csv(
        "gini_series.csv", ["date", "gini_plus", "gini_minus"], gini_rows
    )
    writer.write_csv(
        "topk_stability.csv",
        ["date", "J_plus", "J_minus", "J_global", "SJ_plus", "SJ_minus", "SJ_global", "truncated"],
        stability_rows,
    )


_SELECTIONS = {s.value: s for s in TrajectorySelection}


def _write_trajectories(
    writer: RunWriter, log: EventLog, config: dict, selection: TrajectorySelection
) -> None:
    rows = trajectories(log, selection, k=config["topk"], thresholds=_thresholds(config))
    name = f"trajectories_{selection.value.replace('-', '_')}.csv"
    writer.write_csv(
        name,
        ["user", "seq_index", "rho", "category"],
        (
            (t.user, step, value, t.category)
            for t in rows
            for step, value in enumerate(t.values, start=1)
        ),
    )


# ---------------------------------------------------------------------------
# subcommands


def _cmd_ingest_check(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    log, report = _load_log(config)
    print(f"events={report.events_kept}")
    print(f"users={report.n_users}")
    print(f"rejected={report.events_rejected}")
    for rej in report.rejections[:20]:
        print(f"line {rej.line_no}: {rej.reason}: {rej.text}", file=sys.stderr)
    if len(report.rejections) > 20:
        print(f"... {len(report.rejections) - 20} more", file=sys.stderr)
    if config["out"]:
        writer = RunWriter(Path(config["out"]))
        writer.write_csv(
            "rejected_lines.csv",
            ["line_no", "reason", "text"],
            ((r.line_no, r.reason, r.text.replace(",", ";")) for r in report.rejections),
        )
        writer.write_manifest("ingest-check", _config_for_manifest(config), _sha256(config["input"]))
    return EXIT_OK


def _cmd_summary(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    log, _report = _load_log(config)
    plus, minus = split_layers(log)
    lines = [
        f"users={len(log.users)}",
        f"events={len(log)}",
        f"e_plus={plus.n_edges}",
        f"e_minus={minus.n_edges}",
    ]
    print("\n".join(lines))
    if config["out"]:
        writer = RunWriter(Path(config["out"]))
        writer.write_csv(
            "summary.csv",
            ["users", "events", "e_plus", "e_minus"],
            [(len(log.users), len(log), plus.n_edges, minus.n_edges)],
        )
        writer.write_manifest("summary", _config_for_manifest(config), _sha256(config["input"]))
    return EXIT_OK


def _analysis_command(name: str, build) -> "callable":
    def run(args: argparse.Namespace) -> int:
        config = _resolve_config(args)
        log, _report = _load_log(config)
        writer = RunWriter(Path(_require(config, "out", "to write analysis outputs")))
        build(writer, log, config, args)
        writer.write_manifest(name, _config_for_manifest(config), _sha256(config["input"]))
        return EXIT_OK

    return run


def _cmd_trajectories(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    log, _report = _load_log(config)
    writer = RunWriter(Path(_require(config, "out", "to write analysis outputs")))
    _write_trajectories(writer, log, config, _SELECTIONS[args.selection])
    writer.write_manifest("trajectories", _config_for_manifest(config), _sha256(config["input"]))
    return EXIT_OK


def _cmd_synth(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    seed = _require(config, "seed", "to generate a synthetic log")
    try:
        synth_config = SynthConfig(
            n_users=args.users,
            n_events=args.events,
            seed=seed,
            positive_fraction=args.positive_fraction,
            score_distribution=args.scores,
            time_model=args.times,
            t_start=args.t_start,
            t_span=args.t_span,
            rate=args.rate,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    log = synth_log(synth_config)
    writer = RunWriter(Path(_require(config, "out", "to write the synthetic log")))
    target = writer.out_dir / "synthetic.csv"
    tmp = writer.out_dir / "synthetic.csv.tmp"
    write_log_csv(log, tmp)
    os.replace(tmp, target)
    writer.outputs.append("synthetic.csv")
    manifest_config = _config_for_manifest(config)
    manifest_config.update(
        users=args.users,
        events=args.events,
        positive_fraction=args.positive_fraction,
        scores=args.scores,
        times=args.times,
        t_start=args.t_start,
        t_span=args.t_span,
        rate=args.rate,
    )
    writer.write_manifest("synth", manifest_config, None)
    return EXIT_OK


def _cmd_all(args: argparse.Namespace) -> int:
    config = _resolve_config(args)
    log, _report = _load_log(config)
    writer = RunWriter(Path(_require(config, "out", "to write analysis outputs")))
    _write_static(writer, log, config)
    _write_categories(writer, log, config)
    _write_temporal(writer, log, config)
    _write_dynamics(writer, log, config)
    _write_trajectories(writer, log, config, TrajectorySelection.TOP_ENTRANTS_POSITIVE)
    _write_trajectories(writer, log, config, TrajectorySelection.TOP_ENTRANTS_NEGATIVE)
    writer.write_manifest("all", _config_for_manifest(config), _sha256(config["input"]))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_common(sub: argparse.ArgumentParser, *, needs_input: bool = True) -> None:
    if needs_input:
        sub.add_argument("--input", help="event log CSV (plain or gzip)")
        sub.add_argument("--mode", choices=("strict", "lenient"), help="ingest mode (default lenient)")
    sub.add_argument("--out", help="output directory")
    sub.add_argument("--config", help="flat key=value config file (flags win)")
    sub.add_argument("--seed", type=int, help="master seed for randomized steps")
    sub.add_argument("--tz-shift", type=int, dest="tz_shift", help="timezone shift in hours for calendar bucketing (default -6)")
    sub.add_argument("--thresholds", type=_thresholds_arg, help="category cut points LOW,HIGH (default 0.25,0.75)")
    sub.add_argument("--topk", type=int, help="ranking depth for stability and trajectories (default 10)")
    sub.add_argument("--null-samples", type=int, dest="null_samples", help="configuration-model replicas (default 20)")
    sub.add_argument("--annotations", help="label,start,end CSV of date windows joined onto daily output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="wotnet",
        description="Two-layer trust-network analysis: ingestion, static and "
        "temporal measurements, reputation dynamics.",
    )
    parser.add_argument("--version", action="version", version=f"wotnet {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    specs = [
        ("ingest-check", _cmd_ingest_check, "parse the input and report per-line diagnostics"),
        ("summary", _cmd_summary, "print user/event/layer counts"),
        ("static", _analysis_command("static", lambda w, l, c, a: _write_static(w, l, c)), "distributions, clustering vs. null, neighbor degrees, rankings"),
        ("categories", _analysis_command("categories", lambda w, l, c, a: _write_categories(w, l, c)), "user categories and their summaries"),
        ("temporal", _analysis_command("temporal", lambda w, l, c, a: _write_temporal(w, l, c)), "daily series, interevent statistics, activity profiles"),
        ("dynamics", _analysis_command("dynamics", lambda w, l, c, a: _write_dynamics(w, l, c)), "daily snapshots: Gini series and top-k stability"),
        ("trajectories", _cmd_trajectories, "per-user reputation trajectories"),
        ("synth", _cmd_synth, "generate a synthetic event log"),
        ("all", _cmd_all, "run every analysis into one output directory"),
    ]
    for name, func, help_text in specs:
        sub = commands.add_parser(name, help=help_text)
        _add_common(sub, needs_input=name != "synth")
        sub.set_defaults(func=func)
        if name == "trajectories":
            sub.add_argument(
                "--selection",
                choices=sorted(_SELECTIONS),
                default=TrajectorySelection.TOP_ENTRANTS_POSITIVE.value,
                help="which users to follow (default top-positive)",
            )
        if name == "synth":
            sub.add_argument("--users", type=int, required=True, help="number of users")
            sub.add_argument("--events", type=int, required=True, help="number of events")
            sub.add_argument("--positive-fraction", type=float, default=0.9, dest="positive_fraction")
            sub.add_argument("--scores", choices=("flat", "skewed"), default="flat")
            sub.add_argument("--times", choices=("uniform", "poisson"), default="uniform")
            sub.add_argument("--t-start", type=int, default=1_300_000_000, dest="t_start")
            sub.add_argument("--t-span", type=int, default=4 * 365 * 86_400, dest="t_span")
            sub.add_argument("--rate", type=float, default=0.01)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"wotnet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"wotnet: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, RuntimeError, ArithmeticError) as exc:
        print(f"wotnet: analysis error: {exc}", file=sys.stderr)
        return EXIT_ANALYSIS


if __name__ == "__main__":
    sys.exit(main())
