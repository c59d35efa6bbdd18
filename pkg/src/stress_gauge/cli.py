"""Command-line surface.

Subcommands: ``metrics``, ``curve``, ``shepard``, ``embed``,
``experiment-a``, ``rerank``. Exit codes: 0 success, 1 usage error, 2 data
error, 3 numerical failure. Unknown flags are errors. ``--seed`` falls back
to the ``STRESS_GAUGE_SEED`` environment variable, then 0. All commands are
pure functions of their inputs: rerunning one produces byte-identical
output files.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from pathlib import Path

from . import __version__
from .core import DataMatrix, pairwise_distances
from .embedders import EmbedderConfig, Technique, run_embedder
from .errors import (
    InvalidRequest,
    NumericalFailure,
    StressGaugeError,
)
from .experiments import (
    expected_order_rate,
    metric_agreement,
    ordering_to_string,
    rerank_embeddings,
    run_experiment_a,
    tally_to_record,
    EXPECTED_ORDER,
)
from .io_reports import (
    SYNTHETIC_KINDS,
    DatasetSpec,
    MetricRecord,
    Provenance,
    ReportDocument,
    config_hash,
    load_csv_matrix,
    load_dataset,
    load_embedding_csv,
    normalize_columns,
    write_embedding_csv,
    write_report,
)
from .metrics import (
    MetricKind,
    compute_metric,
    optimal_scale,
    raw_stress,
    scale_normalized_stress,
    stress_scale_curve,
)
from .monotone import isotonic_fit, sort_for_isotonic
from .core import shepard_pairs
from .rng import derive_seed
from .svg_plots import plot_shepard, plot_stress_scale_curve

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3

_EPILOG = "exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems through the exit-code contract."""

    def error(self, message):
        raise UsageError(message)


def _metric_list(text: str) -> list[MetricKind]:
    out = []
    for token in text.split(","):
        token = token.strip().lower()
        try:
            out.append(MetricKind(token))
        except ValueError:
            raise UsageError(f"unknown metric {token!r}; choose from rs,ns,sgs,nms,sns") from None
    if not out:
        raise UsageError("no metrics requested")
    return out


def _float_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"bad numeric list {text!r}") from None


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    return int(os.environ.get("STRESS_GAUGE_SEED", "0"))


def _load_pair(args):
    """Load --data and --embedding, apply --normalize to the data side."""
    x, _ = load_csv_matrix(args.data, getattr(args, "label_column", None))
    if args.normalize != "none":
        x = DataMatrix(values=normalize_columns(x.values, args.normalize))
    p = load_embedding_csv(args.embedding)
    return x, p


def _cmd_metrics(args) -> int:
    x, p = _load_pair(args)
    d_high = pairwise_distances(x)
    d_low = pairwise_distances(p)
    if args.scale < 0:
        raise UsageError("--scale must be non-negative")
    scaled = args.scale * d_low.d
    rows = []
    for metric in args.metrics:
        value = compute_metric(metric, d_high.d, scaled)
        rows.append((metric.value, value))
        print(f"{metric.value:<4} {value:.12g}")
    if args.out:
        doc = ReportDocument(
            metrics=[
                MetricRecord(
                    dataset=Path(args.data).stem,
                    technique=Path(args.embedding).stem,
                    scale=float(args.scale),
                    metric=name,
                    value=value,
                )
                for name, value in rows
            ],
            provenance=Provenance(config_hash=config_hash(vars_for_hash(args))),
        )
        write_report(doc, args.out)
    return EXIT_OK


def vars_for_hash(args) -> dict:
    skip = {"func"}
    return {k: str(v) for k, v in sorted(vars(args).items()) if k not in skip}


def _cmd_curve(args) -> int:
    x, p = _load_pair(args)
    d_high = pairwise_distances(x)
    d_low = pairwise_distances(p)
    metric = MetricKind(args.metric)
    samples = stress_scale_curve(d_high.d, d_low.d, metric, grid=args.samples)
    alpha = optimal_scale(d_high.d, d_low.d).alpha_star
    if metric is MetricKind.NORMALIZED_STRESS:
        minimum = scale_normalized_stress(d_high.d, d_low.d)
    else:
        minimum = raw_stress(d_high.d, alpha * d_low.d)
    out = Path(args.out)
    if out.suffix.lower() == ".svg":
        plot_stress_scale_curve(samples, annotations=(alpha, minimum), path=out)
    else:
        ordered = sorted(samples, key=lambda s: s.alpha)
        lines = [f"{repr(s.alpha)},{repr(s.value)}" for s in ordered]
        out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return EXIT_OK


def _cmd_shepard(args) -> int:
    x, p = _load_pair(args)
    d_high = pairwise_distances(x)
    d_low = pairwise_distances(p)
    pairs = shepard_pairs(d_high, d_low)
    fit = isotonic_fit(sort_for_isotonic(pairs))
    plot_shepard(pairs, fit, path=args.out)
    return EXIT_OK


_METHOD_MAP = {
    "mds": Technique.SMACOF_MDS,
    "classical-mds": Technique.CLASSICAL_MDS,
    "tsne": Technique.TSNE,
    "random": Technique.RANDOM,
}


def _cmd_embed(args) -> int:
    x, _ = load_csv_matrix(args.data, getattr(args, "label_column", None))
    if args.normalize != "none":
        x = DataMatrix(values=normalize_columns(x.values, args.normalize))
    cfg = EmbedderConfig(
        technique=_METHOD_MAP[args.method],
        seed=_resolve_seed(args),
        target_dim=args.dim,
        tsne_perplexity=args.perplexity,
        tsne_iters=args.tsne_iters,
    )
    embedding = run_embedder(cfg, data=x)
    write_embedding_csv(args.out, embedding)
    return EXIT_OK


def _resolve_dataset_specs(args, base_seed: int) -> list[DatasetSpec]:
    tokens = []
    for chunk in args.datasets:
        tokens.extend(t for t in chunk.split(",") if t.strip())
    specs: list[DatasetSpec] = []
    failures: list[str] = []
    for token in tokens:
        path = Path(token)
        if token in SYNTHETIC_KINDS:
            specs.append(
                DatasetSpec(
                    source=token,
                    n_points=args.synthetic_n,
                    noise=args.synthetic_noise,
                    seed=derive_seed(base_seed, token, "synthetic"),
                    normalize=args.normalize,
                )
            )
        elif path.is_dir():
            found = sorted(path.glob("*.csv"))
            if not found:
                failures.append(f"{token}: directory holds no CSV files")
            specs.extend(
                DatasetSpec(source=str(f), normalize=args.normalize) for f in found
            )
        elif path.is_file():
            specs.append(DatasetSpec(source=str(path), normalize=args.normalize))
        else:
            failures.append(f"{token}: not a file, directory, or synthetic kind")
    if failures:
        raise StressGaugeError("dataset resolution failed:\n" + "\n".join(failures))
    if not specs:
        raise UsageError("no datasets given")
    return specs


def _cmd_experiment_a(args) -> int:
    seed = _resolve_seed(args)
    specs = _resolve_dataset_specs(args, seed)
    datasets = {}
    failures = []
    for spec in specs:
        try:
            name, matrix, _ = load_dataset(spec)
            datasets[name] = matrix
        except StressGaugeError as exc:
            failures.append(f"{spec.name}: {exc}")
    if failures:
        raise StressGaugeError("dataset loading failed:\n" + "\n".join(failures))

    result = run_experiment_a(
        datasets,
        runs=args.runs,
        scales=_float_list(args.scales),
        base_seed=seed,
        jobs=args.jobs,
    )
    agreement = metric_agreement(result.orderings_at_scale(result.scales[0]))

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    tally_records = [
        tally_to_record(m, s, result.tallies[(m, s)]) for m in result.metrics for s in result.scales
    ]
    doc = ReportDocument(
        metrics=result.records,
        tallies=tally_records,
        agreement={
            "metrics": [m.value for m in agreement.metrics],
            "matrix": agreement.values.tolist(),
        },
        provenance=Provenance(seed=seed, config_hash=config_hash(vars_for_hash(args))),
    )
    write_report(doc, out_dir / "report.json")
    write_report(ReportDocument(metrics=result.records), out_dir / "metrics.csv")

    orderings = list(itertools.permutations(result.techniques))
    for scale in result.scales:
        lines = ["ordering," + ",".join(m.value for m in result.metrics)]
        for ordering in orderings:
            cells = []
            for metric in result.metrics:
                tally = result.tallies[(metric, scale)]
                rate = 100.0 * expected_order_rate(tally, ordering) if tally.total else 0.0
                cells.append(f"{rate:.1f}%")
            lines.append(ordering_to_string(ordering) + "," + ",".join(cells))
        (out_dir / f"tally_scale_{scale:g}.csv").write_text(
            "\n".join(lines) + "\n", encoding="utf-8"
        )

    lines = ["metric," + ",".join(m.value for m in agreement.metrics)]
    for i, metric in enumerate(agreement.metrics):
        row = ",".join(f"{v:.6f}" for v in agreement.values[i])
        lines.append(f"{metric.value},{row}")
    (out_dir / "agreement.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    expected = EXPECTED_ORDER
    for metric in result.metrics:
        tally = result.tallies[(metric, result.scales[0])]
        rate = expected_order_rate(tally, expected)
        print(f"{metric.value:<4} expected-order rate {100 * rate:.1f}% of {tally.total}")
    return EXIT_OK


def _cmd_rerank(args) -> int:
    if len(args.embeddings) < 2:
        raise UsageError("rerank needs at least 2 embeddings")
    x, _ = load_csv_matrix(args.data)
    if args.normalize != "none":
        x = DataMatrix(values=normalize_columns(x.values, args.normalize))
    embeddings = {}
    for path in args.embeddings:
        name = Path(path).stem
        if name in embeddings:
            name = f"{name}-{len(embeddings)}"
        embeddings[name] = load_embedding_csv(path)
    tables = rerank_embeddings(
        x, embeddings, metrics=args.metrics, dataset_name=Path(args.data).stem
    )
    payload = {
        "schema_version": "1",
        "dataset": Path(args.data).stem,
        "rank_tables": [
            {
                "metric": metric.value,
                "ranks": {t: int(r) for t, r in zip(tbl.techniques, tbl.ranks[0])},
                "values": {t: float(v) for t, v in zip(tbl.techniques, tbl.values[0])},
                "tied": {t: bool(b) for t, b in zip(tbl.techniques, tbl.tied[0])},
            }
            for metric, tbl in tables.items()
        ],
    }
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    for metric, tbl in tables.items():
        order = [t for _, t in sorted(zip(tbl.ranks[0], tbl.techniques))]
        flags = " (ties)" if tbl.tied[0].any() else ""
        print(f"{metric.value:<4} {' < '.join(order)}{flags}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(
        prog="stress-gauge",
        description=(
            "Stress metrics for dimensionality-reduction embeddings: compute the five "
            "measures, plot stress-scale curves and Shepard diagrams, run reference "
            "embedders, and reproduce the ordering experiments. --seed falls back to "
            "$STRESS_GAUGE_SEED, then 0; reruns with identical inputs are byte-identical."
        ),
        epilog=_EPILOG,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def add_common_pair(p):
        p.add_argument("--data", required=True, help="dataset CSV")
        p.add_argument("--embedding", required=True, help="embedding CSV")
        p.add_argument("--label-column", default=None, help="dataset label column to drop")
        p.add_argument(
            "--normalize",
            choices=["none", "minmax", "zscore"],
            default="none",
            help="per-column scaling applied to the dataset before distances",
        )

    p = sub.add_parser("metrics", help="compute stress metrics for a (data, embedding) pair", epilog=_EPILOG)
    add_common_pair(p)
    p.add_argument("--metrics", type=_metric_list, default=list(MetricKind), help="comma list of rs,ns,sgs,nms,sns")
    p.add_argument("--scale", type=float, default=1.0, help="uniform scale applied to the embedding")
    p.add_argument("--out", default=None, help="write a JSON/CSV report here")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("curve", help="sample a stress-scale curve to CSV or SVG", epilog=_EPILOG)
    add_common_pair(p)
    p.add_argument("--metric", default="ns", help="scale-sensitive metric: rs or ns")
    p.add_argument("--samples", type=int, default=256, help="grid sample count")
    p.add_argument("--out", required=True, help="output path (.svg or .csv)")
    p.set_defaults(func=_cmd_curve)

    p = sub.add_parser("shepard", help="emit a Shepard diagram with its monotone fit", epilog=_EPILOG)
    add_common_pair(p)
    p.add_argument("--out", required=True, help="output SVG path")
    p.set_defaults(func=_cmd_shepard)

    p = sub.add_parser("embed", help="run a reference embedder", epilog=_EPILOG)
    p.add_argument("--data", required=True)
    p.add_argument("--label-column", default=None)
    p.add_argument("--normalize", choices=["none", "minmax", "zscore"], default="none")
    p.add_argument("--method", choices=sorted(_METHOD_MAP), required=True)
    p.add_argument("--seed", type=int, default=None, help="defaults to $STRESS_GAUGE_SEED, then 0")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--perplexity", type=float, default=30.0)
    p.add_argument("--tsne-iters", type=int, default=750)
    p.add_argument("--out", required=True, help="embedding CSV path")
    p.set_defaults(func=_cmd_embed)

    p = sub.add_parser(
        "experiment-a",
        help="tally technique orderings per metric across datasets, runs, and scales",
        epilog=_EPILOG,
    )
    p.add_argument(
        "--datasets",
        nargs="+",
        required=True,
        help="CSV files, directories of CSVs, or synthetic kinds (s_curve, swiss_roll)",
    )
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--scales", default="1,10", help="comma list of embedding scales")
    p.add_argument("--seed", type=int, default=None, help="defaults to $STRESS_GAUGE_SEED, then 0")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--normalize", choices=["none", "minmax", "zscore"], default="minmax")
    p.add_argument("--synthetic-n", type=int, default=150)
    p.add_argument("--synthetic-noise", type=float, default=0.0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=_cmd_experiment_a)

    p = sub.add_parser("rerank", help="rank externally produced embeddings per metric", epilog=_EPILOG)
    p.add_argument("--data", required=True)
    p.add_argument("--normalize", choices=["none", "minmax", "zscore"], default="none")
    p.add_argument("--embeddings", nargs="+", required=True, help="two or more embedding CSVs")
    p.add_argument(
        "--metrics",
        type=_metric_list,
        default=[MetricKind.NORMALIZED_STRESS, MetricKind.SCALE_NORMALIZED_STRESS],
    )
    p.add_argument("--out", default=None, help="write the rank tables as JSON here")
    p.set_defaults(func=_cmd_rerank)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version print and stop
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, InvalidRequest) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (StressGaugeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
