"""Ranking experiments: ordering tallies, metric agreement, and reranking.

The ground-truth experiment embeds each dataset several times with MDS,
t-SNE, and the random baseline, scores every metric at one or more embedding
scales, and tallies the quality orderings each metric induces. Scale-
invariant metrics must tally identically at every scale; the scale-sensitive
ones demonstrably do not. The reranking experiment scores externally
produced embeddings (at whatever scale they come in) under several metrics
and reports the per-metric rank tables.

Evaluating a metric at scale s uses s times the embedded distances, which is
exactly the pairwise-distance vector of the rescaled embedding.
"""

from __future__ import annotations

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping, Optional, Sequence, Tuple

import numpy as np

from .core import CondensedDistances, DataMatrix, EmbeddingMatrix, pairwise_distances
from .embedders import EmbedderConfig, Technique, classical_mds, run_embedder
from .errors import EmptyTally, ShapeMismatch, StressGaugeError
from .io_reports import DatasetSpec, MetricRecord, TallyRecord, load_dataset
from .metrics import MetricKind, compute_metric
from .monotone import spearman_rho
from .rng import derive_seed

__all__ = [
    "TechniqueOrdering",
    "OrderingTally",
    "AgreementMatrix",
    "RankTable",
    "ExperimentAResult",
    "DEFAULT_TECHNIQUES",
    "EXPECTED_ORDER",
    "run_experiment_a",
    "metric_agreement",
    "rerank_embeddings",
    "expected_order_rate",
    "ordering_to_string",
    "tally_to_record",
]

log = logging.getLogger(__name__)

#: An ordering is the tuple of technique names, best first.
TechniqueOrdering = Tuple[str, ...]

DEFAULT_TECHNIQUES: tuple[Technique, ...] = (
    Technique.SMACOF_MDS,
    Technique.TSNE,
    Technique.RANDOM,
)

#: The distance-preservation ordering the harness treats as ground truth.
EXPECTED_ORDER: TechniqueOrdering = ("mds", "tsne", "random")


@dataclass(frozen=True)
class OrderingTally:
    """Counts of each observed technique ordering across trials."""

    counts: dict  # TechniqueOrdering -> count
    total: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.total:
            raise ShapeMismatch("tally counts do not sum to the stated total")


@dataclass(frozen=True, eq=False)
class AgreementMatrix:
    """Symmetric Spearman correlations between the orderings of metric pairs."""

    metrics: tuple[MetricKind, ...]
    values: np.ndarray

    def entry(self, a: MetricKind, b: MetricKind) -> float:
        i = self.metrics.index(MetricKind(a))
        j = self.metrics.index(MetricKind(b))
        return float(self.values[i, j])


@dataclass(frozen=True, eq=False)
class RankTable:
    """Per-metric ranks of named embeddings, 1 = best; tied cells are flagged."""

    metric: MetricKind
    datasets: tuple[str, ...]
    techniques: tuple[str, ...]
    ranks: np.ndarray  # (n_datasets, n_techniques) ints
    values: np.ndarray  # raw metric values, same shape
    tied: np.ndarray  # bools, same shape


@dataclass
class ExperimentAResult:
    techniques: tuple[str, ...]
    metrics: tuple[MetricKind, ...]
    scales: tuple[float, ...]
    tallies: dict  # (MetricKind, scale) -> OrderingTally
    orderings: dict  # (MetricKind, scale) -> list[TechniqueOrdering], trial-aligned
    records: list = field(default_factory=list)  # MetricRecord rows
    skipped: list = field(default_factory=list)  # (dataset, run, reason)

    def orderings_at_scale(self, scale: float) -> dict:
        return {m: self.orderings[(m, scale)] for m in self.metrics}


def ordering_to_string(ordering: TechniqueOrdering) -> str:
    return "<".join(ordering)


def tally_to_record(metric: MetricKind, scale: float, tally: OrderingTally) -> TallyRecord:
    counts = {ordering_to_string(o): c for o, c in tally.counts.items()}
    return TallyRecord(metric=MetricKind(metric).value, scale=float(scale), total=tally.total, counts=counts)


def _order_techniques(
    values: Mapping[str, float], metric: MetricKind
) -> TechniqueOrdering:
    """Best-first ordering; SGS sorts descending, everything else ascending."""
    sign = -1.0 if MetricKind(metric).higher_is_better else 1.0
    return tuple(sorted(values, key=lambda t: (sign * values[t], t)))


def _run_trial(
    name: str,
    x: DataMatrix,
    d_high: CondensedDistances,
    c_init,
    run_idx: int,
    techniques: Sequence[Technique],
    metrics: Sequence[MetricKind],
    scales: Sequence[float],
    base_seed: int,
    config: EmbedderConfig,
):
    d_lows = {}
    for tech in techniques:
        seed = derive_seed(base_seed, name, run_idx, tech.value)
        cfg = replace(config, technique=tech, seed=seed)
        emb = run_embedder(cfg, data=x, distances=d_high, classical_init=c_init)
        d_lows[tech.value] = pairwise_distances(emb).d
    records = []
    orders = {}
    for metric in metrics:
        for scale in scales:
            values = {
                tech: compute_metric(metric, d_high.d, scale * d_low)
                for tech, d_low in d_lows.items()
            }
            orders[(metric, scale)] = _order_techniques(values, metric)
            for tech, value in values.items():
                records.append(
                    MetricRecord(
                        dataset=name,
                        technique=tech,
                        scale=float(scale),
                        metric=metric.value,
                        value=value,
                    )
                )
    return records, orders


def run_experiment_a(
    datasets: Mapping[str, DataMatrix],
    runs: int = 10,
    scales: Sequence[float] = (1.0, 10.0),
    metrics: Sequence[MetricKind] = tuple(MetricKind),
    base_seed: int = 0,
    techniques: Sequence[Technique] = DEFAULT_TECHNIQUES,
    config: Optional[EmbedderConfig] = None,
    jobs: int = 1,
) -> ExperimentAResult:
    """Embed every dataset ``runs`` times per technique and tally metric orderings.

    Per-trial seeds derive from the base seed and the (dataset, run,
    technique) identity, so results do not depend on scheduling; trials whose
    embedder fails are skipped and logged, never silently counted. The
    classical-scaling solution is computed once per dataset and reused as the
    SMACOF starting point (each run still applies its own seeded noise).
    """
    if runs < 1:
        raise ShapeMismatch("need at least one run")
    metrics = tuple(MetricKind(m) for m in metrics)
    scales = tuple(float(s) for s in scales)
    techniques = tuple(Technique(t) for t in techniques)
    config = config or EmbedderConfig()

    prepared = []
    for name, x in datasets.items():
        d_high = pairwise_distances(x)
        c_init = (
            classical_mds(d_high, config.target_dim)
            if Technique.SMACOF_MDS in techniques
            else None
        )
        prepared.append((name, x, d_high, c_init))

    trial_args = [
        (name, x, d_high, c_init, run_idx)
        for name, x, d_high, c_init in prepared
        for run_idx in range(runs)
    ]

    def execute(args):
        name, x, d_high, c_init, run_idx = args
        try:
            return args, _run_trial(
                name, x, d_high, c_init, run_idx, techniques, metrics, scales, base_seed, config
            )
        except StressGaugeError as exc:
            log.warning("skipping trial (%s, run %d): %s", name, run_idx, exc)
            return args, exc

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(execute, trial_args))
    else:
        outcomes = [execute(a) for a in trial_args]

    tallies = {(m, s): Counter() for m in metrics for s in scales}
    orderings = {(m, s): [] for m in metrics for s in scales}
    records: list[MetricRecord] = []
    skipped = []
    for args, outcome in outcomes:
        name, _, _, _, run_idx = args
        if isinstance(outcome, StressGaugeError):
            skipped.append((name, run_idx, str(outcome)))
            continue
        trial_records, orders = outcome
        records.extend(trial_records)
        for key, ordering in orders.items():
            tallies[key][ordering] += 1
            orderings[key].append(ordering)

    final_tallies = {
        key: OrderingTally(counts=dict(counter), total=sum(counter.values()))
        for key, counter in tallies.items()
    }
    return ExperimentAResult(
        techniques=tuple(t.value for t in techniques),
        metrics=metrics,
        scales=scales,
        tallies=final_tallies,
        orderings=orderings,
        records=records,
        skipped=skipped,
    )


def metric_agreement(per_trial_orderings: Mapping[MetricKind, Sequence[TechniqueOrdering]]) -> AgreementMatrix:
    """Spearman correlation of pooled per-trial technique ranks for every metric pair.

    Each trial contributes one rank per technique; ranks are concatenated
    across all trials before correlating (pooled, not averaged per dataset).
    """
    metrics = tuple(MetricKind(m) for m in per_trial_orderings)
    lists = [list(per_trial_orderings[m]) for m in metrics]
    lengths = {len(lst) for lst in lists}
    if len(lengths) != 1:
        raise ShapeMismatch("per-metric ordering lists must be aligned by trial")
    n_trials = lengths.pop()
    if n_trials == 0:
        raise EmptyTally("no trials to correlate")
    technique_order = tuple(sorted(lists[0][0]))

    def rank_vector(orderings: Sequence[TechniqueOrdering]) -> np.ndarray:
        out = np.empty(len(orderings) * len(technique_order))
        k = 0
        for ordering in orderings:
            position = {tech: r + 1 for r, tech in enumerate(ordering)}
            for tech in technique_order:
                out[k] = position[tech]
                k += 1
        return out

    vectors = [rank_vector(lst) for lst in lists]
    m = len(metrics)
    values = np.eye(m)
    for i in range(m):
        for j in range(i + 1, m):
            rho = spearman_rho(vectors[i], vectors[j])
            values[i, j] = rho
            values[j, i] = rho
    return AgreementMatrix(metrics=metrics, values=values)


def rerank_embeddings(
    x: DataMatrix,
    embeddings: Mapping[str, EmbeddingMatrix],
    metrics: Sequence[MetricKind] = (MetricKind.NORMALIZED_STRESS, MetricKind.SCALE_NORMALIZED_STRESS),
    dataset_name: str = "data",
    tie_rel_tol: float = 1e-9,
) -> dict:
    """Rank named embeddings of one dataset under each metric.

    Ranks ascend by metric value (descend for Shepard goodness); embeddings
    whose values agree to ``tie_rel_tol`` are ranked by name order and
    flagged as tied. Returns a RankTable per metric.
    """
    names = tuple(embeddings)
    if len(names) < 2:
        raise ShapeMismatch("reranking needs at least 2 embeddings")
    for name, emb in embeddings.items():
        if emb.n_rows != x.n_rows:
            raise ShapeMismatch(
                f"embedding {name!r} has {emb.n_rows} rows, data has {x.n_rows}"
            )
    d_high = pairwise_distances(x)
    d_lows = {name: pairwise_distances(emb) for name, emb in embeddings.items()}

    tables = {}
    for metric in (MetricKind(m) for m in metrics):
        values = {name: compute_metric(metric, d_high, d_lows[name]) for name in names}
        ordering = _order_techniques(values, metric)
        ranks = np.empty((1, len(names)), dtype=int)
        for position, name in enumerate(ordering):
            ranks[0, names.index(name)] = position + 1
        tied = np.zeros((1, len(names)), dtype=bool)
        for a, b in zip(ordering[:-1], ordering[1:]):
            va, vb = values[a], values[b]
            if abs(va - vb) <= tie_rel_tol * max(abs(va), abs(vb), 1e-300):
                tied[0, names.index(a)] = True
                tied[0, names.index(b)] = True
        tables[metric] = RankTable(
            metric=metric,
            datasets=(dataset_name,),
            techniques=names,
            ranks=ranks,
            values=np.array([[values[n] for n in names]]),
            tied=tied,
        )
    return tables


def expected_order_rate(tally: OrderingTally, expected: TechniqueOrdering) -> float:
    """Fraction of trials whose ordering matched the expected one."""
    if tally.total == 0:
        raise EmptyTally("tally holds no trials")
    return tally.counts.get(tuple(expected), 0) / tally.total


def desk_roster(
    data_dir,
    synthetic_n: int = 150,
    normalize: str = "minmax",
    seed: int = 0,
) -> dict:
    """The six-dataset desk-scale roster: four tabular fixtures plus two synthetics.

    ``data_dir`` must hold the committed fixture CSVs (iris/wine/penguins/
    auto-mpg stand-ins or the real files under the same names). Min-max
    normalization is the default so the heterogeneous feature scales do not
    dominate the distances.
    """
    data_dir = Path(data_dir)
    specs = [
        DatasetSpec(source=str(data_dir / "iris_sample.csv"), label_column="species", normalize=normalize),
        DatasetSpec(source=str(data_dir / "wine_sample.csv"), label_column="class", normalize=normalize),
        DatasetSpec(source=str(data_dir / "penguins_sample.csv"), label_column="species", normalize=normalize),
        DatasetSpec(source=str(data_dir / "auto_mpg_sample.csv"), normalize=normalize),
        DatasetSpec(source="swiss_roll", n_points=synthetic_n, seed=derive_seed(seed, "swiss_roll"), normalize=normalize),
        DatasetSpec(source="s_curve", n_points=synthetic_n, seed=derive_seed(seed, "s_curve"), normalize=normalize),
    ]
    roster = {}
    for spec in specs:
        name, matrix, _ = load_dataset(spec)
        roster[name] = matrix
    return roster
