import json

import numpy as np
import pytest

from helpers import three_cluster_blobs
from stress_gauge import (
    DataMatrix,
    EmbedderConfig,
    EmptyTally,
    MetricKind,
    OrderingTally,
    ShapeMismatch,
    generate_synthetic,
    metric_agreement,
    normalize_columns,
    pairwise_distances,
    rerank_embeddings,
    run_experiment_a,
    scale_embedding,
    smacof_mds,
    random_embedding,
)
from stress_gauge.experiments import (
    EXPECTED_ORDER,
    expected_order_rate,
    ordering_to_string,
    tally_to_record,
)


def tiny_roster():
    blobs = normalize_columns(three_cluster_blobs(8, 0, dim=4), "minmax")
    curve = normalize_columns(generate_synthetic("s_curve", 30, seed=3).values, "minmax")
    return {
        "blobs": DataMatrix(values=blobs),
        "curve": DataMatrix(values=curve),
    }


def serialized_tallies(result, metric, scale):
    record = tally_to_record(metric, scale, result.tallies[(metric, scale)])
    return json.dumps({"total": record.total, "counts": dict(sorted(record.counts.items()))})


@pytest.fixture(scope="module")
def tiny_result():
    cfg = EmbedderConfig(tsne_iters=120)
    return run_experiment_a(
        tiny_roster(), runs=2, scales=(1.0, 10.0, 0.01), base_seed=5, config=cfg
    )


class TestRunExperimentA:
    def test_totals(self, tiny_result):
        for tally in tiny_result.tallies.values():
            assert tally.total == 4  # 2 datasets x 2 runs

    def test_scale_invariant_metrics_tally_identically(self, tiny_result):
        for metric in (MetricKind.SHEPARD_GOODNESS, MetricKind.NON_METRIC_STRESS, MetricKind.SCALE_NORMALIZED_STRESS):
            reference = serialized_tallies(tiny_result, metric, 1.0)
            assert serialized_tallies(tiny_result, metric, 10.0) == reference
            assert serialized_tallies(tiny_result, metric, 0.01) == reference

    def test_rs_and_ns_tally_identically(self, tiny_result):
        for scale in tiny_result.scales:
            assert serialized_tallies(tiny_result, MetricKind.RAW_STRESS, scale) == serialized_tallies(
                tiny_result, MetricKind.NORMALIZED_STRESS, scale
            )

    def test_deterministic(self, tiny_result):
        cfg = EmbedderConfig(tsne_iters=120)
        again = run_experiment_a(
            tiny_roster(), runs=2, scales=(1.0, 10.0, 0.01), base_seed=5, config=cfg
        )
        assert again.tallies == tiny_result.tallies
        assert again.orderings == tiny_result.orderings

    def test_jobs_do_not_change_results(self):
        cfg = EmbedderConfig(tsne_iters=60)
        roster = tiny_roster()
        serial = run_experiment_a(roster, runs=2, scales=(1.0,), base_seed=1, config=cfg)
        threaded = run_experiment_a(roster, runs=2, scales=(1.0,), base_seed=1, config=cfg, jobs=4)
        assert serial.tallies == threaded.tallies
        assert serial.orderings == threaded.orderings

    def test_separate_scale_lists_tally_identically_for_invariant_metrics(self):
        cfg = EmbedderConfig(tsne_iters=60)
        roster = tiny_roster()
        at_1 = run_experiment_a(roster, runs=2, scales=(1.0,), base_seed=1, config=cfg)
        at_10 = run_experiment_a(roster, runs=2, scales=(10.0,), base_seed=1, config=cfg)
        for metric in (MetricKind.SHEPARD_GOODNESS, MetricKind.NON_METRIC_STRESS, MetricKind.SCALE_NORMALIZED_STRESS):
            assert serialized_tallies(at_1, metric, 1.0) == serialized_tallies(at_10, metric, 10.0)

    def test_single_trial(self):
        roster = {"blobs": DataMatrix(values=three_cluster_blobs(8, 1, dim=3))}
        cfg = EmbedderConfig(tsne_iters=50)
        result = run_experiment_a(roster, runs=1, scales=(1.0,), base_seed=0, config=cfg)
        tally = result.tallies[(MetricKind.SCALE_NORMALIZED_STRESS, 1.0)]
        assert tally.total == 1
        assert sum(tally.counts.values()) == 1

    def test_embedder_failure_skips_trial(self, caplog):
        # 8 points: t-SNE requires at least 10, so every trial is skipped
        rng = np.random.default_rng(0)
        roster = {"toosmall": DataMatrix(values=rng.random((8, 3)))}
        result = run_experiment_a(roster, runs=2, scales=(1.0,), base_seed=0)
        assert len(result.skipped) == 2
        for tally in result.tallies.values():
            assert tally.total == 0

    def test_records_cover_all_cells(self, tiny_result):
        expected = 2 * 2 * 3 * 3 * len(MetricKind)  # datasets x runs x techniques x scales x metrics
        assert len(tiny_result.records) == expected


class TestMetricAgreement:
    def test_diagonal_and_rs_ns(self, tiny_result):
        agreement = metric_agreement(tiny_result.orderings_at_scale(1.0))
        assert np.array_equal(np.diag(agreement.values), np.ones(len(agreement.metrics)))
        assert agreement.entry("rs", "ns") == 1.0
        assert np.array_equal(agreement.values, agreement.values.T)

    def test_reversed_orderings_give_minus_one(self):
        orderings = {
            MetricKind.RAW_STRESS: [("a", "b", "c"), ("b", "a", "c")],
            MetricKind.SHEPARD_GOODNESS: [("c", "b", "a"), ("c", "a", "b")],
        }
        agreement = metric_agreement(orderings)
        assert agreement.entry("rs", "sgs") == -1.0

    def test_misaligned_lists_rejected(self):
        with pytest.raises(ShapeMismatch):
            metric_agreement(
                {
                    MetricKind.RAW_STRESS: [("a", "b")],
                    MetricKind.NORMALIZED_STRESS: [("a", "b"), ("b", "a")],
                }
            )

    def test_empty_rejected(self):
        with pytest.raises(EmptyTally):
            metric_agreement({MetricKind.RAW_STRESS: []})


@pytest.fixture(scope="module")
def fixture_embeddings():
    rng = np.random.default_rng(13)
    x = DataMatrix(values=rng.random((25, 4)))
    d_high = pairwise_distances(x)
    good = smacof_mds(d_high, EmbedderConfig(seed=1))
    noisy = type(good)(values=good.values + rng.normal(0.0, 0.05, size=good.values.shape))
    rnd = random_embedding(25, EmbedderConfig(seed=2))
    return x, good, noisy, rnd


class TestRerank:
    def test_needs_two_embeddings(self, fixture_embeddings):
        x, good, *_ = fixture_embeddings
        with pytest.raises(ShapeMismatch):
            rerank_embeddings(x, {"only": good})

    def test_row_mismatch_names_embedding(self, fixture_embeddings):
        x, good, *_ = fixture_embeddings
        bad = random_embedding(10, EmbedderConfig(seed=3))
        with pytest.raises(ShapeMismatch, match="bad"):
            rerank_embeddings(x, {"good": good, "bad": bad})

    def test_rescaled_copy_ns_differs_sns_ties(self, fixture_embeddings):
        x, good, *_ = fixture_embeddings
        double = scale_embedding(good, 10.0)
        tables = rerank_embeddings(x, {"a": good, "b": double})
        ns = tables[MetricKind.NORMALIZED_STRESS]
        sns = tables[MetricKind.SCALE_NORMALIZED_STRESS]
        assert ns.values[0, 0] != ns.values[0, 1]
        assert not ns.tied.any()
        assert sns.tied.all()
        assert sns.values[0, 0] == pytest.approx(sns.values[0, 1], rel=1e-10)

    def test_quality_fixture_order(self, fixture_embeddings):
        x, good, noisy, rnd = fixture_embeddings
        tables = rerank_embeddings(
            x,
            {"good": good, "noisy": noisy, "rnd": rnd},
            metrics=tuple(MetricKind),
        )
        sns = tables[MetricKind.SCALE_NORMALIZED_STRESS]
        assert sns.ranks[0].tolist() == [1, 2, 3]

    def test_rescaling_never_moves_invariant_tables(self, fixture_embeddings):
        x, good, noisy, rnd = fixture_embeddings
        metrics = tuple(MetricKind)
        before = rerank_embeddings(x, {"good": good, "noisy": noisy, "rnd": rnd}, metrics=metrics)
        after = rerank_embeddings(
            x,
            {"good": scale_embedding(good, 10.0), "noisy": noisy, "rnd": rnd},
            metrics=metrics,
        )
        for metric in (MetricKind.SCALE_NORMALIZED_STRESS, MetricKind.SHEPARD_GOODNESS, MetricKind.NON_METRIC_STRESS):
            assert before[metric].ranks.tolist() == after[metric].ranks.tolist()
        assert before[MetricKind.NORMALIZED_STRESS].ranks.tolist() != after[
            MetricKind.NORMALIZED_STRESS
        ].ranks.tolist()


class TestExpectedOrderRate:
    def test_arithmetic(self):
        tally = OrderingTally(counts={EXPECTED_ORDER: 9, ("tsne", "mds", "random"): 1}, total=10)
        assert expected_order_rate(tally, EXPECTED_ORDER) == 0.9

    def test_absent_ordering(self):
        tally = OrderingTally(counts={("tsne", "mds", "random"): 2}, total=2)
        assert expected_order_rate(tally, EXPECTED_ORDER) == 0.0

    def test_empty_tally(self):
        with pytest.raises(EmptyTally):
            expected_order_rate(OrderingTally(counts={}, total=0), EXPECTED_ORDER)

    def test_ordering_string(self):
        assert ordering_to_string(EXPECTED_ORDER) == "mds<tsne<random"
