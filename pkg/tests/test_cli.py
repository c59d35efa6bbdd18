import json

import numpy as np
import pytest

from stress_gauge import generate_synthetic, load_embedding_csv, normalize_columns
from stress_gauge.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    """A dataset CSV plus embeddings produced through the CLI itself."""
    root = tmp_path_factory.mktemp("cli")
    data = generate_synthetic("s_curve", 40, seed=2)
    values = normalize_columns(data.values, "minmax")
    lines = [",".join(repr(v) for v in row) for row in values.tolist()]
    (root / "data.csv").write_text("\n".join(lines) + "\n")
    assert main(["embed", "--data", str(root / "data.csv"), "--method", "mds",
                 "--seed", "3", "--out", str(root / "mds.csv")]) == EXIT_OK
    assert main(["embed", "--data", str(root / "data.csv"), "--method", "random",
                 "--seed", "3", "--out", str(root / "random.csv")]) == EXIT_OK
    return root


def _metric_from_stdout(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    assert code == EXIT_OK
    return {line.split()[0]: float(line.split()[1]) for line in out.strip().splitlines()}


class TestMetricsCommand:
    def test_scale_zero_gives_ns_one(self, workdir, capsys):
        values = _metric_from_stdout(
            capsys,
            ["metrics", "--data", str(workdir / "data.csv"), "--embedding",
             str(workdir / "mds.csv"), "--metrics", "ns", "--scale", "0"],
        )
        assert values["ns"] == 1.0

    def test_identical_files_zero_raw_stress(self, workdir, capsys):
        values = _metric_from_stdout(
            capsys,
            ["metrics", "--data", str(workdir / "mds.csv"), "--embedding",
             str(workdir / "mds.csv"), "--metrics", "rs"],
        )
        assert values["rs"] == 0.0

    def test_sns_scale_independent(self, workdir, capsys):
        base = ["metrics", "--data", str(workdir / "data.csv"), "--embedding",
                str(workdir / "mds.csv"), "--metrics", "sns"]
        v1 = _metric_from_stdout(capsys, base + ["--scale", "1"])["sns"]
        v5 = _metric_from_stdout(capsys, base + ["--scale", "5"])["sns"]
        assert v5 == pytest.approx(v1, rel=1e-10)

    def test_report_written(self, workdir, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = main(["metrics", "--data", str(workdir / "data.csv"), "--embedding",
                     str(workdir / "mds.csv"), "--out", str(out)])
        capsys.readouterr()
        assert code == EXIT_OK
        payload = json.loads(out.read_text())
        assert payload["schema_version"] == "1"
        assert len(payload["metrics"]) == 5

    def test_shape_mismatch_is_data_error(self, workdir, tmp_path, capsys):
        small = tmp_path / "small.csv"
        small.write_text("0.1,0.2\n0.3,0.4\n")
        code = main(["metrics", "--data", str(workdir / "data.csv"), "--embedding", str(small)])
        capsys.readouterr()
        assert code == EXIT_DATA

    def test_missing_file_is_data_error(self, workdir, capsys):
        code = main(["metrics", "--data", str(workdir / "data.csv"), "--embedding",
                     str(workdir / "nope.csv")])
        capsys.readouterr()
        assert code == EXIT_DATA


class TestCurveCommand:
    def test_scale_invariant_metric_refused(self, workdir, tmp_path, capsys):
        code = main(["curve", "--data", str(workdir / "data.csv"), "--embedding",
                     str(workdir / "mds.csv"), "--metric", "sns",
                     "--out", str(tmp_path / "c.csv")])
        capsys.readouterr()
        assert code == EXIT_USAGE

    def test_csv_first_row_is_origin(self, workdir, tmp_path, capsys):
        out = tmp_path / "curve.csv"
        code = main(["curve", "--data", str(workdir / "data.csv"), "--embedding",
                     str(workdir / "mds.csv"), "--metric", "ns", "--out", str(out)])
        capsys.readouterr()
        assert code == EXIT_OK
        first = out.read_text().splitlines()[0]
        assert first == "0.0,1.0"

    def test_svg_minimum_matches_metrics_output(self, workdir, tmp_path, capsys):
        svg_out = tmp_path / "curve.svg"
        code = main(["curve", "--data", str(workdir / "data.csv"), "--embedding",
                     str(workdir / "mds.csv"), "--metric", "ns", "--out", str(svg_out)])
        assert code == EXIT_OK
        sns = _metric_from_stdout(
            capsys,
            ["metrics", "--data", str(workdir / "data.csv"), "--embedding",
             str(workdir / "mds.csv"), "--metrics", "sns"],
        )["sns"]
        import xml.etree.ElementTree as ET

        root = ET.parse(svg_out).getroot()
        ymin, ymax = float(root.get("data-ymin")), float(root.get("data-ymax"))
        top = float(root.get("data-plot-top"))
        bottom = float(root.get("data-plot-bottom"))
        marker = [c for c in root.iter("{http://www.w3.org/2000/svg}circle")
                  if c.get("class") == "minimum"][0]
        marker_value = ymin + (bottom - float(marker.get("cy"))) / (bottom - top) * (ymax - ymin)
        assert marker_value == pytest.approx(sns, abs=(ymax - ymin) / (bottom - top))


class TestShepardCommand:
    def test_writes_svg(self, workdir, tmp_path, capsys):
        out = tmp_path / "shepard.svg"
        code = main(["shepard", "--data", str(workdir / "data.csv"), "--embedding",
                     str(workdir / "mds.csv"), "--out", str(out)])
        capsys.readouterr()
        assert code == EXIT_OK
        assert out.read_text().startswith("<?xml")


class TestEmbedCommand:
    def test_random_seed_reproducible(self, workdir, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for out in (a, b):
            assert main(["embed", "--data", str(workdir / "data.csv"), "--method", "random",
                         "--seed", "7", "--out", str(out)]) == EXIT_OK
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()

    def test_env_seed_fallback(self, workdir, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("STRESS_GAUGE_SEED", "7")
        via_env = tmp_path / "env.csv"
        assert main(["embed", "--data", str(workdir / "data.csv"), "--method", "random",
                     "--out", str(via_env)]) == EXIT_OK
        explicit = tmp_path / "explicit.csv"
        assert main(["embed", "--data", str(workdir / "data.csv"), "--method", "random",
                     "--seed", "7", "--out", str(explicit)]) == EXIT_OK
        capsys.readouterr()
        assert via_env.read_bytes() == explicit.read_bytes()

    def test_mds_beats_random_on_sns(self, workdir, capsys):
        args = ["metrics", "--data", str(workdir / "data.csv"), "--metrics", "sns"]
        sns_mds = _metric_from_stdout(capsys, args + ["--embedding", str(workdir / "mds.csv")])["sns"]
        sns_rnd = _metric_from_stdout(capsys, args + ["--embedding", str(workdir / "random.csv")])["sns"]
        assert sns_mds < sns_rnd

    def test_classical_mds_on_planar_data(self, tmp_path, capsys):
        rng = np.random.default_rng(4)
        planar = tmp_path / "planar.csv"
        lines = [",".join(repr(v) for v in row) for row in rng.random((20, 2)).tolist()]
        planar.write_text("\n".join(lines) + "\n")
        out = tmp_path / "cmds.csv"
        assert main(["embed", "--data", str(planar), "--method", "classical-mds",
                     "--seed", "0", "--out", str(out)]) == EXIT_OK
        sns = _metric_from_stdout(
            capsys,
            ["metrics", "--data", str(planar), "--embedding", str(out), "--metrics", "sns"],
        )["sns"]
        assert sns < 1e-6


@pytest.fixture(scope="module")
def outputs(tmp_path_factory):
    out = tmp_path_factory.mktemp("expa")
    code = main(["experiment-a", "--datasets", "s_curve", "--synthetic-n", "40",
                 "--runs", "1", "--scales", "1,10", "--seed", "0", "--jobs", "1",
                 "--out", str(out)])
    assert code == EXIT_OK
    return out


class TestExperimentACommand:
    def test_outputs_exist(self, outputs):
        for name in ("report.json", "metrics.csv", "agreement.csv",
                     "tally_scale_1.csv", "tally_scale_10.csv"):
            assert (outputs / name).exists()

    def test_single_trial_totals(self, outputs):
        payload = json.loads((outputs / "report.json").read_text())
        assert all(t["total"] == 1 for t in payload["tallies"])

    def test_invariant_columns_match_across_scales(self, outputs):
        t1 = [line.split(",") for line in (outputs / "tally_scale_1.csv").read_text().splitlines()]
        t10 = [line.split(",") for line in (outputs / "tally_scale_10.csv").read_text().splitlines()]
        header = t1[0]
        for metric in ("sgs", "nms", "sns"):
            col = header.index(metric)
            assert [row[col] for row in t1] == [row[col] for row in t10]

    def test_rs_ns_columns_identical(self, outputs):
        for path in (outputs / "tally_scale_1.csv", outputs / "tally_scale_10.csv"):
            rows = [line.split(",") for line in path.read_text().splitlines()]
            rs_col = rows[0].index("rs")
            ns_col = rows[0].index("ns")
            assert [r[rs_col] for r in rows[1:]] == [r[ns_col] for r in rows[1:]]

    def test_unresolvable_dataset_is_data_error(self, tmp_path, capsys):
        code = main(["experiment-a", "--datasets", "missing_dir", "--out", str(tmp_path / "o")])
        err = capsys.readouterr().err
        assert code == EXIT_DATA
        assert "missing_dir" in err


class TestRerankCommand:
    def test_scaled_copy_changes_ns_not_sns(self, workdir, tmp_path, capsys):
        scaled = tmp_path / "mds10.csv"
        values = load_embedding_csv(workdir / "mds.csv").values * 10.0
        scaled.write_text("\n".join(",".join(repr(v) for v in row) for row in values.tolist()) + "\n")
        out = tmp_path / "rerank.json"
        code = main(["rerank", "--data", str(workdir / "data.csv"), "--embeddings",
                     str(workdir / "mds.csv"), str(scaled), "--out", str(out)])
        capsys.readouterr()
        assert code == EXIT_OK
        payload = json.loads(out.read_text())
        tables = {t["metric"]: t for t in payload["rank_tables"]}
        assert tables["ns"]["ranks"]["mds"] == 1
        assert tables["ns"]["ranks"]["mds10"] == 2
        assert not any(tables["ns"]["tied"].values())
        assert all(tables["sns"]["tied"].values())

    def test_single_embedding_is_usage_error(self, workdir, capsys):
        code = main(["rerank", "--data", str(workdir / "data.csv"), "--embeddings",
                     str(workdir / "mds.csv")])
        capsys.readouterr()
        assert code == EXIT_USAGE


class TestExitContract:
    def test_unknown_flag(self, capsys):
        assert main(["metrics", "--bogus"]) == EXIT_USAGE
        capsys.readouterr()

    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == EXIT_USAGE
        capsys.readouterr()

    @pytest.mark.parametrize(
        "sub", ["metrics", "curve", "shepard", "embed", "experiment-a", "rerank"]
    )
    def test_help_documents_exit_codes(self, sub, capsys):
        assert main([sub, "--help"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "exit codes:" in out
        assert "--" in out
