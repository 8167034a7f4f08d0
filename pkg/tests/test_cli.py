"""Tests for CLI module."""

from dataclasses import replace

import pytest
from click.testing import CliRunner

from bikedet.classifier import Cascade, TrainingSet, load_model, save_model, train_model
from bikedet.cli import cli, scene_paths
from bikedet.config import ClassifierParams
from bikedet.features import read_feature_csv, write_feature_csv
from bikedet.synth import write_scene


def _model(tmp_path, cascade=None):
    path = tmp_path / "model.txt"
    save_model(cascade if cascade is not None else Cascade(), path)
    return str(path)


def _detect(tmp_path, scene_dir, *extra, model=None):
    out = tmp_path / "det"
    args = ["detect", "--in", str(scene_dir), "--model", model or _model(tmp_path)]
    result = CliRunner().invoke(cli, [*args, "--out", str(out), *extra])
    return result, out


def test_cli_help():
    """Test CLI help command."""
    runner = CliRunner()
    result = runner.invoke(cli, ["--help"])
    assert result.exit_code == 0
    assert "bikedet" in result.output
    for command in ("synth", "features", "train", "detect", "eval", "bench"):
        assert command in result.output


def test_cli_detect_help():
    """Test detect command help."""
    result = CliRunner().invoke(cli, ["detect", "--help"])
    assert result.exit_code == 0
    assert "Detect bicycles" in result.output


def test_cli_detect_writes_records(tmp_path, scene_dir):
    """Test that detect writes one bicycle record for the one-bicycle scene."""
    result, out = _detect(tmp_path, scene_dir)
    assert result.exit_code == 0, result.output
    lines = (out / "records.csv").read_text().splitlines()
    assert lines[0] == "track_id,first_frame,last_frame,M,M_b,decision,COF"
    assert len(lines) == 2
    assert lines[1].endswith(",bicycle,1.000000")
    assert (out / "trails.csv").is_file()
    assert "1 accepted" in result.output


def test_cli_detect_masks(tmp_path, scene_dir):
    """Test that --masks writes one picture per frame after the warmup."""
    result, out = _detect(tmp_path, scene_dir, "--masks")
    assert result.exit_code == 0, result.output
    masks = sorted((out / "masks").glob("*.pgm"))
    assert len(masks) == 50
    assert masks[0].name == "0050.pgm"


def test_cli_detect_suite_layout(tmp_path, one_bicycle_scene):
    """Test one output directory per scene for a suite directory."""
    suite = tmp_path / "suite"
    for name in ("a", "b"):
        write_scene(replace(one_bicycle_scene, scene_id=f"bike-{name}"), suite / name)
    assert len(scene_paths(suite)) == 2
    result, out = _detect(tmp_path, suite)
    assert result.exit_code == 0, result.output
    assert (out / "bike-a" / "records.csv").is_file()
    assert (out / "bike-b" / "records.csv").is_file()


def test_cli_eval_suite_layout(tmp_path, one_bicycle_scene):
    """Test scoring one records directory per scene against a suite of truths."""
    suite = tmp_path / "suite"
    for name in ("bike-a", "bike-b"):
        write_scene(replace(one_bicycle_scene, scene_id=name), suite / name)
    result, out = _detect(tmp_path, suite)
    assert result.exit_code == 0, result.output
    (out / "notes").mkdir()
    (out / "summary.txt").write_text("not a scene\n")
    result = CliRunner().invoke(cli, ["eval", "--records", str(out), "--truth", str(suite)])
    assert result.exit_code == 0, result.output
    assert "2 scene(s)" in result.output
    assert "2/2/0/2" in result.output


def test_cli_eval_without_records(tmp_path, scene_dir):
    """Test that a directory holding no records file is an error."""
    empty = tmp_path / "empty"
    empty.mkdir()
    result = CliRunner().invoke(cli, ["eval", "--records", str(empty), "--truth", str(scene_dir)])
    assert result.exit_code == 1
    assert "no records.csv" in result.output


def test_cli_detect_bad_model(tmp_path, scene_dir):
    """Test that an unreadable model file exits with code 1."""
    model = tmp_path / "model.txt"
    model.write_text("not a model\n")
    result, _ = _detect(tmp_path, scene_dir, model=str(model))
    assert result.exit_code == 1
    assert "❌ Error" in result.output


def test_cli_detect_missing_out(scene_dir, tmp_path):
    """Test that a missing required option is a usage error."""
    args = ["detect", "--in", str(scene_dir), "--model", _model(tmp_path)]
    result = CliRunner().invoke(cli, args)
    assert result.exit_code == 2


def test_cli_detect_bad_frame_rate(tmp_path, scene_dir):
    """Test that an invalid frame rate is a usage error."""
    result, _ = _detect(tmp_path, scene_dir, "--frame-rate", "fast")
    assert result.exit_code == 2


def test_cli_eval_sweep(tmp_path, scene_dir):
    """Test the report, the sweep table and passing gates."""
    _, out = _detect(tmp_path, scene_dir)
    result = CliRunner().invoke(
        cli,
        ["eval", "--records", str(out), "--truth", str(scene_dir), "--sweep", "--min-det", "0.8"],
    )
    assert result.exit_code == 0, result.output
    assert "100.00%" in result.output
    assert "PASS" in result.output
    lines = (out / "sweep.csv").read_text().splitlines()
    assert len(lines) == 7


def test_cli_eval_gate_failure(tmp_path, scene_dir):
    """Test that a failed gate exits with code 1."""
    records = tmp_path / "records.csv"
    records.write_text("track_id,first_frame,last_frame,M,M_b,decision,COF\n")
    report_dir = tmp_path / "report"
    result = CliRunner().invoke(
        cli,
        [
            "eval",
            "--records",
            str(records),
            "--truth",
            str(scene_dir),
            "--min-det",
            "0.5",
            "--out",
            str(report_dir),
        ],
    )
    assert result.exit_code == 1
    assert "FAIL" in result.output
    assert "evaluation gates failed" in result.output
    assert (report_dir / "report.txt").is_file()


def test_cli_features(tmp_path, scene_dir):
    """Test the labeled feature dump of a scene."""
    out = tmp_path / "features.csv"
    result = CliRunner().invoke(cli, ["features", "--in", str(scene_dir), "--out", str(out)])
    assert result.exit_code == 0, result.output
    lines = out.read_text().splitlines()
    assert len(lines) > 40
    assert "bicycle" in lines[1]


def _corpus(tmp_path, feature_rows):
    path = tmp_path / "corpus.csv"
    write_feature_csv(feature_rows, path)
    return str(path)


def test_cli_train_cascade(tmp_path, feature_rows):
    """Test cascade calibration from a feature CSV."""
    out = tmp_path / "cascade.txt"
    result = CliRunner().invoke(
        cli,
        ["train", "--method", "cascade", "--corpus", _corpus(tmp_path, feature_rows)]
        + ["--out", str(out)],
    )
    assert result.exit_code == 0, result.output
    assert out.read_text().startswith("bikedet-model 1")
    assert "cascade" in out.read_text()


def test_cli_train_svm_layout(tmp_path, feature_rows):
    """Test SVM training on an explicit speed-free layout."""
    out = tmp_path / "svm.txt"
    result = CliRunner().invoke(
        cli,
        [
            "train",
            "--method",
            "svm",
            "--layout",
            "width,height,r_f_upper,r_f_lower",
            "--corpus",
            _corpus(tmp_path, feature_rows),
            "--out",
            str(out),
        ],
    )
    assert result.exit_code == 0, result.output
    assert "svm" in out.read_text()


def test_cli_train_unknown_feature(tmp_path, feature_rows):
    """Test that an unknown feature name is reported as an error."""
    out = tmp_path / "svm.txt"
    result = CliRunner().invoke(
        cli,
        ["train", "--layout", "wheels", "--corpus", _corpus(tmp_path, feature_rows)]
        + ["--out", str(out)],
    )
    assert result.exit_code == 1
    assert not out.exists()


def test_cli_train_keeps_first_observations(tmp_path, feature_rows):
    """Test that rows without a speed still reach training and the speed-free fallback."""
    corpus, out = _corpus(tmp_path, feature_rows), tmp_path / "svm.txt"
    result = CliRunner().invoke(
        cli, ["train", "--method", "svm", "--corpus", corpus, "--out", str(out)]
    )
    assert result.exit_code == 0, result.output
    assert "60 positive, 120 negative rows" in result.output

    rows = read_feature_csv(corpus)
    expected = train_model(TrainingSet.from_rows(rows), ClassifierParams(method="svm"))
    fallback = load_model(out).fallback
    assert fallback.layout == expected.fallback.layout
    assert fallback.mean == pytest.approx(expected.fallback.mean)
    assert fallback.w == pytest.approx(expected.fallback.w)


def _bench(tmp_path, scene_dir, budget):
    args = ["bench", "--in", str(scene_dir), "--model", _model(tmp_path), "--frames", "120"]
    return CliRunner().invoke(cli, [*args, "--budget-ms", budget])


def test_cli_bench_within_budget(tmp_path, scene_dir):
    """Test that a generous budget passes."""
    result = _bench(tmp_path, scene_dir, "10000")
    assert result.exit_code == 0, result.output
    assert "120 frames of 160x96, after a 50-frame warmup" in result.output
    assert "170 frames" not in result.output
    assert "PASS" in result.output


def test_cli_bench_over_budget(tmp_path, scene_dir):
    """Test that an impossible budget fails."""
    result = _bench(tmp_path, scene_dir, "0.000001")
    assert result.exit_code == 1
    assert "exceeds" in result.output


def test_cli_config_tables(tmp_path, scene_dir):
    """Test that a [detect] table supplies option defaults."""
    config = tmp_path / "bikedet.toml"
    config.write_text("[tracking]\nt_cof = 1.0\n\n[detect]\nmasks = true\n")
    out = tmp_path / "det"
    args = ["--config", str(config), "detect", "--in", str(scene_dir)]
    result = CliRunner().invoke(cli, [*args, "--model", _model(tmp_path), "--out", str(out)])
    assert result.exit_code == 0, result.output
    assert (out / "masks").is_dir()


def test_cli_config_invalid(tmp_path):
    """Test that an invalid config section is a usage error."""
    config = tmp_path / "bikedet.toml"
    config.write_text("[tracking]\nlife_cycle = 0\n")
    result = CliRunner().invoke(cli, ["--config", str(config), "synth", "--out", str(tmp_path)])
    assert result.exit_code == 2
