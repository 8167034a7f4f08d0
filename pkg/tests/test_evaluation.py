"""Tests for evaluation module."""

import numpy as np
import pytest

from bikedet.classifier import Cascade, SvmModel
from bikedet.errors import ConfigError, EvalError, ParseError
from bikedet.evaluation import (
    Gate,
    MetricsReport,
    Tallies,
    annotate_mask,
    check_model,
    collect_features,
    covers,
    find_records,
    match_to_ground_truth,
    read_records,
    render_bench_report,
    render_eval_report,
    run_pipeline,
    sweep_tcof,
    timing_summary,
    write_records,
    write_sweep_csv,
)
from bikedet.features import CLUTTER, DEFAULT_FEATURE_LAYOUT
from bikedet.geometry import BBox
from bikedet.synth import GroundTruth, TruthTrack, generate_scene
from bikedet.tracking import DetectionRecord, TrackState


def _box(i):
    return BBox(20 * i, 0, 10, 10)


def _truth(bicycles=10, length=20, others=0):
    tracks = [
        TruthTrack(i, "bicycle", {f: _box(i) for f in range(10)}) for i in range(bicycles)
    ]
    tracks += [
        TruthTrack(100 + i, "vehicle", {f: _box(bicycles + i) for f in range(10)})
        for i in range(others)
    ]
    return GroundTruth(length, tuple(tracks))


def _record(track_id, actor, cof=1.0, decision=True, frames=range(10)):
    trail = tuple((f, _box(actor)) for f in frames)
    return DetectionRecord(
        track_id, trail[0][0], trail[-1][0], len(trail), len(trail), decision, cof, trail
    )


def test_pipeline_detects_single_bicycle(one_bicycle_scene):
    """Test one accepted bicycle record with full confidence."""
    frames, truth = generate_scene(one_bicycle_scene)
    result = run_pipeline(frames, classify=lambda fv: True)
    assert result.frames == 100
    assert len(result.records) == 1
    record = result.records[0]
    assert record.decision
    assert record.cof == 1.0
    assert record.first_frame == 55
    tallies = match_to_ground_truth(result.records, truth)
    assert (tallies.detected, tallies.false_alarms, tallies.reported) == (1, 0, 1)


def test_pipeline_separates_warmup_timings(one_bicycle_scene):
    """Test that the leading warmup frames are timed but kept apart from detection timings."""
    frames, _ = generate_scene(one_bicycle_scene)
    result = run_pipeline(frames, classify=lambda fv: True)
    assert result.warmup_frames == 50
    assert len(result.timings_ms) == 100
    assert result.detection_timings_ms == result.timings_ms[50:]


def test_pipeline_short_stream_is_all_warmup(one_bicycle_scene):
    """Test a stream that ends inside the warmup."""
    frames, _ = generate_scene(one_bicycle_scene)
    result = run_pipeline(list(frames)[:20], classify=lambda fv: True)
    assert result.warmup_frames == 20
    assert result.detection_timings_ms == []
    assert result.records == []


def test_pipeline_with_model(one_bicycle_scene):
    """Test that a pass-all cascade behaves like an always-bicycle fuser."""
    frames, _ = generate_scene(one_bicycle_scene)
    records = run_pipeline(frames, model=Cascade()).records
    assert [r.decision for r in records] == [True]


def test_pipeline_empty_scene(empty_scene):
    """Test that a background-only stream yields no records."""
    frames, _ = generate_scene(empty_scene)
    assert run_pipeline(frames, classify=lambda fv: True).records == []


def test_pipeline_deterministic(one_bicycle_scene):
    """Test that the same stream and model give the same records."""
    runs = [
        run_pipeline(generate_scene(one_bicycle_scene)[0], model=Cascade()).records
        for _ in range(2)
    ]
    assert runs[0] == runs[1]


def test_pipeline_on_frame_callback(one_bicycle_scene):
    """Test that masks are reported only after the warmup."""
    frames, _ = generate_scene(one_bicycle_scene)
    seen = []
    run_pipeline(
        frames,
        classify=lambda fv: True,
        on_frame=lambda frame, mask, states: seen.append(frame.index),
    )
    assert seen == list(range(50, 100))


def test_pipeline_needs_fuser():
    """Test that run_pipeline refuses to run without a model."""
    with pytest.raises(ConfigError):
        run_pipeline([])


def test_check_model_speed_without_fallback():
    """Test that a speed-using SVM without a fallback is rejected."""
    d = len(DEFAULT_FEATURE_LAYOUT)
    model = SvmModel(DEFAULT_FEATURE_LAYOUT, (0.0,) * d, (1.0,) * d, (1.0,) * d, 0.0)
    with pytest.raises(ConfigError):
        check_model(model)
    check_model(Cascade())


def test_collect_features_labels(one_bicycle_scene):
    """Test that the bicycle's regions are labeled with its class."""
    frames, truth = generate_scene(one_bicycle_scene)
    rows = collect_features(frames, truth)
    assert rows
    labels = [r.label for r in rows]
    assert set(labels) <= {"bicycle", CLUTTER}
    assert labels.count("bicycle") >= 0.9 * len(labels)
    assert rows[0].features.speed is None
    bicycle = [r for r in rows if r.label == "bicycle"]
    assert bicycle[-1].features.speed == pytest.approx(2.5, abs=0.5)


def test_metrics_detection_rate():
    """Test R_det = 0.9 when 9 of 10 bicycles are detected."""
    records = [_record(i + 1, i) for i in range(9)]
    report = MetricsReport.from_tallies(match_to_ground_truth(records, _truth()))
    assert report.R_det == pytest.approx(0.9)
    assert report.missing_rate == pytest.approx(0.1)
    assert report.R_fp == 0.0
    assert report.R_rep == 0.0


def test_metrics_repetition_rate():
    """Test R_rep = 0.8 for 18 reports over 10 bicycles."""
    records = [_record(i + 1, i % 10) for i in range(18)]
    tallies = match_to_ground_truth(records, _truth())
    assert tallies.reported == 18
    assert MetricsReport.from_tallies(tallies).R_rep == pytest.approx(0.8)


def test_metrics_false_alarms():
    """Test that bicycle records on other actors are false alarms."""
    records = [_record(1, 0), _record(2, 10), _record(3, 11, decision=False)]
    tallies = match_to_ground_truth(records, _truth(others=2))
    assert tallies == Tallies(n_truth=10, detected=1, false_alarms=1, reported=1)
    assert MetricsReport.from_tallies(tallies).R_fp == pytest.approx(0.1)


def test_metrics_without_bicycles():
    """Test that all rates are zero when the truth has no bicycles."""
    report = MetricsReport.from_tallies(match_to_ground_truth([_record(1, 0)], _truth(0)))
    assert (report.R_det, report.R_fp, report.R_rep) == (0.0, 0.0, 0.0)


def test_metrics_threshold_excludes_low_confidence():
    """Test that records below T_COF take no part."""
    tallies = match_to_ground_truth([_record(1, 0, cof=0.3)], _truth(), t_cof=0.4)
    assert tallies.detected == 0


def test_covers_needs_enough_frames():
    """Test the minimum shared-frame rule."""
    track = _truth().tracks[0]
    assert covers(_record(1, 0, frames=range(3)), track)
    assert not covers(_record(1, 0, frames=range(2)), track)
    assert not covers(_record(1, 5), track)


def test_records_past_truth_raise():
    """Test that records longer than the ground truth are rejected."""
    with pytest.raises(EvalError):
        match_to_ground_truth([_record(1, 0, frames=range(25))], _truth(length=20))


def test_sweep_monotone():
    """Test that raising T_COF never detects more or reports more."""
    truth = _truth()
    records = [_record(i + 1, i, cof=(i + 1) / 10) for i in range(10)]
    rows = sweep_tcof(records, truth)
    assert [t for t, _ in rows] == [0.0, 0.2, 0.4, 0.6, 0.8, 1.0]
    detections = [r.R_det for _, r in rows]
    reports = [r.tallies.reported for _, r in rows]
    assert detections == sorted(detections, reverse=True)
    assert reports == sorted(reports, reverse=True)
    assert detections[0] == 1.0
    assert rows[-1][1].tallies.detected == 1


def test_timing_summary():
    """Test median and 95th percentile."""
    median, p95 = timing_summary(list(range(1, 101)))
    assert median == pytest.approx(50.5)
    assert p95 == pytest.approx(95.05)


def test_records_csv_round_trip(tmp_path):
    """Test that records and trails are read back as written."""
    records = [_record(1, 0, cof=0.4), _record(2, 3, decision=False)]
    path = tmp_path / "records.csv"
    write_records(records, path, tmp_path / "trails.csv")
    assert path.read_text().splitlines()[1] == "1,0,9,10,10,bicycle,0.400000"
    assert read_records(path) == records


def test_find_records(tmp_path):
    """Test locating the records file of a detection directory."""
    assert find_records(tmp_path) is None
    write_records([_record(1, 0)], tmp_path / "records.csv", tmp_path / "trails.csv")
    assert find_records(tmp_path) == tmp_path / "records.csv"
    assert find_records(tmp_path / "missing") is None


def test_records_bad_decision(tmp_path):
    """Test that an unknown decision is a parse error."""
    path = tmp_path / "records.csv"
    path.write_text("track_id,first_frame,last_frame,M,M_b,decision,COF\n1,0,1,2,1,maybe,0.1\n")
    with pytest.raises(ParseError):
        read_records(path)


def test_eval_report_rendering():
    """Test that the report shows rates, counts and gates."""
    report = MetricsReport.from_tallies(Tallies(10, 9, 1, 9))
    text = render_eval_report(
        [("all", report)],
        0.2,
        gates=[Gate("R_det >= 80%", True), Gate("R_fp <= 10%", False)],
    )
    assert "T_COF = 0.20" in text
    assert "90.00%" in text
    assert "10/9/1/9" in text
    assert "PASS  R_det >= 80%" in text
    assert "FAIL  R_fp <= 10%" in text


def test_bench_report_rendering():
    """Test the budget verdict in the timing report."""
    text = render_bench_report([1.0, 2.0, 3.0], 320, 240, 30.0, "cascade")
    assert "3 frames of 320x240" in text
    assert "PASS" in text
    assert "FAIL" in render_bench_report([40.0], 320, 240, 30.0, "svm")
    assert "warmup" not in text
    text = render_bench_report([1.0], 352, 288, 30.0, "svm", warmup_frames=50)
    assert "1 frames of 352x288, after a 50-frame warmup)" in text


def test_sweep_csv(tmp_path):
    """Test one header plus one row per threshold."""
    records = [_record(1, 0, cof=0.5)]
    path = tmp_path / "sweep.csv"
    write_sweep_csv(sweep_tcof(records, _truth(1)), path)
    lines = path.read_text().splitlines()
    assert len(lines) == 7
    assert lines[0].startswith("t_cof,R_det,R_fp,R_rep")
    assert lines[1].startswith("0,1.000000")
    assert lines[-1].startswith("1,0.000000")


def _state(decision=True, acceptable=True):
    return TrackState(1, BBox(2, 2, 4, 4), decision, 1.0 if acceptable else 0.1, acceptable)


def test_annotate_mask_outline():
    """Test the outline around an accepted bicycle track."""
    bits = np.zeros((10, 10), dtype=bool)
    bits[8, 8] = True
    picture = annotate_mask(bits, [_state()])
    assert picture[8, 8] == 255
    assert (picture[2, 2:6] == 128).all()
    assert (picture[2:6, 5] == 128).all()
    assert picture[3, 3] == 0


def test_annotate_mask_skips_unaccepted():
    """Test that unaccepted and non-bicycle tracks are left out by default."""
    bits = np.zeros((10, 10), dtype=bool)
    skipped = annotate_mask(bits, [_state(acceptable=False), _state(decision=False)])
    assert not (skipped == 128).any()
    assert (annotate_mask(bits, [_state(acceptable=False)], only_accepted=False) == 128).any()
