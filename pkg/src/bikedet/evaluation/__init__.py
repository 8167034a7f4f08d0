"""Pipeline orchestration, ground-truth matching, metrics and reports."""

from .metrics import (
    MetricsReport,
    Tallies,
    covers,
    match_to_ground_truth,
    sweep_scenes,
    sweep_tcof,
    tally_scenes,
    timing_summary,
)
from .pipeline import (
    Detector,
    PipelineResult,
    check_model,
    collect_features,
    label_for,
    run_pipeline,
)
from .records import (
    RECORDS_NAME,
    TRAILS_NAME,
    find_records,
    read_records,
    write_records,
)
from .report import (
    Gate,
    annotate_mask,
    render_bench_report,
    render_eval_report,
    write_sweep_csv,
)

__all__ = [
    "MetricsReport",
    "Tallies",
    "covers",
    "match_to_ground_truth",
    "sweep_scenes",
    "sweep_tcof",
    "tally_scenes",
    "timing_summary",
    "Detector",
    "PipelineResult",
    "check_model",
    "collect_features",
    "label_for",
    "run_pipeline",
    "RECORDS_NAME",
    "TRAILS_NAME",
    "find_records",
    "read_records",
    "write_records",
    "Gate",
    "annotate_mask",
    "render_bench_report",
    "render_eval_report",
    "write_sweep_csv",
]
