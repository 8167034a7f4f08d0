"""Text reports and CSV tables for evaluation and benchmarking."""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np
from jinja2 import Environment

from ..errors import BikedetError
from ..tracking import TrackState
from .metrics import MetricsReport

SWEEP_HEADER = [
    "t_cof",
    "R_det",
    "R_fp",
    "R_rep",
    "missing_rate",
    "n_truth",
    "detected",
    "false_alarms",
    "reported",
]

EVAL_TEMPLATE = """\
Bicycle detection results ({{ label }}, T_COF = {{ "%.2f" | format(t_cof) }})

  {{ "%-10s" | format("scenes") }}{{ "%8s" | format("R_det") }}{{ "%8s" | format("R_fp") }}\
{{ "%8s" | format("R_rep") }}{{ "%9s" | format("missing") }}   counts (truth/det/fp/rep)
{% for name, report in rows %}
  {{ "%-10s" | format(name) }}{{ report.R_det | pct }}{{ report.R_fp | pct }}\
{{ report.R_rep | pct }} {{ report.missing_rate | pct }}   \
{{ report.tallies.n_truth }}/{{ report.tallies.detected }}/\
{{ report.tallies.false_alarms }}/{{ report.tallies.reported }}
{% endfor %}
{% if gates %}

Gates:
{% for gate in gates %}
  {{ "PASS" if gate.passed else "FAIL" }}  {{ gate.description }}
{% endfor %}
{% endif %}
"""

BENCH_TEMPLATE = """\
Per-frame processing time ({{ method }}, {{ frames }} frames of {{ width }}x{{ height }}
{%- if warmup_frames %}, after a {{ warmup_frames }}-frame warmup{% endif %})

  median  {{ "%8.3f" | format(median_ms) }} ms
  p95     {{ "%8.3f" | format(p95_ms) }} ms
  mean    {{ "%8.3f" | format(mean_ms) }} ms
  budget  {{ "%8.3f" | format(budget_ms) }} ms  {{ "PASS" if median_ms <= budget_ms else "FAIL" }}
"""


@dataclass(frozen=True)
class Gate:
    """A pass/fail acceptance check shown in the report."""

    description: str
    passed: bool


def _environment() -> Environment:
    env = Environment(trim_blocks=True, keep_trailing_newline=True)
    env.filters["pct"] = lambda v: f"{100.0 * v:7.2f}%"
    return env


def render_eval_report(
    rows: Sequence[Tuple[str, MetricsReport]],
    t_cof: float,
    label: str = "all",
    gates: Sequence[Gate] = (),
) -> str:
    """Pooled and per-profile rates as a fixed-width table."""
    template = _environment().from_string(EVAL_TEMPLATE)
    return template.render(rows=rows, t_cof=t_cof, label=label, gates=gates)


def render_bench_report(
    timings_ms: Sequence[float],
    width: int,
    height: int,
    budget_ms: float,
    method: str,
    warmup_frames: int = 0,
) -> str:
    """Timing report; `timings_ms` should already exclude the `warmup_frames` leading frames."""
    samples = np.asarray(timings_ms, dtype=np.float64)
    template = _environment().from_string(BENCH_TEMPLATE)
    return template.render(
        method=method,
        frames=len(samples),
        width=width,
        height=height,
        median_ms=float(np.median(samples)),
        p95_ms=float(np.percentile(samples, 95)),
        mean_ms=float(samples.mean()),
        budget_ms=budget_ms,
        warmup_frames=warmup_frames,
    )


def write_sweep_csv(rows: Sequence[Tuple[float, MetricsReport]], path: Union[str, Path]) -> None:
    """One row per threshold with the rates and the counts they come from."""
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(SWEEP_HEADER)
            for t, report in rows:
                c = report.tallies
                writer.writerow(
                    [
                        f"{t:g}",
                        f"{report.R_det:.6f}",
                        f"{report.R_fp:.6f}",
                        f"{report.R_rep:.6f}",
                        f"{report.missing_rate:.6f}",
                        c.n_truth,
                        c.detected,
                        c.false_alarms,
                        c.reported,
                    ]
                )
    except OSError as e:
        raise BikedetError(f"cannot write {path}: {e}") from e


def annotate_mask(
    bits: np.ndarray, states: List[TrackState], only_accepted: bool = True
) -> np.ndarray:
    """
    Mask picture for inspection: foreground 255, background 0, and a 128
    outline around every bicycle track (accepted ones only by default).
    """
    picture = np.where(bits, 255, 0).astype(np.uint8)
    height, width = picture.shape
    for state in states:
        if not state.decision or (only_accepted and not state.acceptable):
            continue
        x0, y0 = max(int(state.bbox.x), 0), max(int(state.bbox.y), 0)
        x1 = min(int(state.bbox.x + state.bbox.w), width) - 1
        y1 = min(int(state.bbox.y + state.bbox.h), height) - 1
        if x1 < x0 or y1 < y0:
            continue
        picture[y0, x0 : x1 + 1] = 128
        picture[y1, x0 : x1 + 1] = 128
        picture[y0 : y1 + 1, x0] = 128
        picture[y0 : y1 + 1, x1] = 128
    return picture
