"""CLI entry point for bikedet."""

import functools
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import islice
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import click

from . import __version__
from .classifier import TrainingSet, load_model, save_model, train_model
from .config import PipelineConfig, load_config, read_toml
from .errors import BikedetError, NoFrames
from .evaluation import (
    RECORDS_NAME,
    TRAILS_NAME,
    Gate,
    MetricsReport,
    annotate_mask,
    check_model,
    collect_features,
    find_records,
    match_to_ground_truth,
    read_records,
    render_bench_report,
    render_eval_report,
    run_pipeline,
    sweep_scenes,
    timing_summary,
    write_records,
    write_sweep_csv,
)
from .features import FeatureLayout, read_feature_csv, write_feature_csv
from .synth import PROFILES, TRUTH_NAME, load_truth, read_scene_info, standard_suite, write_scene
from .video import Frame, is_stream_dir, open_stream, parse_frame_rate, write_pgm

logger = logging.getLogger(__name__)

REPORT_NAME = "report.txt"
SWEEP_NAME = "sweep.csv"
MASKS_DIR = "masks"


def fail(message: str) -> None:
    click.echo(f"❌ Error: {message}", err=True)
    sys.exit(1)


def reports_errors(command: Callable) -> Callable:
    """Turn library errors into an error line and exit code 1."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except BikedetError as e:
            fail(str(e))

    return wrapper


def _load_config_file(ctx: click.Context, param: click.Parameter, value: Optional[str]):
    """Pipeline sections go to ctx.obj; per-command tables become option defaults."""
    if value is None:
        return None
    try:
        data = read_toml(value)
        config = load_config(value)
    except BikedetError as e:
        raise click.BadParameter(str(e), ctx=ctx, param=param)
    ctx.ensure_object(dict)["config"] = config
    ctx.default_map = {
        name: table
        for name, table in data.items()
        if isinstance(table, dict) and name in ctx.command.commands
    }
    return value


def _frame_rate(ctx: click.Context, param: click.Parameter, value: Optional[str]):
    if value is None:
        return None
    try:
        return parse_frame_rate(value)
    except ValueError as e:
        raise click.BadParameter(str(e), ctx=ctx, param=param)


def pipeline_config(ctx: click.Context) -> PipelineConfig:
    return (ctx.find_root().obj or {}).get("config") or PipelineConfig()


def scene_paths(path: Path) -> List[Path]:
    """
    The streams under `path`: the path itself when it is one stream, else its
    scene sub-directories sorted by name.
    """
    if path.is_file() or is_stream_dir(path):
        return [path]
    if not path.is_dir():
        raise NoFrames(f"{path} does not exist")
    scenes = sorted(p for p in path.iterdir() if is_stream_dir(p))
    if not scenes:
        raise NoFrames(f"{path} holds neither frames nor scene directories")
    return scenes


def scene_id(path: Path) -> str:
    if path.is_file():
        return path.stem
    return str(read_scene_info(path).get("scene_id", path.name))


def run_jobs(worker: Callable, tasks: Sequence[tuple], jobs: int) -> list:
    """Run `worker` over `tasks`, in worker processes when `jobs` > 1; results keep task order."""
    if jobs <= 1 or len(tasks) <= 1:
        return [worker(*task) for task in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, *zip(*tasks)))


def _synth_scene(config, directory: Path) -> Tuple[str, int, int]:
    truth = write_scene(config, directory)
    return config.scene_id, config.length, len(truth.bicycles())


def _features_scene(path: Path, truth_path: Path, config: PipelineConfig):
    truth = load_truth(truth_path)
    _, frames = open_stream(path)
    return collect_features(frames, truth, config)


def _detect_scene(
    path: Path,
    model_path: Path,
    out_dir: Path,
    config: PipelineConfig,
    masks: bool,
    frame_rate,
) -> Tuple[int, int, int]:
    model = load_model(model_path)
    _, frames = open_stream(path, frame_rate)
    out_dir.mkdir(parents=True, exist_ok=True)
    on_frame = None
    if masks:
        mask_dir = out_dir / MASKS_DIR
        mask_dir.mkdir(exist_ok=True)

        def on_frame(frame, mask, states):
            picture = annotate_mask(mask.bits, states)
            annotated = Frame(frame.width, frame.height, frame.index, picture)
            write_pgm(annotated, mask_dir / f"{frame.index:04d}.pgm")

    result = run_pipeline(frames, model=model, config=config, on_frame=on_frame)
    write_records(result.records, out_dir / RECORDS_NAME, out_dir / TRAILS_NAME)
    bicycles = [r for r in result.records if r.decision]
    accepted = [r for r in bicycles if r.accepted(config.tracking.t_cof)]
    return len(result.records), len(bicycles), len(accepted)


@click.group()
@click.version_option(__version__, prog_name="bikedet")
@click.option(
    "--config",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    is_eager=True,
    expose_value=False,
    callback=_load_config_file,
    help="TOML file with pipeline sections and per-command option tables",
)
@click.option("-v", "--verbose", is_flag=True, help="Log diagnostics to stderr")
@click.pass_context
def cli(ctx: click.Context, verbose: bool):
    """bikedet: Bicycle detection in low-resolution traffic video."""
    ctx.ensure_object(dict)
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )


@cli.command()
@click.option(
    "--profile",
    type=click.Choice(["all", *PROFILES]),
    default="all",
    help="Scene profile to render",
)
@click.option(
    "--out",
    type=click.Path(file_okay=False),
    required=True,
    help="Output directory, one sub-directory per scene",
)
@click.option("--jobs", type=click.IntRange(min=1), default=1, help="Scenes rendered in parallel")
@reports_errors
def synth(profile: str, out: str, jobs: int):
    """Render the standard synthetic suite with ground truth."""
    scenes = standard_suite(None if profile == "all" else profile)
    root = Path(out)
    click.echo(f"🎬 Rendering {len(scenes)} scene(s) to {root}")
    results = run_jobs(_synth_scene, [(s, root / s.scene_id) for s in scenes], jobs)
    for sid, length, bicycles in results:
        click.echo(f"   {sid}: {length} frames, {bicycles} bicycle(s)")
    click.echo(f"\n✅ Wrote {len(results)} scene(s), {sum(r[2] for r in results)} bicycles")


@cli.command()
@click.option(
    "--in",
    "in_path",
    type=click.Path(exists=True),
    required=True,
    help="Scene directory, Y4M file or suite directory",
)
@click.option(
    "--truth",
    type=click.Path(exists=True),
    default=None,
    help="Truth CSV or directory (default: truth.csv inside each scene)",
)
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Feature CSV to write")
@click.option("--jobs", type=click.IntRange(min=1), default=1, help="Scenes processed in parallel")
@click.pass_context
@reports_errors
def features(ctx: click.Context, in_path: str, truth: str | None, out: str, jobs: int):
    """Dump labeled per-region features for training."""
    config = pipeline_config(ctx)
    scenes = scene_paths(Path(in_path))
    tasks = []
    for path in scenes:
        if truth is None:
            truth_path = path if path.is_dir() else path.parent / TRUTH_NAME
        elif len(scenes) > 1:
            truth_path = Path(truth) / path.name
        else:
            truth_path = Path(truth)
        tasks.append((path, truth_path, config))

    click.echo(f"🔍 Step 1: Tracking regions in {len(scenes)} scene(s)...")
    rows = [row for scene_rows in run_jobs(_features_scene, tasks, jobs) for row in scene_rows]
    positives = sum(r.is_bicycle for r in rows)
    click.echo(f"   {len(rows)} rows, {positives} bicycle")

    click.echo("\n💾 Step 2: Writing feature CSV...")
    write_feature_csv(rows, out)
    click.echo(f"   Wrote {out}")


@cli.command()
@click.option(
    "--method",
    type=click.Choice(["svm", "cascade"]),
    default=None,
    help="Fuser to train (default: [classifier] method)",
)
@click.option(
    "--corpus",
    type=click.Path(exists=True, dir_okay=False),
    multiple=True,
    required=True,
    help="Feature CSV; repeat to pool several",
)
@click.option("--out", type=click.Path(dir_okay=False), required=True, help="Model file to write")
@click.option(
    "--layout",
    type=str,
    default=None,
    help="Comma-separated feature names (default: [classifier] layout)",
)
@click.pass_context
@reports_errors
def train(ctx: click.Context, method: str | None, corpus: Tuple[str, ...], out: str, layout):
    """Train an SVM or calibrate a cascade from feature CSVs."""
    params = pipeline_config(ctx).classifier
    overrides: Dict[str, object] = {}
    if method is not None:
        overrides["method"] = method
    if layout is not None:
        overrides["layout"] = list(FeatureLayout.parse(layout))
    params = params.build({**params.model_dump(), **overrides})

    click.echo(f"📚 Step 1: Reading {len(corpus)} corpus file(s)...")
    rows = [row for path in corpus for row in read_feature_csv(path)]
    data = TrainingSet.from_rows(rows)
    click.echo(f"   {len(data.positives)} positive, {len(data.negatives)} negative rows")

    click.echo(f"\n🧠 Step 2: Training {params.method}...")
    model = train_model(data, params)
    for warning in getattr(model, "warnings", ()):
        click.echo(f"   ⚠️  {warning}")

    click.echo("\n💾 Step 3: Writing model...")
    save_model(model, out)
    click.echo(f"   Wrote {out}")


@cli.command()
@click.option(
    "--in",
    "in_path",
    type=click.Path(exists=True),
    required=True,
    help="Scene directory, Y4M file or suite directory",
)
@click.option(
    "--model",
    "model_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Model file from `train`",
)
@click.option(
    "--out",
    type=click.Path(file_okay=False),
    required=True,
    help="Output directory for records.csv and trails.csv",
)
@click.option("--masks", is_flag=True, help="Also write annotated foreground masks")
@click.option("--jobs", type=click.IntRange(min=1), default=1, help="Scenes processed in parallel")
@click.option(
    "--frame-rate",
    type=str,
    default=None,
    callback=_frame_rate,
    help="Override the stream frame rate (e.g. 25/1)",
)
@click.pass_context
@reports_errors
def detect(ctx, in_path: str, model_path: str, out: str, masks: bool, jobs: int, frame_rate):
    """Detect bicycles and write terminal track records."""
    config = pipeline_config(ctx)
    check_model(load_model(model_path))
    scenes = scene_paths(Path(in_path))
    root = Path(out)
    if len(scenes) == 1:
        targets = [root]
    else:
        targets = [root / scene_id(p) for p in scenes]

    click.echo(f"📼 Detecting in {len(scenes)} stream(s) with {model_path}")
    tasks = [
        (path, Path(model_path), target, config, masks, frame_rate)
        for path, target in zip(scenes, targets)
    ]
    results = run_jobs(_detect_scene, tasks, jobs)
    for path, (tracks, bicycles, accepted) in zip(scenes, results):
        click.echo(
            f"   {scene_id(path)}: {tracks} tracks, {bicycles} bicycle, {accepted} accepted"
        )
    click.echo(f"\n✅ Records written to {root}")


def _eval_pairs(records: Path, truth: Path) -> List[Tuple[str, Path, Path]]:
    """(profile, records.csv, truth location) per scene."""
    records_file = records if records.is_file() else find_records(records)
    if records_file is not None:
        info = read_scene_info(truth if truth.is_dir() else truth.parent)
        return [(str(info.get("profile", "scene")), records_file, truth)]
    pairs = []
    for scene_dir in sorted(p for p in records.iterdir() if p.is_dir()):
        scene_records = find_records(scene_dir)
        if scene_records is None:
            continue
        truth_dir = truth / scene_dir.name
        if not truth_dir.is_dir():
            raise NoFrames(f"no truth for scene {scene_dir.name} under {truth}")
        profile = str(read_scene_info(truth_dir).get("profile", "scene"))
        pairs.append((profile, scene_records, truth_dir))
    if not pairs:
        raise NoFrames(f"no {RECORDS_NAME} under {records}")
    return pairs


@cli.command("eval")
@click.option(
    "--records",
    type=click.Path(exists=True),
    required=True,
    help="records.csv, or a `detect` output directory",
)
@click.option(
    "--truth",
    type=click.Path(exists=True),
    required=True,
    help="Truth CSV, scene directory or suite directory",
)
@click.option("--sweep", is_flag=True, help="Also tabulate every [eval] threshold")
@click.option(
    "--tcof",
    type=click.FloatRange(0.0, 1.0),
    default=None,
    help="Confidence threshold (default: [tracking] t_cof)",
)
@click.option(
    "--out",
    type=click.Path(file_okay=False),
    default=None,
    help="Directory for report.txt and sweep.csv",
)
@click.option("--min-det", type=click.FloatRange(0.0, 1.0), default=None, help="Fail below R_det")
@click.option("--max-fp", type=click.FloatRange(0.0), default=None, help="Fail above R_fp")
@click.pass_context
@reports_errors
def evaluate(
    ctx: click.Context,
    records: str,
    truth: str,
    sweep: bool,
    tcof: float | None,
    out: str | None,
    min_det: float | None,
    max_fp: float | None,
):
    """Score records against ground truth."""
    config = pipeline_config(ctx)
    t_cof = config.tracking.t_cof if tcof is None else tcof
    protocol = (config.eval.overlap_min, config.eval.min_overlap_frames)

    scenes = []
    for profile, records_file, truth_path in _eval_pairs(Path(records), Path(truth)):
        scenes.append((profile, read_records(records_file), load_truth(truth_path)))

    pooled = match_to_ground_truth(scenes[0][1], scenes[0][2], *protocol, t_cof)
    by_profile = {scenes[0][0]: pooled}
    for profile, recs, gt in scenes[1:]:
        tallies = match_to_ground_truth(recs, gt, *protocol, t_cof)
        pooled = pooled + tallies
        by_profile[profile] = by_profile[profile] + tallies if profile in by_profile else tallies

    overall = MetricsReport.from_tallies(pooled)
    rows = [("all", overall)]
    if len(by_profile) > 1:
        rows += [(p, MetricsReport.from_tallies(by_profile[p])) for p in sorted(by_profile)]

    gates = []
    if min_det is not None:
        gates.append(Gate(f"R_det >= {min_det:g}", overall.R_det >= min_det))
    if max_fp is not None:
        gates.append(Gate(f"R_fp <= {max_fp:g}", overall.R_fp <= max_fp))

    report = render_eval_report(rows, t_cof, label=f"{len(scenes)} scene(s)", gates=gates)
    click.echo(report, nl=False)

    if out is not None:
        Path(out).mkdir(parents=True, exist_ok=True)
        (Path(out) / REPORT_NAME).write_text(report, encoding="utf-8")
    if sweep:
        table = sweep_scenes([(r, g) for _, r, g in scenes], config.eval.thresholds, *protocol)
        if out is not None:
            sweep_path = Path(out) / SWEEP_NAME
        elif Path(records).is_file():
            sweep_path = Path(records).parent / SWEEP_NAME
        else:
            sweep_path = Path(records) / SWEEP_NAME
        write_sweep_csv(table, sweep_path)
        click.echo(f"\n📈 Sweep over {len(table)} thresholds written to {sweep_path}")

    if not all(g.passed for g in gates):
        fail("evaluation gates failed")


def _preload(paths: Sequence[Path], count: int, frame_rate) -> Tuple[list, int, int]:
    """
    `count` frames in memory, re-indexed, taken from the streams in order and
    cycling through them again when they run short. The detector sees the result
    as one stream, so a wrap behaves like a scene cut.
    """
    frames: list = []
    width = height = 0
    while len(frames) < count:
        before = len(frames)
        for path in paths:
            meta, stream = open_stream(path, frame_rate)
            width, height = meta.width, meta.height
            for frame in islice(stream, count - len(frames)):
                frames.append(frame.with_index(len(frames)))
            if len(frames) >= count:
                break
        if len(frames) == before:
            raise NoFrames("no frames to benchmark")
    return frames, width, height


@cli.command()
@click.option(
    "--in",
    "in_path",
    type=click.Path(exists=True),
    required=True,
    help="Scene directory, Y4M file or suite directory",
)
@click.option(
    "--model",
    "model_path",
    type=click.Path(exists=True, dir_okay=False),
    required=True,
    help="Model file from `train`",
)
@click.option("--frames", type=click.IntRange(min=1), default=500, help="Frames to time")
@click.option(
    "--budget-ms",
    type=click.FloatRange(min=0.0, min_open=True),
    default=None,
    help="Median per-frame budget (default: [eval] budget_ms)",
)
@click.option("--frame-rate", type=str, default=None, callback=_frame_rate)
@click.pass_context
@reports_errors
def bench(ctx, in_path: str, model_path: str, frames: int, budget_ms, frame_rate):
    """Time per-frame processing on a preloaded stream; warmup frames run untimed."""
    config = pipeline_config(ctx)
    budget = config.eval.budget_ms if budget_ms is None else budget_ms
    model = load_model(model_path)
    check_model(model)

    warmup = config.background.warmup_frames
    click.echo(f"📼 Step 1: Preloading {frames} frames after a {warmup}-frame warmup...")
    loaded, width, height = _preload(scene_paths(Path(in_path)), warmup + frames, frame_rate)

    click.echo("\n⏱️  Step 2: Timing the detector...")
    result = run_pipeline(loaded, model=model, config=config, progress=True, total=len(loaded))
    timings = result.detection_timings_ms
    report = render_bench_report(
        timings, width, height, budget, model.kind, warmup_frames=result.warmup_frames
    )
    click.echo("")
    click.echo(report, nl=False)
    median_ms, _ = timing_summary(timings)
    if median_ms > budget:
        fail(f"median per-frame time {median_ms:.3f} ms exceeds the {budget:g} ms budget")


def main():
    """Main entry point."""
    cli()


if __name__ == "__main__":
    main()
