"""Command implementations shared by the CLI.

Each function takes explicit parameters, writes its outputs, and returns a
short summary string. Domain problems raise ``NeurashedError`` subclasses.
"""

import logging
import shutil
import tempfile
from collections.abc import Callable
from dataclasses import dataclass, replace
from pathlib import Path

from neurashed.config import Settings
from neurashed.dynamics.models import RunConfig
from neurashed.dynamics.store import check_run_config, load_config, trajectory_rows
from neurashed.dynamics.training import prediction_rows, run_training
from neurashed.errors import MalformedDocument
from neurashed.experiments.expectations import check_expectations
from neurashed.experiments.models import Scenario
from neurashed.experiments.scenarios import build_scenario, bundle_files, list_scenarios
from neurashed.experiments.studies import (
    run_batch_comparison,
    run_elasticity_study,
    run_info_bottleneck,
)
from neurashed.graph.store import load_dataset, load_graph, validate_dataset
from neurashed.graph.validate import validate_graph
from neurashed.lockfile import locked_output
from neurashed.reporting.manifest import (
    RunManifest,
    file_sha256,
    now_iso,
    prepare_output_dir,
    write_manifest,
)
from neurashed.reporting.svg import PlotStyle, Series, emit_svg_plot
from neurashed.reporting.tables import Table, emit_csv
from neurashed.version import __version__

logger = logging.getLogger(__name__)

SNAPSHOT_COLUMNS = ("iteration", "kind", "id", "value")
PREDICTION_COLUMNS = ("pattern_id", "group", "label", "predicted", "p_label")


@dataclass(frozen=True)
class Inputs:
    scenario: Scenario
    files: tuple[Path, ...]


@dataclass(frozen=True)
class Overrides:
    seed: int | None = None
    iterations: int | None = None
    batch_size: int | None = None
    snapshot_every: int | None = None


def load_inputs(
    *,
    scenario: str | None,
    graph_file: Path | None,
    dataset_file: Path | None,
    config_file: Path | None,
    settings: Settings,
) -> Inputs:
    """Resolve a scenario name or a graph/dataset/config file triple."""
    if scenario is not None:
        loaded = build_scenario(scenario, settings=settings)
        return Inputs(scenario=loaded, files=tuple(bundle_files(loaded)))
    if graph_file is None or dataset_file is None or config_file is None:
        raise MalformedDocument("give --scenario, or all of --graph, --dataset and --config")
    graph = load_graph(graph_file=graph_file)
    dataset = load_dataset(dataset_file=dataset_file)
    validate_dataset(graph=graph, dataset=dataset)
    run = load_config(config_file=config_file)
    check_run_config(graph=graph, run=run)
    return Inputs(
        scenario=Scenario(name="custom", graph=graph, dataset=dataset, run=run),
        files=(graph_file, dataset_file, config_file),
    )


def apply_overrides(scenario: Scenario, overrides: Overrides) -> Scenario:
    changes = {
        "seed": overrides.seed,
        "iterations": overrides.iterations,
        "batch_size": overrides.batch_size,
        "snapshot_every": overrides.snapshot_every,
    }
    config = replace(scenario.config, **{k: v for k, v in changes.items() if v is not None})
    run: RunConfig = replace(scenario.run, config=config)
    return replace(scenario, run=run)


def validate_files(
    *,
    scenario: str | None,
    graph_file: Path | None,
    dataset_file: Path | None,
    config_file: Path | None,
    settings: Settings,
) -> str:
    """Check whichever documents are given. Returns "OK"."""
    if scenario is not None:
        build_scenario(scenario, settings=settings)
        return "OK"
    if graph_file is None and dataset_file is None and config_file is None:
        raise MalformedDocument("nothing to validate: give --graph, --dataset, --config or --scenario")
    graph = load_graph(graph_file=graph_file) if graph_file else None
    if graph is not None:
        violations = validate_graph(graph)
        if violations:
            raise violations[0].to_error()
    if dataset_file is not None:
        dataset = load_dataset(dataset_file=dataset_file)
        if graph is not None:
            validate_dataset(graph=graph, dataset=dataset)
    if config_file is not None:
        run = load_config(config_file=config_file)
        if graph is not None:
            check_run_config(graph=graph, run=run)
    return "OK"


def _run_into(
    *,
    out_dir: Path,
    force: bool,
    command: list[str],
    inputs: Inputs,
    seeds: list[int],
    produce: Callable[[Path], list[Path]],
) -> list[Path]:
    """Run ``produce`` into a staging directory and move its files into ``out_dir``.

    Nothing reaches ``out_dir`` unless ``produce`` returns, so a failed run
    leaves the directory as it was.
    """
    prepare_output_dir(out_dir=out_dir, force=force)
    with locked_output(out_dir=out_dir):
        manifest = RunManifest(
            command=command,
            version=__version__,
            input_hashes={str(p): file_sha256(p) for p in inputs.files},
            seeds=seeds,
            started_at=now_iso(),
        )
        staging = Path(tempfile.mkdtemp(prefix=f".{out_dir.name}.", suffix=".partial", dir=out_dir.parent))
        try:
            staged = produce(staging)
            outputs = [out_dir / p.relative_to(staging) for p in staged]
            for src, dst in zip(staged, outputs, strict=True):
                src.replace(dst)
        except Exception:
            logger.error(f"Run into {out_dir} failed; discarding partial outputs")
            raise
        finally:
            shutil.rmtree(staging, ignore_errors=True)
        write_manifest(out_dir=out_dir, manifest=manifest, outputs=outputs)
    return outputs


def _summary(out_dir: Path, outputs: list[Path]) -> str:
    names = ", ".join(p.name for p in outputs)
    return f"Wrote {names}, manifest.json to {out_dir}"


def train(*, inputs: Inputs, out_dir: Path, force: bool, command: list[str]) -> str:
    scenario = inputs.scenario

    def produce(target: Path) -> list[Path]:
        trajectory = run_training(
            graph=scenario.graph,
            dataset=scenario.dataset,
            config=scenario.config,
            schedule=scenario.schedule,
        )
        snapshots = target / "snapshots.csv"
        emit_csv(Table(columns=SNAPSHOT_COLUMNS, rows=trajectory_rows(trajectory)), snapshots)  # type: ignore[arg-type]
        predictions = target / "predictions.csv"
        rows = prediction_rows(graph=scenario.graph, dataset=scenario.dataset, state=trajectory.final)
        emit_csv(Table(columns=PREDICTION_COLUMNS, rows=rows), predictions)  # type: ignore[arg-type]
        return [snapshots, predictions]

    outputs = _run_into(
        out_dir=out_dir, force=force, command=command, inputs=inputs,
        seeds=[scenario.config.seed], produce=produce,
    )
    return _summary(out_dir, outputs)


def information_bottleneck(
    *,
    inputs: Inputs,
    out_dir: Path,
    force: bool,
    command: list[str],
    eval_every: int,
    sigma: float,
    mc_samples: int,
) -> str:
    scenario = inputs.scenario
    seed = scenario.config.seed

    def produce(target: Path) -> list[Path]:
        table = run_info_bottleneck(
            scenario, eval_every=eval_every, sigma=sigma, mc_samples=mc_samples, seed=seed
        )
        csv_path = target / "mi_curve.csv"
        emit_csv(table, csv_path)
        curves: dict[int, tuple[list[float], list[float], list[float]]] = {}
        for iteration, level, mi_input, mi_label in table.rows:
            x, inp, lab = curves.setdefault(int(level), ([], [], []))  # type: ignore[arg-type]
            x.append(float(iteration))  # type: ignore[arg-type]
            inp.append(float(mi_input))  # type: ignore[arg-type]
            lab.append(float(mi_label))  # type: ignore[arg-type]
        series = []
        for level, (x, inp, lab) in sorted(curves.items()):
            series.append(Series(f"level {level}: I(X;T)", x, inp))
            series.append(Series(f"level {level}: I(T;Y)", x, lab))
        svg_path = target / "mi_curve.svg"
        emit_svg_plot(
            series,
            PlotStyle(kind="line", title=f"{scenario.name}: mutual information", x_label="iteration", y_label="bits"),
            svg_path,
        )
        return [csv_path, svg_path]

    outputs = _run_into(
        out_dir=out_dir, force=force, command=command, inputs=inputs, seeds=[seed], produce=produce
    )
    return _summary(out_dir, outputs)


def elasticity(*, inputs: Inputs, out_dir: Path, force: bool, command: list[str]) -> str:
    scenario = inputs.scenario
    seed = scenario.config.seed

    def produce(target: Path) -> list[Path]:
        report = run_elasticity_study(
            scenario, train_iterations=scenario.config.iterations, seed=seed
        )
        rows_path = target / "elasticity.csv"
        emit_csv(report.rows, rows_path)
        medians_path = target / "elasticity_medians.csv"
        emit_csv(report.medians, medians_path)
        groups = list(scenario.pattern_groups)
        series = [
            Series(
                f"base {base}",
                [float(i) for i in range(len(groups))],
                [report.median(base_group=base, test_group=test) for test in groups],
            )
            for base in groups
        ]
        svg_path = target / "elasticity.svg"
        emit_svg_plot(
            series,
            PlotStyle(kind="histogram", title=f"{scenario.name}: median local elasticity", x_label="test group", y_label="LE", categories=groups),
            svg_path,
        )
        return [rows_path, medians_path, svg_path]

    outputs = _run_into(
        out_dir=out_dir, force=force, command=command, inputs=inputs, seeds=[seed], produce=produce
    )
    return _summary(out_dir, outputs)


def compare_batch(
    *,
    inputs: Inputs,
    out_dir: Path,
    force: bool,
    command: list[str],
    small_batch: int,
    large_batch: int,
    seeds: list[int],
    workers: int,
) -> str:
    scenario = inputs.scenario

    def produce(target: Path) -> list[Path]:
        comparison = run_batch_comparison(
            scenario, small_batch=small_batch, large_batch=large_batch, seeds=seeds, workers=workers
        )
        runs_path = target / "sparsity.csv"
        emit_csv(comparison.runs, runs_path)
        gaps_path = target / "sparsity_gap.csv"
        emit_csv(comparison.gaps, gaps_path)
        groups = [str(g) for g in comparison.gaps.column("group")]
        positions = [float(i) for i in range(len(groups))]
        series = [
            Series(f"batch {small_batch}", positions, comparison.gaps.column("small_mean")),  # type: ignore[arg-type]
            Series(f"batch {large_batch}", positions, comparison.gaps.column("large_mean")),  # type: ignore[arg-type]
        ]
        svg_path = target / "sparsity.svg"
        emit_svg_plot(
            series,
            PlotStyle(kind="histogram", title=f"{scenario.name}: normalized entropy per group", x_label="node group", y_label="entropy", categories=groups),
            svg_path,
        )
        return [runs_path, gaps_path, svg_path]

    outputs = _run_into(
        out_dir=out_dir, force=force, command=command, inputs=inputs, seeds=seeds, produce=produce
    )
    return _summary(out_dir, outputs)


def format_scenario_list(*, settings: Settings) -> str:
    names = list_scenarios(settings=settings)
    if not names:
        return "No scenarios found."
    lines = []
    for name in names:
        description = build_scenario(name, settings=settings).expectations.description
        lines.append(f"{name}: {description.split('. ')[0]}" if description else name)
    return "\n".join(lines)


def check_scenario(*, name: str, settings: Settings) -> tuple[str, bool]:
    """Run a scenario's expectations. Returns the report and whether all passed."""
    scenario = build_scenario(name, settings=settings)
    results = check_expectations(scenario, settings=settings)
    lines = [f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}" for r in results]
    passed = all(r.passed for r in results)
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} expectations passed")
    return "\n".join(lines), passed
