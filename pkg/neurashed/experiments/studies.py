import logging
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from neurashed.dynamics.models import ModelState, TrainConfig
from neurashed.dynamics.training import run_training, true_class_probabilities
from neurashed.errors import ExperimentError, ZeroDenominator
from neurashed.experiments.models import Scenario
from neurashed.metrics.activations import level_activations
from neurashed.metrics.elasticity import local_elasticity
from neurashed.metrics.information import estimate_mutual_information
from neurashed.metrics.sparsity import sparsity_profile
from neurashed.reporting.tables import Table

logger = logging.getLogger(__name__)

MI_COLUMNS = ("iteration", "level", "mi_input_bits", "mi_label_bits")
ELASTICITY_COLUMNS = ("base_id", "test_id", "le_value", "error")
MEDIAN_COLUMNS = ("base_group", "test_group", "median_le", "pairs")
SPARSITY_COLUMNS = ("batch_size", "seed", "group", "entropy")
GAP_COLUMNS = ("group", "small_mean", "large_mean", "gap")
CONVERGENCE_COLUMNS = ("seed", "min_p_label", "mean_p_label")


def _config(scenario: Scenario, **changes: int) -> TrainConfig:
    return replace(scenario.config, **changes)


def _train(scenario: Scenario, config: TrainConfig) -> ModelState:
    trajectory = run_training(
        graph=scenario.graph,
        dataset=scenario.dataset,
        config=config,
        schedule=scenario.schedule,
    )
    return trajectory.final


def run_info_bottleneck(
    scenario: Scenario,
    *,
    eval_every: int,
    sigma: float,
    mc_samples: int,
    seed: int,
    iterations: int | None = None,
) -> Table:
    """MI of every hidden level with the input and the label along training.

    ``seed`` drives training, and the same seed is reused for the noise at
    every evaluation point so curves differ only through the state.
    """
    if len(set(scenario.dataset.labels)) < 2:
        raise ExperimentError(f"scenario {scenario.name} needs at least 2 classes")
    config = _config(
        scenario,
        seed=seed,
        snapshot_every=eval_every,
        iterations=scenario.config.iterations if iterations is None else iterations,
    )
    trajectory = run_training(
        graph=scenario.graph,
        dataset=scenario.dataset,
        config=config,
        schedule=scenario.schedule,
    )
    graph = scenario.graph
    rows = []
    for snap in trajectory.snapshots:
        for level in range(1, graph.num_levels):
            vectors = [
                level_activations(graph=graph, state=snap.state, pattern=p, level=level)
                for p in scenario.dataset.patterns
            ]
            estimate = estimate_mutual_information(
                activations=vectors,
                weights=scenario.dataset.weights,
                labels=scenario.dataset.labels,
                sigma=sigma,
                mc_samples=mc_samples,
                seed=seed,
            )
            rows.append((snap.iteration, level, estimate.mi_input, estimate.mi_label))
        logger.debug(f"MI evaluated at iteration {snap.iteration}")
    logger.info(f"Information-bottleneck curve: {len(trajectory.snapshots)} points")
    return Table(columns=MI_COLUMNS, rows=rows)


@dataclass(frozen=True)
class BatchComparison:
    runs: Table
    gaps: Table

    def gap(self, group: str) -> float:
        for row in self.gaps.records():
            if row["group"] == group:
                return float(row["gap"])  # type: ignore[arg-type]
        raise KeyError(group)


def run_batch_comparison(
    scenario: Scenario,
    *,
    small_batch: int,
    large_batch: int,
    seeds: list[int],
    iterations: int | None = None,
    workers: int = 1,
) -> BatchComparison:
    """Sparsity of every declared node group after small- and large-batch runs."""
    if not 1 <= small_batch <= large_batch <= len(scenario.dataset):
        raise ExperimentError(
            f"need 1 <= small ({small_batch}) <= large ({large_batch}) "
            f"<= dataset size ({len(scenario.dataset)})"
        )
    if not scenario.node_groups:
        raise ExperimentError(f"scenario {scenario.name} declares no node groups")
    if not seeds:
        raise ExperimentError("no seeds given")

    keys = sorted({(b, s) for b in (small_batch, large_batch) for s in seeds})

    def one_run(key: tuple[int, int]) -> dict[str, float]:
        batch, seed = key
        config = _config(scenario, batch_size=batch, seed=seed)
        if iterations is not None:
            config = replace(config, iterations=iterations)
        profile = sparsity_profile(state=_train(scenario, config), node_groups=scenario.node_groups)
        logger.info(f"Batch {batch}, seed {seed}: {profile}")
        return profile

    with ThreadPoolExecutor(max_workers=workers) as pool:
        profiles = dict(zip(keys, pool.map(one_run, keys), strict=True))

    rows = [
        (batch, seed, group, profiles[(batch, seed)][group])
        for batch, seed in keys
        for group in scenario.node_groups
    ]
    gaps = []
    for group in scenario.node_groups:
        small = statistics.fmean(profiles[(small_batch, s)][group] for s in seeds)
        large = statistics.fmean(profiles[(large_batch, s)][group] for s in seeds)
        gaps.append((group, small, large, large - small))
    return BatchComparison(
        runs=Table(columns=SPARSITY_COLUMNS, rows=rows),
        gaps=Table(columns=GAP_COLUMNS, rows=gaps),
    )


@dataclass(frozen=True)
class ElasticityReport:
    rows: Table
    medians: Table

    def median(self, *, base_group: str, test_group: str) -> float | None:
        for row in self.medians.records():
            if row["base_group"] == base_group and row["test_group"] == test_group:
                return row["median_le"]  # type: ignore[return-value]
        raise KeyError((base_group, test_group))


def run_elasticity_study(
    scenario: Scenario, *, train_iterations: int, seed: int
) -> ElasticityReport:
    """Local elasticity between every pair of patterns at the trained state.

    The probe update uses the scenario's probe rules at the iteration right
    after training. Pairs whose base update leaves the base logits unchanged
    keep an empty value and the error name.
    """
    groups = scenario.pattern_groups
    if len(groups) < 3:
        raise ExperimentError(
            f"scenario {scenario.name} needs at least 3 pattern groups, has {len(groups)}"
        )
    state = _train(scenario, _config(scenario, seed=seed, iterations=train_iterations))
    patterns = scenario.dataset.patterns

    rows: list[tuple[int, int, float | None, str]] = []
    for b, base in enumerate(patterns):
        degenerate = False
        for t, test in enumerate(patterns):
            try:
                value = local_elasticity(
                    graph=scenario.graph,
                    state=state,
                    base=base,
                    test=test,
                    schedule=scenario.run.probe_schedule,
                    iteration=train_iterations,
                )
                rows.append((b, t, value, ""))
            except ZeroDenominator as exc:
                degenerate = True
                rows.append((b, t, None, exc.kind))
        if degenerate:
            logger.warning(f"Base pattern {b}: update leaves its logits unchanged")

    group_of = {i: p.group_name for i, p in enumerate(patterns)}
    medians = []
    for base_group in groups:
        for test_group in groups:
            values = [
                value
                for b, t, value, _ in rows
                if group_of[b] == base_group and group_of[t] == test_group and value is not None
            ]
            median = statistics.median(values) if values else None
            medians.append((base_group, test_group, median, len(values)))
    return ElasticityReport(
        rows=Table(columns=ELASTICITY_COLUMNS, rows=rows),
        medians=Table(columns=MEDIAN_COLUMNS, rows=medians),
    )


def run_convergence(
    scenario: Scenario, *, seeds: list[int], iterations: int | None = None
) -> Table:
    """Lowest and mean true-class probability over the training set, per seed."""
    rows = []
    for seed in seeds:
        config = _config(scenario, seed=seed)
        if iterations is not None:
            config = replace(config, iterations=iterations)
        probs = true_class_probabilities(
            graph=scenario.graph, dataset=scenario.dataset, state=_train(scenario, config)
        )
        rows.append((seed, min(probs), statistics.fmean(probs)))
    return Table(columns=CONVERGENCE_COLUMNS, rows=rows)
