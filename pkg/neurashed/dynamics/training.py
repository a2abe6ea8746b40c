import logging
from collections.abc import Sequence
from itertools import chain

import numpy as np

from neurashed.dynamics.models import (
    ModelState,
    Snapshot,
    TrainConfig,
    Trajectory,
)
from neurashed.dynamics.rules import RulePair, UpdateSchedule
from neurashed.dynamics.scoring import (
    logits_from_scores,
    predict_proba,
    scores_from_firing,
)
from neurashed.errors import InvalidConfig, StateOverflow
from neurashed.graph.firing import compute_firing, union_firing, union_of
from neurashed.graph.models import Dataset, FiringState, InputPattern, NeurashedGraph
from neurashed.graph.store import validate_dataset

logger = logging.getLogger(__name__)

# independent streams derived from one user seed
INIT_STREAM = 0
SAMPLING_STREAM = 1


def init_state(*, graph: NeurashedGraph, config: TrainConfig) -> ModelState:
    """Initial lambda and eta values.

    Uniform draws use one generator seeded with ``[seed, 0]``: lambdas in
    ascending node id first, then etas in ascending ``(lower, class)`` order.
    """
    nodes = graph.learnable_nodes
    edges = graph.eta_edges
    init = config.init
    match init.kind:
        case "zeros":
            values = np.zeros(len(nodes) + len(edges))
        case "constant":
            values = np.full(len(nodes) + len(edges), init.value)
        case "uniform":
            rng = np.random.default_rng([config.seed, INIT_STREAM])
            values = rng.uniform(init.lo, init.hi, size=len(nodes) + len(edges))
    lam = {node: float(v) for node, v in zip(nodes, values[: len(nodes)], strict=True)}
    eta = {edge: float(v) for edge, v in zip(edges, values[len(nodes) :], strict=True)}
    return ModelState(lam=lam, eta=eta)


def apply_step(
    *,
    state: ModelState,
    union: FiringState,
    rules: dict[int, RulePair],
) -> ModelState:
    """Apply g-plus to firing values and g-minus to the rest, all from ``state``."""
    lam = {
        node: (rules[node].up if node in union else rules[node].down).apply(value)
        for node, value in state.lam.items()
    }
    eta = {
        (lower, upper): (
            rules[lower].up if lower in union and upper in union else rules[lower].down
        ).apply(value)
        for (lower, upper), value in state.eta.items()
    }
    return ModelState(lam=lam, eta=eta)


def check_finite(*, state: ModelState, iteration: int) -> None:
    """Raise ``StateOverflow`` once any lambda or eta leaves float64 range."""
    values = np.fromiter(chain(state.lam.values(), state.eta.values()), dtype=np.float64)
    if not np.isfinite(values).all():
        raise StateOverflow(
            f"lambda/eta overflowed at iteration {iteration}; "
            "shorten the run or use smaller g-plus factors"
        )


def train_step(
    *,
    graph: NeurashedGraph,
    state: ModelState,
    batch: Sequence[InputPattern],
    schedule: UpdateSchedule,
    iteration: int,
) -> ModelState:
    """One update on the union firing state of ``batch``; ``state`` is left untouched."""
    union = union_firing(graph=graph, batch=batch)
    rules = schedule.rules_at(nodes=graph.learnable_nodes, iteration=iteration)
    return apply_step(state=state, union=union, rules=rules)


def check_training_setup(
    *, config: TrainConfig, schedule: UpdateSchedule
) -> None:
    if (
        config.iterations > 0
        and config.init.is_zero
        and schedule.has_multiplicative_up(iterations=config.iterations)
    ):
        raise InvalidConfig(
            "multiplicative g-plus cannot grow a zero-initialised state; "
            "use a positive constant or uniform init"
        )


def run_training(
    *,
    graph: NeurashedGraph,
    dataset: Dataset,
    config: TrainConfig,
    schedule: UpdateSchedule,
) -> Trajectory:
    """Train for ``config.iterations`` steps on seeded weighted samples.

    Batches are drawn with replacement, proportional to pattern weight, from
    a generator seeded with ``[seed, 1]``. Step ``t`` resolves its rules at
    iteration ``t``; snapshot labels count completed steps, and the initial
    and final states are always recorded.
    """
    validate_dataset(graph=graph, dataset=dataset)
    check_training_setup(config=config, schedule=schedule)
    logger.info(
        f"Training {config.iterations} iterations, batch {config.batch_size}, "
        f"seed {config.seed}, {len(dataset)} patterns"
    )

    pathways = [
        compute_firing(graph=graph, pattern=p, supervised=True).firing
        for p in dataset.patterns
    ]
    weights = np.asarray(dataset.weights, dtype=np.float64)
    probs = weights / weights.sum()
    rng = np.random.default_rng([config.seed, SAMPLING_STREAM])
    static_rules = (
        None
        if schedule.iteration_hook is not None
        else schedule.rules_at(nodes=graph.learnable_nodes, iteration=0)
    )

    state = init_state(graph=graph, config=config)
    trajectory = Trajectory(snapshots=[Snapshot(iteration=0, state=state.copy())])
    for t in range(config.iterations):
        picked = rng.choice(len(pathways), size=config.batch_size, p=probs)
        batch = tuple(int(i) for i in picked)
        trajectory.batches.append(batch)
        rules = (
            static_rules
            if static_rules is not None
            else schedule.rules_at(nodes=graph.learnable_nodes, iteration=t)
        )
        union = union_of(pathways[i] for i in batch)
        state = apply_step(state=state, union=union, rules=rules)
        done = t + 1
        check_finite(state=state, iteration=done)
        if done % config.snapshot_every == 0 or done == config.iterations:
            trajectory.snapshots.append(Snapshot(iteration=done, state=state.copy()))
            logger.debug(f"Snapshot at iteration {done}")

    logger.info(f"Training finished after {config.iterations} iterations")
    return trajectory


def class_probabilities(
    *, graph: NeurashedGraph, state: ModelState, pattern: InputPattern
) -> np.ndarray:
    firing = compute_firing(graph=graph, pattern=pattern, supervised=False).firing
    scores = scores_from_firing(graph=graph, state=state, firing=firing)
    return predict_proba(logits_from_scores(graph=graph, state=state, scores=scores))


def true_class_probabilities(
    *, graph: NeurashedGraph, dataset: Dataset, state: ModelState
) -> list[float]:
    return [
        float(class_probabilities(graph=graph, state=state, pattern=p)[p.label])
        for p in dataset.patterns
    ]


def prediction_rows(
    *, graph: NeurashedGraph, dataset: Dataset, state: ModelState
) -> list[tuple[int, str, int, int, float]]:
    """Rows of (pattern_id, group, label, predicted, p_label)."""
    rows = []
    for i, pattern in enumerate(dataset.patterns):
        proba = class_probabilities(graph=graph, state=state, pattern=pattern)
        rows.append(
            (i, pattern.group_name, pattern.label, int(np.argmax(proba)), float(proba[pattern.label]))
        )
    return rows
