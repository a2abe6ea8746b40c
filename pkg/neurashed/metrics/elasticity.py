import numpy as np

from neurashed.dynamics.models import ModelState
from neurashed.dynamics.rules import UpdateSchedule
from neurashed.dynamics.scoring import class_logits
from neurashed.dynamics.training import train_step
from neurashed.errors import ZeroDenominator
from neurashed.graph.models import InputPattern, NeurashedGraph


def logit_shift(
    *,
    graph: NeurashedGraph,
    before: ModelState,
    after: ModelState,
    pattern: InputPattern,
) -> float:
    """Euclidean distance between a pattern's logits under two states."""
    delta = class_logits(graph=graph, state=after, pattern=pattern) - class_logits(
        graph=graph, state=before, pattern=pattern
    )
    return float(np.linalg.norm(delta))


def local_elasticity(
    *,
    graph: NeurashedGraph,
    state: ModelState,
    base: InputPattern,
    test: InputPattern,
    schedule: UpdateSchedule,
    iteration: int,
) -> float:
    """How far one update on ``base`` moves the logits of ``test``, relative to ``base``.

    The update is applied to a copy; ``state`` is not modified.

    Raises
    ------
    ZeroDenominator
        If the update leaves the base logits unchanged.
    """
    updated = train_step(
        graph=graph, state=state.copy(), batch=[base], schedule=schedule, iteration=iteration
    )
    denominator = logit_shift(graph=graph, before=state, after=updated, pattern=base)
    if denominator == 0:
        raise ZeroDenominator("update on the base input leaves its logits unchanged")
    numerator = logit_shift(graph=graph, before=state, after=updated, pattern=test)
    return numerator / denominator
