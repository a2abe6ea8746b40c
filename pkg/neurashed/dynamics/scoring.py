import numpy as np
from numpy.typing import NDArray
from scipy.special import softmax

from neurashed.dynamics.models import ModelState
from neurashed.errors import NonFiniteLogit
from neurashed.graph.firing import compute_firing
from neurashed.graph.models import InputPattern, NeurashedGraph, NodeId


def scores_from_firing(
    *, graph: NeurashedGraph, state: ModelState, firing: frozenset[NodeId]
) -> dict[NodeId, float]:
    scores: dict[NodeId, float] = {}
    for lvl in range(1, graph.num_levels):
        for node in graph.nodes_by_level[lvl]:
            if node not in firing:
                scores[node] = 0.0
            elif lvl == 1:
                scores[node] = state.lam[node]
            else:
                scores[node] = state.lam[node] * sum(
                    scores[dep] for dep in graph.dependents[node]
                )
    for node in graph.class_nodes:
        scores[node] = 0.0
    return scores


def node_scores(
    *, graph: NeurashedGraph, state: ModelState, pattern: InputPattern
) -> dict[NodeId, float]:
    """Scores of every node for an input, evaluated bottom-up.

    A firing first-level node scores its own lambda, a firing middle node
    scores its lambda times the summed scores of its dependents, and every
    other node scores 0. Class nodes carry no score of their own.
    """
    firing = compute_firing(graph=graph, pattern=pattern, supervised=False).firing
    return scores_from_firing(graph=graph, state=state, firing=firing)


def logits_from_scores(
    *, graph: NeurashedGraph, state: ModelState, scores: dict[NodeId, float]
) -> NDArray[np.float64]:
    logits = np.zeros(graph.num_classes)
    for lower, upper in graph.eta_edges:
        logits[graph.class_index[upper]] += state.eta[(lower, upper)] * scores[lower]
    return logits


def class_logits(
    *, graph: NeurashedGraph, state: ModelState, pattern: InputPattern
) -> NDArray[np.float64]:
    scores = node_scores(graph=graph, state=state, pattern=pattern)
    return logits_from_scores(graph=graph, state=state, scores=scores)


def predict_proba(logits: NDArray[np.float64]) -> NDArray[np.float64]:
    """Softmax over class logits."""
    logits = np.asarray(logits, dtype=np.float64)
    if not np.all(np.isfinite(logits)):
        raise NonFiniteLogit(f"logits must be finite, got {logits.tolist()}")
    return softmax(logits)
