import numpy as np
from numpy.typing import NDArray

from neurashed.dynamics.models import ModelState
from neurashed.dynamics.scoring import node_scores
from neurashed.errors import LevelOutOfRange
from neurashed.graph.models import InputPattern, NeurashedGraph


def level_activations(
    *, graph: NeurashedGraph, state: ModelState, pattern: InputPattern, level: int
) -> NDArray[np.float64]:
    """Scores of every node at ``level``, in node-id order."""
    if not 1 <= level <= graph.num_levels - 1:
        raise LevelOutOfRange(f"level {level} outside 1..{graph.num_levels - 1}")
    scores = node_scores(graph=graph, state=state, pattern=pattern)
    return np.array([scores[node] for node in graph.nodes_by_level[level]])
