from collections.abc import Iterable, Sequence

from neurashed.errors import EmptyBatch
from neurashed.graph.models import (
    FeaturePathway,
    FiringState,
    InputPattern,
    NeurashedGraph,
    NodeId,
)
from neurashed.graph.store import check_pattern


def compute_firing(
    *, graph: NeurashedGraph, pattern: InputPattern, supervised: bool = True
) -> FiringState:
    """Propagate an input upward through the threshold rules.

    Middle levels are evaluated in order, each from the level below. With
    ``supervised`` the label's class node fires at the top level; without it
    no top-level node fires.
    """
    check_pattern(graph=graph, pattern=pattern, check_label=supervised)
    firing: set[NodeId] = set(pattern.firing_first_level)
    for lvl in range(2, graph.num_levels):
        for node in graph.nodes_by_level[lvl]:
            active = sum(1 for dep in graph.dependents[node] if dep in firing)
            if active >= graph.thresholds[node]:
                firing.add(node)
    if supervised:
        firing.add(graph.class_nodes[pattern.label])
    return FiringState(firing=frozenset(firing))


def induced_pathway(*, graph: NeurashedGraph, nodes: frozenset[NodeId]) -> FeaturePathway:
    edges = frozenset(e for e in graph.edges if e[0] in nodes and e[1] in nodes)
    return FeaturePathway(nodes=nodes, edges=edges)


def feature_pathway(*, graph: NeurashedGraph, pattern: InputPattern) -> FeaturePathway:
    state = compute_firing(graph=graph, pattern=pattern, supervised=True)
    return induced_pathway(graph=graph, nodes=state.firing)


def union_of(pathways: Iterable[frozenset[NodeId]]) -> FiringState:
    """Union already computed pathway node sets."""
    nodes: set[NodeId] = set()
    count = 0
    for pathway in pathways:
        nodes |= pathway
        count += 1
    if count == 0:
        raise EmptyBatch("batch is empty")
    return FiringState(firing=frozenset(nodes))


def union_firing(*, graph: NeurashedGraph, batch: Sequence[InputPattern]) -> FiringState:
    """Mini-batch firing: a node fires if any member's own pathway contains it.

    Thresholds are never re-evaluated on the pooled inputs.
    """
    if not batch:
        raise EmptyBatch("batch is empty")
    return union_of(
        compute_firing(graph=graph, pattern=p, supervised=True).firing for p in batch
    )
