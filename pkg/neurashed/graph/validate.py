"""Independent re-check of every graph invariant.

Works on a built ``NeurashedGraph`` rather than on the document, so it can
serve as an oracle for the parser.
"""

from collections import Counter

from neurashed.errors import (
    EdgeSkipsLevel,
    InvalidLevel,
    MalformedDocument,
    NoClassNodes,
    ThresholdOutOfRange,
    UnknownNodeId,
)
from neurashed.graph.models import NeurashedGraph, Violation


def validate_graph(graph: NeurashedGraph) -> list[Violation]:
    """Return every violated invariant; an empty list means the graph is valid."""
    violations: list[Violation] = []
    n = graph.num_nodes
    top = graph.num_levels

    if top < 2:
        violations.append(
            Violation(InvalidLevel, f"graph needs at least 2 levels, got {top}")
        )
    for node, lvl in enumerate(graph.levels):
        if not 1 <= lvl <= top:
            violations.append(
                Violation(InvalidLevel, f"node {node} has level {lvl} outside 1..{top}")
            )

    indegree: Counter[int] = Counter()
    for lower, upper in sorted(graph.edges):
        if not (0 <= lower < n and 0 <= upper < n):
            violations.append(
                Violation(UnknownNodeId, f"edge ({lower}, {upper}) references unknown node")
            )
            continue
        if graph.levels[upper] != graph.levels[lower] + 1:
            violations.append(
                Violation(
                    EdgeSkipsLevel,
                    f"edge ({lower}, {upper}) goes from level {graph.levels[lower]} "
                    f"to level {graph.levels[upper]}",
                )
            )
        indegree[upper] += 1

    for node, lvl in enumerate(graph.levels):
        threshold = graph.thresholds.get(node)
        if 1 < lvl < top:
            if indegree[node] < 1:
                violations.append(
                    Violation(ThresholdOutOfRange, f"middle node {node} has no dependents")
                )
            if threshold is None:
                violations.append(
                    Violation(ThresholdOutOfRange, f"middle node {node} has no threshold")
                )
            elif not 1 <= threshold <= max(indegree[node], 1):
                violations.append(
                    Violation(
                        ThresholdOutOfRange,
                        f"node {node} threshold {threshold} outside 1..{indegree[node]}",
                    )
                )
        elif threshold is not None:
            violations.append(
                Violation(
                    ThresholdOutOfRange,
                    f"node {node} on level {lvl} must not carry a threshold",
                )
            )

    tops = {node for node, lvl in enumerate(graph.levels) if lvl == top}
    if len(graph.class_nodes) < 2:
        violations.append(
            Violation(NoClassNodes, f"need at least 2 class nodes, got {len(graph.class_nodes)}")
        )
    if len(set(graph.class_nodes)) != len(graph.class_nodes):
        violations.append(Violation(MalformedDocument, "class_nodes has duplicates"))
    for node in graph.class_nodes:
        if node not in tops:
            violations.append(
                Violation(MalformedDocument, f"class node {node} is not on the top level")
            )
    missing = tops - set(graph.class_nodes)
    if missing:
        violations.append(
            Violation(
                MalformedDocument,
                f"top-level nodes {sorted(missing)} are not listed as class nodes",
            )
        )
    return violations
