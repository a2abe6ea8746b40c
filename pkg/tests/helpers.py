"""Random graph builders and brute-force oracles shared by tests."""

import json
import random

from neurashed.dynamics.models import ModelState
from neurashed.graph.models import InputPattern, NeurashedGraph
from neurashed.graph.store import parse_graph_spec


def random_graph_document(
    rng: random.Random,
    *,
    max_levels: int = 5,
    max_width: int = 4,
    max_classes: int = 3,
    widths: list[int] | None = None,
) -> dict:
    """A valid graph document with random widths, wiring and thresholds.

    ``widths`` fixes the number of nodes per level, top level last.
    """
    if widths is None:
        num_levels = rng.randint(2, max_levels)
        widths = [rng.randint(1, max_width) for _ in range(num_levels - 1)]
        widths.append(rng.randint(2, max_classes))
    num_levels = len(widths)
    nodes, edges, by_level = [], [], []
    next_id = 0
    for lvl, width in enumerate(widths, start=1):
        ids = list(range(next_id, next_id + width))
        next_id += width
        for node in ids:
            entry = {"id": node, "level": lvl}
            if lvl > 1:
                deps = rng.sample(by_level[-1], rng.randint(1, len(by_level[-1])))
                edges += [[dep, node] for dep in sorted(deps)]
                if lvl < num_levels:
                    entry["threshold"] = rng.randint(1, len(deps))
            nodes.append(entry)
        by_level.append(ids)
    return {"levels": num_levels, "nodes": nodes, "edges": edges, "class_nodes": by_level[-1]}


def random_graph(rng: random.Random, **kwargs) -> NeurashedGraph:
    return parse_graph_spec(json.dumps(random_graph_document(rng, **kwargs)))


def random_state(rng: random.Random, graph: NeurashedGraph, *, lo: float = 0.0, hi: float = 2.0) -> ModelState:
    return ModelState(
        lam={n: rng.uniform(lo, hi) for n in graph.learnable_nodes},
        eta={e: rng.uniform(lo, hi) for e in graph.eta_edges},
    )


def random_pattern(rng: random.Random, graph: NeurashedGraph) -> InputPattern:
    first = list(graph.nodes_by_level[1])
    fire = rng.sample(first, rng.randint(1, len(first)))
    return InputPattern(firing_first_level=frozenset(fire), label=rng.randrange(graph.num_classes))


def brute_fires(graph: NeurashedGraph, pattern: InputPattern, node: int) -> bool:
    lvl = graph.levels[node]
    if lvl == 1:
        return node in pattern.firing_first_level
    if lvl == graph.num_levels:
        return False
    deps = [lower for lower, upper in graph.edges if upper == node]
    return sum(brute_fires(graph, pattern, d) for d in deps) >= graph.thresholds[node]


def brute_score(graph: NeurashedGraph, state: ModelState, pattern: InputPattern, node: int) -> float:
    if not brute_fires(graph, pattern, node):
        return 0.0
    if graph.levels[node] == 1:
        return state.lam[node]
    deps = [lower for lower, upper in graph.edges if upper == node]
    return state.lam[node] * sum(brute_score(graph, state, pattern, d) for d in deps)


def brute_logits(graph: NeurashedGraph, state: ModelState, pattern: InputPattern) -> list[float]:
    return [
        sum(
            state.eta[(lower, upper)] * brute_score(graph, state, pattern, lower)
            for lower, upper in graph.edges
            if upper == class_node
        )
        for class_node in graph.class_nodes
    ]
