from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType

from neurashed.errors import NeurashedError

NodeId = int
Edge = tuple[NodeId, NodeId]


@dataclass(frozen=True)
class NeurashedGraph:
    """Leveled DAG of feature nodes.

    ``levels[i]`` is the level (1..num_levels) of node ``i``; ids are dense.
    Thresholds exist for middle-level nodes only; ``class_nodes`` lists the
    top-level nodes in class-index order.
    """

    num_levels: int
    levels: tuple[int, ...]
    edges: frozenset[Edge]
    thresholds: Mapping[NodeId, int]
    class_nodes: tuple[NodeId, ...]

    def __post_init__(self) -> None:
        # read-only snapshot of the caller's mapping
        object.__setattr__(self, "thresholds", MappingProxyType(dict(self.thresholds)))

    def __hash__(self) -> int:
        return hash(
            (self.num_levels, self.levels, self.edges, tuple(sorted(self.thresholds.items())), self.class_nodes)
        )

    @property
    def num_nodes(self) -> int:
        return len(self.levels)

    @property
    def num_classes(self) -> int:
        return len(self.class_nodes)

    def level_of(self, node: NodeId) -> int:
        return self.levels[node]

    @cached_property
    def dependents(self) -> dict[NodeId, tuple[NodeId, ...]]:
        """Lower-level dependents of each node, sorted by id."""
        deps: dict[NodeId, list[NodeId]] = {n: [] for n in range(self.num_nodes)}
        for lower, upper in self.edges:
            deps[upper].append(lower)
        return {n: tuple(sorted(d)) for n, d in deps.items()}

    @cached_property
    def nodes_by_level(self) -> dict[int, tuple[NodeId, ...]]:
        by_level: dict[int, list[NodeId]] = {
            lvl: [] for lvl in range(1, self.num_levels + 1)
        }
        for node, lvl in enumerate(self.levels):
            by_level[lvl].append(node)
        return {lvl: tuple(nodes) for lvl, nodes in by_level.items()}

    @cached_property
    def learnable_nodes(self) -> tuple[NodeId, ...]:
        """Nodes carrying an amplification factor: every node below the top."""
        return tuple(n for n, lvl in enumerate(self.levels) if lvl < self.num_levels)

    @cached_property
    def eta_edges(self) -> tuple[Edge, ...]:
        """Edges into class nodes, ordered by (lower, upper)."""
        top = set(self.class_nodes)
        return tuple(sorted(e for e in self.edges if e[1] in top))

    @cached_property
    def class_index(self) -> dict[NodeId, int]:
        return {node: k for k, node in enumerate(self.class_nodes)}


@dataclass(frozen=True)
class InputPattern:
    firing_first_level: frozenset[NodeId]
    label: int
    weight: float = 1.0
    group: str | None = None

    @property
    def group_name(self) -> str:
        return self.group if self.group is not None else f"class-{self.label}"


@dataclass(frozen=True)
class Dataset:
    patterns: tuple[InputPattern, ...]

    def __len__(self) -> int:
        return len(self.patterns)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(p.weight for p in self.patterns)

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(p.label for p in self.patterns)


@dataclass(frozen=True)
class FiringState:
    firing: frozenset[NodeId]

    def __contains__(self, node: object) -> bool:
        return node in self.firing


@dataclass(frozen=True)
class FeaturePathway:
    nodes: frozenset[NodeId]
    edges: frozenset[Edge] = field(default_factory=frozenset)


@dataclass(frozen=True)
class Violation:
    """One broken graph invariant, named after the error the parser raises."""

    error: type[NeurashedError]
    message: str

    @property
    def kind(self) -> str:
        return self.error.__name__

    def to_error(self) -> NeurashedError:
        return self.error(self.message)
