from dataclasses import dataclass, field
from typing import Literal

from neurashed.dynamics.rules import UpdateSchedule
from neurashed.errors import InvalidConfig
from neurashed.graph.models import Edge, NodeId

InitKind = Literal["zeros", "constant", "uniform"]

MAX_SEED = 2**64 - 1


@dataclass(frozen=True)
class InitSpec:
    kind: InitKind = "uniform"
    value: float = 0.0
    lo: float = 0.0
    hi: float = 0.01

    def __post_init__(self) -> None:
        if self.kind == "constant" and not self.value >= 0:
            raise InvalidConfig(f"constant init must be >= 0, got {self.value}")
        if self.kind == "uniform" and not 0 <= self.lo < self.hi:
            raise InvalidConfig(f"uniform init needs 0 <= lo < hi, got ({self.lo}, {self.hi})")

    @property
    def is_zero(self) -> bool:
        return self.kind == "zeros" or (self.kind == "constant" and self.value == 0)


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 1
    iterations: int = 1000
    seed: int = 0
    init: InitSpec = field(default_factory=InitSpec)
    snapshot_every: int = 50

    def __post_init__(self) -> None:
        if self.batch_size < 1:
            raise InvalidConfig(f"batch_size must be >= 1, got {self.batch_size}")
        if self.iterations < 0:
            raise InvalidConfig(f"iterations must be >= 0, got {self.iterations}")
        if not 0 <= self.seed <= MAX_SEED:
            raise InvalidConfig(f"seed must be in 0..2**64-1, got {self.seed}")
        if self.snapshot_every < 1:
            raise InvalidConfig(f"snapshot_every must be >= 1, got {self.snapshot_every}")


@dataclass
class ModelState:
    """Learnable values: one lambda per non-top node, one eta per class edge."""

    lam: dict[NodeId, float]
    eta: dict[Edge, float]

    def copy(self) -> "ModelState":
        return ModelState(lam=dict(self.lam), eta=dict(self.eta))


@dataclass(frozen=True)
class Snapshot:
    iteration: int
    state: ModelState


@dataclass
class Trajectory:
    snapshots: list[Snapshot] = field(default_factory=list)
    batches: list[tuple[int, ...]] = field(default_factory=list)

    @property
    def final(self) -> ModelState:
        return self.snapshots[-1].state

    @property
    def iterations(self) -> list[int]:
        return [s.iteration for s in self.snapshots]


@dataclass(frozen=True)
class RunConfig:
    """Everything a config document describes besides the graph and dataset."""

    config: TrainConfig
    schedule: UpdateSchedule
    probe_schedule: UpdateSchedule
    node_groups: dict[str, tuple[NodeId, ...]] = field(default_factory=dict)


TrajectoryRows = list[tuple[int, str, str, float]]
