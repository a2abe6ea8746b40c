from dataclasses import dataclass, field
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, StrictInt

from neurashed.dynamics.models import RunConfig, TrainConfig
from neurashed.dynamics.rules import UpdateSchedule
from neurashed.graph.models import Dataset, NeurashedGraph, NodeId


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ConvergenceExpectation(_Document):
    seeds: list[StrictInt]
    min_probability: float = Field(gt=0, le=1)


class LevelExpectation(_Document):
    level: StrictInt
    peak_mi_input_min: float | None = None
    # evaluations at or before this iteration do not count towards the peak
    peak_after_iteration: StrictInt | None = None
    final_mi_input: tuple[float, float] | None = None
    final_mi_label: tuple[float, float] | None = None


class InfoBottleneckExpectation(_Document):
    seed: StrictInt
    levels: list[LevelExpectation]


class ElasticityExpectation(_Document):
    seeds: list[StrictInt]
    base_group: str
    descending: list[str] = Field(min_length=2)


class BatchComparisonExpectation(_Document):
    small_batch: StrictInt
    large_batch: StrictInt
    seeds: list[StrictInt]


class Expectations(_Document):
    """Machine-checkable claims a scenario bundle makes about itself."""

    description: str = ""
    reconstruction: bool = False
    pathways: dict[int, list[StrictInt]] = {}
    convergence: ConvergenceExpectation | None = None
    information_bottleneck: InfoBottleneckExpectation | None = None
    elasticity: ElasticityExpectation | None = None
    batch_comparison: BatchComparisonExpectation | None = None


@dataclass(frozen=True)
class Scenario:
    name: str
    graph: NeurashedGraph
    dataset: Dataset
    run: RunConfig
    expectations: Expectations = field(default_factory=Expectations)
    source: Path | None = None

    @property
    def config(self) -> TrainConfig:
        return self.run.config

    @property
    def schedule(self) -> UpdateSchedule:
        return self.run.schedule

    @property
    def node_groups(self) -> dict[str, tuple[NodeId, ...]]:
        return self.run.node_groups

    @property
    def pattern_groups(self) -> dict[str, list[int]]:
        """Pattern indices per group name, in first-appearance order."""
        groups: dict[str, list[int]] = {}
        for i, pattern in enumerate(self.dataset.patterns):
            groups.setdefault(pattern.group_name, []).append(i)
        return groups
