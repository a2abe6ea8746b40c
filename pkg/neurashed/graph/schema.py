"""On-disk JSON documents for graphs and datasets.

Only the shape is checked here (types, required keys, no unknown keys).
Structural rules live in ``store`` and ``validate``.
"""

from pydantic import BaseModel, ConfigDict, Field, StrictInt


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid")


class NodeDocument(_Document):
    id: StrictInt
    level: StrictInt
    threshold: StrictInt | None = None


class GraphDocument(_Document):
    levels: StrictInt
    nodes: list[NodeDocument]
    edges: list[tuple[StrictInt, StrictInt]]
    class_nodes: list[StrictInt]


class PatternDocument(_Document):
    fire: list[StrictInt]
    label: StrictInt
    weight: float = Field(default=1.0, gt=0, allow_inf_nan=False)
    group: str | None = None


class DatasetDocument(_Document):
    patterns: list[PatternDocument]
