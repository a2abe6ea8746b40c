"""g-plus / g-minus update rules and their per-node, per-iteration schedule.

Resolution order for one side (up or down) of a node at an iteration:
active phase node override, base node override, active phase default,
base default.
"""

import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Literal

from neurashed.errors import InvalidConfig
from neurashed.graph.models import NodeId

RuleKind = Literal["multiplicative", "additive"]
Direction = Literal["up", "down"]


@dataclass(frozen=True)
class UpdateRule:
    kind: RuleKind
    value: float
    direction: Direction

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise InvalidConfig(f"{self.direction} rule value must be finite")
        match (self.kind, self.direction):
            case ("multiplicative", "up") if self.value <= 1:
                raise InvalidConfig(f"up factor must be > 1, got {self.value}")
            case ("multiplicative", "down") if not 0 < self.value <= 1:
                raise InvalidConfig(f"down factor must be in (0, 1], got {self.value}")
            case ("additive", "up") if self.value <= 0:
                raise InvalidConfig(f"up offset must be > 0, got {self.value}")
            case ("additive", "down") if self.value > 0:
                raise InvalidConfig(f"down offset must be <= 0, got {self.value}")

    @classmethod
    def multiplicative(cls, *, factor: float, direction: Direction) -> "UpdateRule":
        return cls(kind="multiplicative", value=factor, direction=direction)

    @classmethod
    def additive(cls, *, offset: float, direction: Direction) -> "UpdateRule":
        return cls(kind="additive", value=offset, direction=direction)

    def apply(self, x: float) -> float:
        if self.kind == "multiplicative":
            return x * self.value
        # additive decay is clamped so values stay non-negative
        return max(x + self.value, 0.0)


@dataclass(frozen=True)
class RulePair:
    up: UpdateRule
    down: UpdateRule


@dataclass(frozen=True)
class NodeRules:
    up: UpdateRule | None = None
    down: UpdateRule | None = None


@dataclass(frozen=True)
class ScheduleOverride:
    """Rules replacing the base schedule while active."""

    default_up: UpdateRule | None = None
    default_down: UpdateRule | None = None
    node_overrides: Mapping[NodeId, NodeRules] = field(default_factory=dict)


IterationHook = Callable[[int], ScheduleOverride | None]


@dataclass(frozen=True)
class Phase:
    start: int
    stop: int | None
    rules: ScheduleOverride

    def covers(self, iteration: int) -> bool:
        return self.start <= iteration and (self.stop is None or iteration < self.stop)


@dataclass(frozen=True)
class PhaseTable:
    """Iteration hook built from a list of phases; the first covering phase wins."""

    phases: tuple[Phase, ...]

    def __call__(self, iteration: int) -> ScheduleOverride | None:
        for phase in self.phases:
            if phase.covers(iteration):
                return phase.rules
        return None


@dataclass(frozen=True)
class UpdateSchedule:
    default_up: UpdateRule
    default_down: UpdateRule
    node_overrides: Mapping[NodeId, NodeRules] = field(default_factory=dict)
    iteration_hook: IterationHook | None = None

    def __post_init__(self) -> None:
        for rule, side in ((self.default_up, "up"), (self.default_down, "down")):
            if rule.direction != side:
                raise InvalidConfig(f"default_{side} is a {rule.direction} rule")

    def resolve(self, *, node: NodeId, iteration: int) -> RulePair:
        phase = self.iteration_hook(iteration) if self.iteration_hook else None
        candidates: list[NodeRules] = []
        if phase is not None and node in phase.node_overrides:
            candidates.append(phase.node_overrides[node])
        if node in self.node_overrides:
            candidates.append(self.node_overrides[node])
        if phase is not None:
            candidates.append(NodeRules(up=phase.default_up, down=phase.default_down))
        candidates.append(NodeRules(up=self.default_up, down=self.default_down))
        up = next(c.up for c in candidates if c.up is not None)
        down = next(c.down for c in candidates if c.down is not None)
        return RulePair(up=up, down=down)

    def rules_at(self, *, nodes: tuple[NodeId, ...], iteration: int) -> dict[NodeId, RulePair]:
        return {node: self.resolve(node=node, iteration=iteration) for node in nodes}

    def has_multiplicative_up(self, *, iterations: int) -> bool:
        """Whether any rule resolved in the first ``iterations`` steps is a multiplicative g-plus.

        Phase tables are read directly; any other hook is called once per iteration.
        """
        ups = [self.default_up] + [o.up for o in self.node_overrides.values() if o.up]
        hook = self.iteration_hook
        if isinstance(hook, PhaseTable):
            phases = [p.rules for p in hook.phases if p.start < iterations]
        elif hook is not None:
            phases = [o for o in map(hook, range(iterations)) if o is not None]
        else:
            phases = []
        for rules in phases:
            if rules.default_up:
                ups.append(rules.default_up)
            ups += [o.up for o in rules.node_overrides.values() if o.up]
        return any(rule.kind == "multiplicative" for rule in ups)
