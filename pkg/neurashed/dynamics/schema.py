from typing import Annotated, Literal, Self

from pydantic import BaseModel, ConfigDict, Field, StrictInt, model_validator


class _Document(BaseModel):
    model_config = ConfigDict(extra="forbid")


class MultiplicativeRuleDocument(_Document):
    kind: Literal["multiplicative"]
    factor: float | None = None
    base: float | None = None
    exponent: float | None = None

    @model_validator(mode="after")
    def _factor_or_power(self) -> Self:
        as_power = self.base is not None and self.exponent is not None
        partial_power = (self.base is None) != (self.exponent is None)
        if partial_power or (self.factor is None) == (not as_power):
            raise ValueError("give either 'factor' or both 'base' and 'exponent'")
        return self

    @property
    def resolved_factor(self) -> float:
        if self.factor is not None:
            return self.factor
        assert self.base is not None and self.exponent is not None
        return self.base**self.exponent


class AdditiveRuleDocument(_Document):
    kind: Literal["additive"]
    offset: float


RuleDocument = Annotated[
    MultiplicativeRuleDocument | AdditiveRuleDocument, Field(discriminator="kind")
]


class NodeRulesDocument(_Document):
    up: RuleDocument | None = None
    down: RuleDocument | None = None


class PhaseDocument(_Document):
    start: StrictInt = Field(ge=0)
    stop: StrictInt | None = None
    default_up: RuleDocument | None = None
    default_down: RuleDocument | None = None
    node_overrides: dict[int, NodeRulesDocument] = {}


class RulesDocument(_Document):
    default_up: RuleDocument
    default_down: RuleDocument
    node_overrides: dict[int, NodeRulesDocument] = {}
    phases: list[PhaseDocument] = []


class InitDocument(_Document):
    kind: Literal["zeros", "constant", "uniform"]
    value: float = 0.0
    lo: float = 0.0
    hi: float = 0.01


class ConfigDocument(_Document):
    batch_size: StrictInt = 1
    iterations: StrictInt = 1000
    seed: StrictInt = 0
    init: InitDocument = InitDocument(kind="uniform")
    snapshot_every: StrictInt = 50
    rules: RulesDocument
    probe_rules: RulesDocument | None = None
    node_groups: dict[str, list[StrictInt]] = {}
