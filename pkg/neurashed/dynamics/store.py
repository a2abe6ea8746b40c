import logging
from pathlib import Path

from neurashed.dynamics.models import (
    InitSpec,
    RunConfig,
    TrainConfig,
    Trajectory,
    TrajectoryRows,
)
from neurashed.dynamics.rules import (
    Direction,
    NodeRules,
    Phase,
    PhaseTable,
    ScheduleOverride,
    UpdateRule,
    UpdateSchedule,
)
from neurashed.dynamics.schema import (
    ConfigDocument,
    NodeRulesDocument,
    RuleDocument,
    RulesDocument,
)
from neurashed.errors import EmptyGroup, InvalidConfig, UnknownNodeId
from neurashed.graph.models import NeurashedGraph, NodeId
from neurashed.graph.store import load_document, read_document

logger = logging.getLogger(__name__)


def _rule(doc: RuleDocument, *, direction: Direction) -> UpdateRule:
    if doc.kind == "multiplicative":
        return UpdateRule.multiplicative(factor=doc.resolved_factor, direction=direction)
    return UpdateRule.additive(offset=doc.offset, direction=direction)


def _optional_rule(doc: RuleDocument | None, *, direction: Direction) -> UpdateRule | None:
    return None if doc is None else _rule(doc, direction=direction)


def _overrides(docs: dict[int, NodeRulesDocument]) -> dict[NodeId, NodeRules]:
    return {
        node: NodeRules(
            up=_optional_rule(doc.up, direction="up"),
            down=_optional_rule(doc.down, direction="down"),
        )
        for node, doc in sorted(docs.items())
    }


def schedule_from_document(doc: RulesDocument) -> UpdateSchedule:
    phases = tuple(
        Phase(
            start=p.start,
            stop=p.stop,
            rules=ScheduleOverride(
                default_up=_optional_rule(p.default_up, direction="up"),
                default_down=_optional_rule(p.default_down, direction="down"),
                node_overrides=_overrides(p.node_overrides),
            ),
        )
        for p in doc.phases
    )
    for phase in phases:
        if phase.stop is not None and phase.stop <= phase.start:
            raise InvalidConfig(f"phase [{phase.start}, {phase.stop}) is empty")
    return UpdateSchedule(
        default_up=_rule(doc.default_up, direction="up"),
        default_down=_rule(doc.default_down, direction="down"),
        node_overrides=_overrides(doc.node_overrides),
        iteration_hook=PhaseTable(phases=phases) if phases else None,
    )


def parse_config(text: str) -> RunConfig:
    """Parse a train config document into a ``RunConfig``.

    ``probe_rules`` defaults to ``rules``.
    """
    doc = load_document(text=text, model=ConfigDocument)

    config = TrainConfig(
        batch_size=doc.batch_size,
        iterations=doc.iterations,
        seed=doc.seed,
        init=InitSpec(
            kind=doc.init.kind, value=doc.init.value, lo=doc.init.lo, hi=doc.init.hi
        ),
        snapshot_every=doc.snapshot_every,
    )
    schedule = schedule_from_document(doc.rules)
    probe = schedule_from_document(doc.probe_rules) if doc.probe_rules else schedule
    return RunConfig(
        config=config,
        schedule=schedule,
        probe_schedule=probe,
        node_groups={name: tuple(ids) for name, ids in doc.node_groups.items()},
    )


def load_config(*, config_file: Path) -> RunConfig:
    return parse_config(read_document(path=config_file))


def check_run_config(*, graph: NeurashedGraph, run: RunConfig) -> None:
    """Check that every node a config names carries a lambda in ``graph``."""
    learnable = set(graph.learnable_nodes)
    named: list[tuple[str, NodeId]] = []
    for schedule, label in ((run.schedule, "rules"), (run.probe_schedule, "probe_rules")):
        named += [(f"{label}.node_overrides", n) for n in schedule.node_overrides]
        if isinstance(schedule.iteration_hook, PhaseTable):
            for phase in schedule.iteration_hook.phases:
                named += [(f"{label}.phases", n) for n in phase.rules.node_overrides]
    for name, ids in run.node_groups.items():
        if not ids:
            raise EmptyGroup(f"node group {name!r} is empty")
        named += [(f"node_groups.{name}", n) for n in ids]
    for where, node in named:
        if node not in learnable:
            raise UnknownNodeId(f"{where}: node {node} is not a non-top node of the graph")


def trajectory_rows(trajectory: Trajectory) -> TrajectoryRows:
    """Snapshot rows (iteration, kind, id, value), lambdas then etas per snapshot."""
    rows: TrajectoryRows = []
    for snap in trajectory.snapshots:
        for node, value in sorted(snap.state.lam.items()):
            rows.append((snap.iteration, "lambda", str(node), value))
        for (lower, upper), value in sorted(snap.state.eta.items()):
            rows.append((snap.iteration, "eta", f"{lower}->{upper}", value))
    return rows
