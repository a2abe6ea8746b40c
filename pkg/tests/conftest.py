import json

import pytest

from neurashed.config import Settings
from neurashed.dynamics.models import ModelState
from neurashed.dynamics.rules import UpdateRule, UpdateSchedule
from neurashed.experiments.scenarios import build_scenario
from neurashed.graph.models import InputPattern
from neurashed.graph.store import parse_graph_spec

TINY_GRAPH = {
    "levels": 3,
    "nodes": [
        {"id": 0, "level": 1},
        {"id": 1, "level": 1},
        {"id": 2, "level": 2, "threshold": 1},
        {"id": 3, "level": 3},
        {"id": 4, "level": 3},
    ],
    "edges": [[0, 2], [1, 2], [2, 3], [2, 4]],
    "class_nodes": [3, 4],
}


@pytest.fixture
def tiny_graph():
    return parse_graph_spec(json.dumps(TINY_GRAPH))


@pytest.fixture
def tiny_state():
    return ModelState(lam={0: 0.5, 1: 1.5, 2: 2.0}, eta={(2, 3): 1.0, (2, 4): 0.5})


@pytest.fixture
def both_inputs():
    return InputPattern(firing_first_level=frozenset({0, 1}), label=0)


@pytest.fixture
def bottleneck_schedule():
    return UpdateSchedule(
        default_up=UpdateRule.multiplicative(factor=1.022**2.75, direction="up"),
        default_down=UpdateRule.multiplicative(factor=1.022**-0.25, direction="down"),
    )


@pytest.fixture
def settings(monkeypatch):
    for name in ("SIGMA", "MC_SAMPLES", "EVAL_EVERY", "WORKERS", "LOG_LEVEL", "SCENARIOS_DIR"):
        monkeypatch.delenv(f"NEURASHED_{name}", raising=False)
    return Settings(_env_file=None)


@pytest.fixture(scope="session")
def fig2():
    return build_scenario("fig2-three-class")


@pytest.fixture(scope="session")
def fig3():
    return build_scenario("fig3-bottleneck")


@pytest.fixture(scope="session")
def fig4():
    return build_scenario("fig4-batch")
