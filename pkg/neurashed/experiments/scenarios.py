import logging
from pathlib import Path

from neurashed.config import Settings
from neurashed.dynamics.store import check_run_config, load_config
from neurashed.errors import UnknownScenario
from neurashed.experiments.models import Expectations, Scenario
from neurashed.graph.store import (
    load_dataset,
    load_document,
    load_graph,
    read_document,
    validate_dataset,
)

logger = logging.getLogger(__name__)

BUNDLE_FILES = ("graph.json", "dataset.json", "config.json", "expectations.json")
CUSTOM_PREFIX = "custom:"


def list_scenarios(*, settings: Settings | None = None) -> list[str]:
    """Names of the built-in scenario bundles, sorted."""
    root = (settings or Settings()).scenarios_dir
    if not root.is_dir():
        return []
    return sorted(p.name for p in root.iterdir() if (p / "graph.json").is_file())


def resolve_scenario_dir(*, name: str, settings: Settings | None = None) -> Path:
    settings = settings or Settings()
    if name.startswith(CUSTOM_PREFIX):
        candidate = Path(name.removeprefix(CUSTOM_PREFIX))
    elif name in list_scenarios(settings=settings):
        candidate = settings.scenario_dir(name=name)
    else:
        candidate = Path(name)
    if not (candidate / "graph.json").is_file():
        known = ", ".join(list_scenarios(settings=settings)) or "none"
        raise UnknownScenario(f"unknown scenario {name!r} (built-in: {known})")
    return candidate


def load_bundle(*, directory: Path, name: str | None = None) -> Scenario:
    """Load and cross-check every file of a scenario bundle."""
    graph = load_graph(graph_file=directory / "graph.json")
    dataset = load_dataset(dataset_file=directory / "dataset.json")
    validate_dataset(graph=graph, dataset=dataset)
    run = load_config(config_file=directory / "config.json")
    check_run_config(graph=graph, run=run)
    expectations_file = directory / "expectations.json"
    expectations = (
        load_document(text=read_document(path=expectations_file), model=Expectations)
        if expectations_file.is_file()
        else Expectations()
    )
    return Scenario(
        name=name or directory.name,
        graph=graph,
        dataset=dataset,
        run=run,
        expectations=expectations,
        source=directory,
    )


def build_scenario(name: str, *, settings: Settings | None = None) -> Scenario:
    """Load a built-in scenario, a ``custom:<path>`` bundle or a bundle directory."""
    directory = resolve_scenario_dir(name=name, settings=settings)
    scenario = load_bundle(directory=directory, name=name)
    logger.info(f"Loaded scenario {name} from {directory}")
    return scenario


def bundle_files(scenario: Scenario) -> list[Path]:
    if scenario.source is None:
        return []
    return [scenario.source / f for f in BUNDLE_FILES if (scenario.source / f).is_file()]
