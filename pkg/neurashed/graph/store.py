import logging
from collections import Counter
from pathlib import Path

from pydantic import BaseModel, ValidationError

from neurashed.errors import (
    DuplicateNodeId,
    EdgeSkipsLevel,
    EmptyDataset,
    InputNodeNotLevelOne,
    InvalidLevel,
    LabelOutOfRange,
    MalformedDocument,
    NoClassNodes,
    ThresholdOutOfRange,
    UnknownNodeId,
)
from neurashed.graph.models import Dataset, InputPattern, NeurashedGraph
from neurashed.graph.schema import (
    DatasetDocument,
    GraphDocument,
    NodeDocument,
    PatternDocument,
)

logger = logging.getLogger(__name__)

def load_document[T: BaseModel](*, text: str, model: type[T]) -> T:
    """Validate a JSON document; any shape error becomes ``MalformedDocument``."""
    try:
        return model.model_validate_json(text)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or "<root>"
        raise MalformedDocument(f"{where}: {first['msg']}")

def graph_from_document(doc: GraphDocument) -> NeurashedGraph:
    """Build a graph from a document without checking any invariant.

    Node ids must already be dense and unique.
    """
    by_id = sorted(doc.nodes, key=lambda n: n.id)
    return NeurashedGraph(
        num_levels=doc.levels,
        levels=tuple(n.level for n in by_id),
        edges=frozenset((lower, upper) for lower, upper in doc.edges),
        thresholds={n.id: n.threshold for n in by_id if n.threshold is not None},
        class_nodes=tuple(doc.class_nodes),
    )

def parse_graph_spec(text: str) -> NeurashedGraph:
    """Parse and check a graph document.

    Raises a ``GraphError`` subclass naming the first violated rule.
    """
    doc = load_document(text=text, model=GraphDocument)
    top = doc.levels
    if top < 2:
        raise InvalidLevel(f"levels must be at least 2, got {top}")

    counts = Counter(n.id for n in doc.nodes)
    dupes = sorted(i for i, c in counts.items() if c > 1)
    if dupes:
        raise DuplicateNodeId(f"node ids {dupes} appear more than once")
    ids = sorted(counts)
    if ids != list(range(len(ids))):
        raise MalformedDocument(f"node ids must be dense 0..{len(ids) - 1}")

    level = {n.id: n.level for n in doc.nodes}
    for node in doc.nodes:
        if not 1 <= node.level <= top:
            raise InvalidLevel(f"node {node.id} has level {node.level} outside 1..{top}")

    seen: set[tuple[int, int]] = set()
    indegree: Counter[int] = Counter()
    for lower, upper in doc.edges:
        if lower not in level or upper not in level:
            raise UnknownNodeId(f"edge [{lower}, {upper}] references unknown node")
        if (lower, upper) in seen:
            raise MalformedDocument(f"edge [{lower}, {upper}] listed twice")
        if level[upper] != level[lower] + 1:
            raise EdgeSkipsLevel(
                f"edge [{lower}, {upper}] goes from level {level[lower]} "
                f"to level {level[upper]}"
            )
        seen.add((lower, upper))
        indegree[upper] += 1

    for node in doc.nodes:
        _check_threshold(node=node, top=top, indegree=indegree[node.id])

    if len(doc.class_nodes) < 2:
        raise NoClassNodes(f"need at least 2 class nodes, got {len(doc.class_nodes)}")
    if len(set(doc.class_nodes)) != len(doc.class_nodes):
        raise MalformedDocument("class_nodes has duplicates")
    tops = {i for i, lvl in level.items() if lvl == top}
    if set(doc.class_nodes) != tops:
        raise MalformedDocument(
            f"class_nodes {doc.class_nodes} must be exactly the top-level nodes "
            f"{sorted(tops)}"
        )

    graph = graph_from_document(doc)
    logger.debug(
        f"Parsed graph: {graph.num_nodes} nodes, {len(graph.edges)} edges, "
        f"L={graph.num_levels}, K={graph.num_classes}"
    )
    return graph

def _check_threshold(*, node: NodeDocument, top: int, indegree: int) -> None:
    if 1 < node.level < top:
        if indegree < 1:
            raise ThresholdOutOfRange(f"middle node {node.id} has no dependents")
        if node.threshold is None:
            raise ThresholdOutOfRange(f"middle node {node.id} has no threshold")
        if not 1 <= node.threshold <= indegree:
            raise ThresholdOutOfRange(
                f"node {node.id} threshold {node.threshold} outside 1..{indegree}"
            )
    elif node.threshold is not None:
        raise ThresholdOutOfRange(
            f"node {node.id} on level {node.level} must not carry a threshold"
        )

def graph_to_document(graph: NeurashedGraph) -> GraphDocument:
    return GraphDocument(
        levels=graph.num_levels,
        nodes=[
            NodeDocument(id=node, level=lvl, threshold=graph.thresholds.get(node))
            for node, lvl in enumerate(graph.levels)
        ],
        edges=sorted(graph.edges),
        class_nodes=list(graph.class_nodes),
    )

def serialize_graph(graph: NeurashedGraph) -> str:
    return graph_to_document(graph).model_dump_json(indent=2, exclude_none=True)

def read_document(*, path: Path) -> str:
    """Read a UTF-8 document; undecodable bytes are a malformed document."""
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedDocument(f"{path}: not UTF-8 ({exc.reason})")

def load_graph(*, graph_file: Path) -> NeurashedGraph:
    return parse_graph_spec(read_document(path=graph_file))

def save_graph(*, graph_file: Path, graph: NeurashedGraph) -> None:
    graph_file.write_text(serialize_graph(graph), encoding="utf-8")

def parse_dataset(text: str) -> Dataset:
    """Parse a dataset document. Graph-dependent checks are in ``validate_dataset``."""
    doc = load_document(text=text, model=DatasetDocument)
    if not doc.patterns:
        raise EmptyDataset("dataset has no patterns")
    for i, pattern in enumerate(doc.patterns):
        if not pattern.fire:
            raise MalformedDocument(f"patterns.{i}: firing set is empty")
    return Dataset(patterns=tuple(_pattern(p) for p in doc.patterns))

def _pattern(doc: PatternDocument) -> InputPattern:
    return InputPattern(
        firing_first_level=frozenset(doc.fire),
        label=doc.label,
        weight=doc.weight,
        group=doc.group,
    )

def load_dataset(*, dataset_file: Path) -> Dataset:
    return parse_dataset(read_document(path=dataset_file))

def check_pattern(
    *, graph: NeurashedGraph, pattern: InputPattern, check_label: bool = True
) -> None:
    """Raise if ``pattern`` cannot be fed to ``graph``."""
    if not pattern.firing_first_level:
        raise MalformedDocument("input firing set is empty")
    for node in sorted(pattern.firing_first_level):
        if not 0 <= node < graph.num_nodes or graph.levels[node] != 1:
            raise InputNodeNotLevelOne(f"input node {node} is not a level-1 node")
    if check_label and not 0 <= pattern.label < graph.num_classes:
        raise LabelOutOfRange(
            f"label {pattern.label} outside 0..{graph.num_classes - 1}"
        )

def validate_dataset(*, graph: NeurashedGraph, dataset: Dataset) -> None:
    if not dataset.patterns:
        raise EmptyDataset("dataset has no patterns")
    for pattern in dataset.patterns:
        check_pattern(graph=graph, pattern=pattern)
