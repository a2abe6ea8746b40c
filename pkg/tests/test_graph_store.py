import json

import pytest

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
from neurashed.graph.models import NeurashedGraph
from neurashed.graph.store import (
    load_graph,
    parse_dataset,
    parse_graph_spec,
    save_graph,
    serialize_graph,
    validate_dataset,
)
from neurashed.graph.validate import validate_graph
from tests.conftest import TINY_GRAPH


def _doc(**changes):
    doc = json.loads(json.dumps(TINY_GRAPH))
    doc.update(changes)
    return json.dumps(doc)


def test_parse_minimal_graph():
    graph = parse_graph_spec(json.dumps(TINY_GRAPH))
    assert graph.num_levels == 3
    assert graph.num_classes == 2
    assert graph.class_nodes == (3, 4)
    assert graph.thresholds == {2: 1}
    assert graph.dependents[2] == (0, 1)


def test_graph_thresholds_read_only(tiny_graph):
    source = {2: 1}
    graph = NeurashedGraph(
        num_levels=3,
        levels=tiny_graph.levels,
        edges=tiny_graph.edges,
        thresholds=source,
        class_nodes=tiny_graph.class_nodes,
    )
    source[2] = 2
    assert graph.thresholds[2] == 1
    with pytest.raises(TypeError):
        graph.thresholds[2] = 2  # type: ignore[index]
    assert graph == tiny_graph
    assert hash(graph) == hash(tiny_graph)


def test_parse_edge_skipping_level():
    doc = _doc(edges=[[0, 2], [1, 2], [2, 3], [2, 4], [0, 3]])
    with pytest.raises(EdgeSkipsLevel):
        parse_graph_spec(doc)


def test_parse_invalid_json():
    with pytest.raises(MalformedDocument):
        parse_graph_spec("not json")


def test_parse_unknown_field_rejected():
    with pytest.raises(MalformedDocument):
        parse_graph_spec(_doc(comment="hello"))


def test_parse_missing_field():
    doc = dict(TINY_GRAPH)
    del doc["edges"]
    with pytest.raises(MalformedDocument):
        parse_graph_spec(json.dumps(doc))


def test_parse_duplicate_node_id():
    nodes = [*TINY_GRAPH["nodes"], {"id": 1, "level": 1}]
    with pytest.raises(DuplicateNodeId):
        parse_graph_spec(_doc(nodes=nodes))


def test_parse_sparse_ids():
    nodes = [dict(n) for n in TINY_GRAPH["nodes"]]
    nodes[0]["id"] = 7
    with pytest.raises(MalformedDocument):
        parse_graph_spec(_doc(nodes=nodes))


def test_parse_threshold_above_indegree():
    nodes = [dict(n) for n in TINY_GRAPH["nodes"]]
    nodes[2]["threshold"] = 3
    with pytest.raises(ThresholdOutOfRange):
        parse_graph_spec(_doc(nodes=nodes))


def test_parse_missing_middle_threshold():
    nodes = [dict(n) for n in TINY_GRAPH["nodes"]]
    del nodes[2]["threshold"]
    with pytest.raises(ThresholdOutOfRange):
        parse_graph_spec(_doc(nodes=nodes))


def test_parse_threshold_on_class_node():
    nodes = [dict(n) for n in TINY_GRAPH["nodes"]]
    nodes[3]["threshold"] = 1
    with pytest.raises(ThresholdOutOfRange):
        parse_graph_spec(_doc(nodes=nodes))


def test_parse_single_class_node():
    nodes = TINY_GRAPH["nodes"][:4]
    with pytest.raises(NoClassNodes):
        parse_graph_spec(_doc(nodes=nodes, edges=[[0, 2], [1, 2], [2, 3]], class_nodes=[3]))


def test_parse_class_nodes_not_matching_top_level():
    with pytest.raises(MalformedDocument):
        parse_graph_spec(_doc(class_nodes=[3, 2]))


def test_parse_edge_to_unknown_node():
    with pytest.raises(UnknownNodeId):
        parse_graph_spec(_doc(edges=[[0, 2], [1, 2], [2, 3], [2, 4], [2, 9]]))


def test_parse_single_level():
    with pytest.raises(InvalidLevel):
        parse_graph_spec(_doc(levels=1))


def test_fig3_graph_thresholds(fig3):
    graph = fig3.graph
    level2 = graph.nodes_by_level[2]
    assert len(graph.nodes_by_level[1]) == 13
    assert len(level2) == 6
    assert graph.num_classes == 2
    assert [graph.thresholds[n] for n in level2] == [1, 2, 1, 1, 2, 1]
    assert validate_graph(graph) == []


def test_serialize_round_trip(fig2, fig3, fig4, tiny_graph):
    for graph in (fig2.graph, fig3.graph, fig4.graph, tiny_graph):
        assert parse_graph_spec(serialize_graph(graph)) == graph


def test_save_and_load_graph(tmp_path, tiny_graph):
    f = tmp_path / "graph.json"
    save_graph(graph_file=f, graph=tiny_graph)
    assert load_graph(graph_file=f) == tiny_graph


def test_load_graph_not_utf8(tmp_path):
    f = tmp_path / "graph.json"
    f.write_bytes(b"\xff\xfe{")
    with pytest.raises(MalformedDocument):
        load_graph(graph_file=f)


def test_parse_dataset_defaults():
    dataset = parse_dataset('{"patterns": [{"fire": [0, 1], "label": 1}]}')
    pattern = dataset.patterns[0]
    assert pattern.firing_first_level == frozenset({0, 1})
    assert pattern.weight == 1.0
    assert pattern.group_name == "class-1"


def test_parse_dataset_rejects_bad_weight():
    with pytest.raises(MalformedDocument):
        parse_dataset('{"patterns": [{"fire": [0], "label": 0, "weight": 0}]}')


def test_parse_dataset_empty():
    with pytest.raises(EmptyDataset):
        parse_dataset('{"patterns": []}')


def test_parse_dataset_empty_firing_set():
    with pytest.raises(MalformedDocument):
        parse_dataset('{"patterns": [{"fire": [], "label": 0}]}')


def test_validate_dataset_errors(tiny_graph):
    with pytest.raises(InputNodeNotLevelOne):
        validate_dataset(
            graph=tiny_graph, dataset=parse_dataset('{"patterns": [{"fire": [2], "label": 0}]}')
        )
    with pytest.raises(LabelOutOfRange):
        validate_dataset(
            graph=tiny_graph, dataset=parse_dataset('{"patterns": [{"fire": [0], "label": 2}]}')
        )
