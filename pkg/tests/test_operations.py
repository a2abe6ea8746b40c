import json
import os
import shutil

import pytest

from neurashed.config import lock_file_for
from neurashed.errors import (
    EdgeSkipsLevel,
    LabelOutOfRange,
    MalformedDocument,
    NonFiniteLogit,
    OutputDirNotEmpty,
    OutputLocked,
)
from neurashed.operations import (
    Overrides,
    apply_overrides,
    check_scenario,
    compare_batch,
    elasticity,
    format_scenario_list,
    information_bottleneck,
    load_inputs,
    train,
    validate_files,
)
from neurashed.reporting.manifest import load_manifest, verify_manifest
from neurashed.reporting.tables import read_csv


def _inputs(settings, name, **overrides):
    inputs = load_inputs(scenario=name, graph_file=None, dataset_file=None, config_file=None, settings=settings)
    return type(inputs)(scenario=apply_overrides(inputs.scenario, Overrides(**overrides)), files=inputs.files)


def _bundle_copy(tmp_path, settings, name):
    target = tmp_path / "bundle"
    shutil.copytree(settings.scenario_dir(name=name), target)
    return target


def test_apply_overrides_keeps_unset(fig2):
    changed = apply_overrides(fig2, Overrides(seed=9, iterations=5))
    assert (changed.config.seed, changed.config.iterations) == (9, 5)
    assert changed.config.batch_size == fig2.config.batch_size
    assert changed.config.init == fig2.config.init
    assert fig2.config.seed == 1


def test_load_inputs_from_files(tmp_path, settings):
    bundle = _bundle_copy(tmp_path, settings, "fig4-batch")
    inputs = load_inputs(
        scenario=None,
        graph_file=bundle / "graph.json",
        dataset_file=bundle / "dataset.json",
        config_file=bundle / "config.json",
        settings=settings,
    )
    assert inputs.scenario.name == "custom"
    assert len(inputs.files) == 3
    assert len(inputs.scenario.dataset) == 8


def test_load_inputs_incomplete(tmp_path, settings):
    with pytest.raises(MalformedDocument, match="--scenario"):
        load_inputs(
            scenario=None, graph_file=tmp_path / "g.json", dataset_file=None, config_file=None, settings=settings
        )


def test_validate_scenario_and_partial_files(tmp_path, settings):
    bundle = _bundle_copy(tmp_path, settings, "fig2-three-class")
    assert validate_files(
        scenario="fig2-three-class", graph_file=None, dataset_file=None, config_file=None, settings=settings
    ) == "OK"
    assert validate_files(
        scenario=None, graph_file=None, dataset_file=None, config_file=bundle / "config.json", settings=settings
    ) == "OK"
    assert validate_files(
        scenario=None,
        graph_file=bundle / "graph.json",
        dataset_file=bundle / "dataset.json",
        config_file=None,
        settings=settings,
    ) == "OK"


def test_validate_nothing_given(settings):
    with pytest.raises(MalformedDocument):
        validate_files(scenario=None, graph_file=None, dataset_file=None, config_file=None, settings=settings)


def test_validate_reports_graph_error(tmp_path, settings):
    graph = tmp_path / "graph.json"
    graph.write_text(
        json.dumps(
            {
                "levels": 3,
                "nodes": [{"id": 0, "level": 1}, {"id": 1, "level": 3}, {"id": 2, "level": 3}],
                "edges": [[0, 1]],
                "class_nodes": [1, 2],
            }
        )
    )
    with pytest.raises(EdgeSkipsLevel):
        validate_files(scenario=None, graph_file=graph, dataset_file=None, config_file=None, settings=settings)


def test_validate_dataset_against_graph(tmp_path, settings):
    bundle = _bundle_copy(tmp_path, settings, "fig4-batch")
    (bundle / "dataset.json").write_text(json.dumps({"patterns": [{"fire": [0], "label": 5}]}))
    with pytest.raises(LabelOutOfRange):
        validate_files(
            scenario=None,
            graph_file=bundle / "graph.json",
            dataset_file=bundle / "dataset.json",
            config_file=None,
            settings=settings,
        )


def test_train_writes_outputs(tmp_path, settings):
    out_dir = tmp_path / "out"
    inputs = _inputs(settings, "fig2-three-class", iterations=20, snapshot_every=10)
    summary = train(inputs=inputs, out_dir=out_dir, force=False, command=["train"])
    assert "snapshots.csv" in summary
    graph = inputs.scenario.graph
    snapshots = read_csv(out_dir / "snapshots.csv")
    assert snapshots.columns == ("iteration", "kind", "id", "value")
    assert len(snapshots) == 3 * (len(graph.learnable_nodes) + len(graph.eta_edges))
    assert sorted({int(i) for i in snapshots.column("iteration")}) == [0, 10, 20]
    predictions = read_csv(out_dir / "predictions.csv")
    assert predictions.column("group") == ["1a", "1b", "class-2", "class-3"]
    manifest = load_manifest(out_dir=out_dir)
    assert manifest.seeds == [1]
    assert manifest.command == ["train"]
    assert len(manifest.input_hashes) == 4
    assert verify_manifest(out_dir=out_dir) == []
    assert not lock_file_for(out_dir=out_dir).exists()


def test_train_refuses_non_empty_out(tmp_path, settings):
    inputs = _inputs(settings, "fig2-three-class", iterations=1)
    train(inputs=inputs, out_dir=tmp_path / "out", force=False, command=[])
    with pytest.raises(OutputDirNotEmpty):
        train(inputs=inputs, out_dir=tmp_path / "out", force=False, command=[])
    train(inputs=inputs, out_dir=tmp_path / "out", force=True, command=[])


def test_train_refuses_locked_out(tmp_path, settings):
    out_dir = tmp_path / "out"
    lock_file_for(out_dir=out_dir).write_text(str(os.getpid()))
    with pytest.raises(OutputLocked):
        train(inputs=_inputs(settings, "fig2-three-class", iterations=1), out_dir=out_dir, force=False, command=[])


def _fail_predictions(**_kwargs):
    raise NonFiniteLogit("logits must be finite, got [inf, 0.0, 0.0]")


def test_failed_train_leaves_out_dir_empty(tmp_path, settings, monkeypatch):
    out_dir = tmp_path / "out"
    inputs = _inputs(settings, "fig2-three-class", iterations=5)
    monkeypatch.setattr("neurashed.operations.prediction_rows", _fail_predictions)
    with pytest.raises(NonFiniteLogit):
        train(inputs=inputs, out_dir=out_dir, force=False, command=["train"])
    assert list(out_dir.iterdir()) == []
    assert [p.name for p in tmp_path.iterdir()] == ["out"]

    monkeypatch.undo()
    train(inputs=inputs, out_dir=out_dir, force=False, command=["train"])
    assert verify_manifest(out_dir=out_dir) == []


def test_failed_forced_train_keeps_previous_run(tmp_path, settings, monkeypatch):
    out_dir = tmp_path / "out"
    inputs = _inputs(settings, "fig2-three-class", iterations=5)
    train(inputs=inputs, out_dir=out_dir, force=False, command=["train"])
    before = (out_dir / "snapshots.csv").read_text()
    monkeypatch.setattr("neurashed.operations.prediction_rows", _fail_predictions)
    with pytest.raises(NonFiniteLogit):
        train(inputs=_inputs(settings, "fig2-three-class", iterations=9), out_dir=out_dir, force=True, command=[])
    assert (out_dir / "snapshots.csv").read_text() == before
    assert verify_manifest(out_dir=out_dir) == []


def test_information_bottleneck_outputs(tmp_path, settings):
    out_dir = tmp_path / "out"
    inputs = _inputs(settings, "fig3-bottleneck", iterations=20)
    information_bottleneck(
        inputs=inputs, out_dir=out_dir, force=False, command=[], eval_every=10, sigma=0.05, mc_samples=100
    )
    assert sorted(p.name for p in out_dir.iterdir()) == ["manifest.json", "mi_curve.csv", "mi_curve.svg"]
    assert len(read_csv(out_dir / "mi_curve.csv")) == 3 * 2
    assert (out_dir / "mi_curve.svg").read_text().count("<polyline") == 4


def test_elasticity_outputs(tmp_path, settings):
    out_dir = tmp_path / "out"
    elasticity(inputs=_inputs(settings, "fig2-three-class", iterations=30), out_dir=out_dir, force=False, command=[])
    assert len(read_csv(out_dir / "elasticity.csv")) == 16
    assert len(read_csv(out_dir / "elasticity_medians.csv")) == 16
    assert (out_dir / "elasticity.svg").is_file()


def test_compare_batch_outputs(tmp_path, settings):
    out_dir = tmp_path / "out"
    compare_batch(
        inputs=_inputs(settings, "fig4-batch", iterations=20),
        out_dir=out_dir,
        force=False,
        command=[],
        small_batch=1,
        large_batch=8,
        seeds=[1, 2],
        workers=2,
    )
    assert len(read_csv(out_dir / "sparsity.csv")) == 2 * 2 * 3
    assert read_csv(out_dir / "sparsity_gap.csv").column("group") == ["level-1", "level-2", "level-3"]
    assert load_manifest(out_dir=out_dir).seeds == [1, 2]


def test_format_scenario_list(settings):
    lines = format_scenario_list(settings=settings).splitlines()
    assert [line.split(":")[0] for line in lines] == ["fig2-three-class", "fig3-bottleneck", "fig4-batch"]


def test_check_scenario_pathways_only(tmp_path, settings):
    bundle = _bundle_copy(tmp_path, settings, "fig4-batch")
    (bundle / "expectations.json").write_text(json.dumps({"pathways": {"0": [0, 1, 2, 5, 6, 9, 10, 13]}}))
    report, passed = check_scenario(name=str(bundle), settings=settings)
    assert passed
    assert report.splitlines()[-1] == "1/1 expectations passed"

    (bundle / "expectations.json").write_text(json.dumps({"pathways": {"0": [0, 13]}}))
    report, passed = check_scenario(name=str(bundle), settings=settings)
    assert not passed
    assert report.startswith("FAIL pathway[0]")
