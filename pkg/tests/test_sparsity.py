import math

import pytest

from neurashed.dynamics.models import ModelState
from neurashed.errors import EmptyGroup, UnknownNodeId
from neurashed.metrics.sparsity import normalized_entropy, sparsity_profile


def _state(values):
    return ModelState(lam=dict(enumerate(values)), eta={})


def test_equal_values_maximal():
    assert sparsity_profile(state=_state([0.3, 0.3, 0.3, 0.3]), node_groups={"g": [0, 1, 2, 3]}) == {
        "g": pytest.approx(1.0)
    }


def test_one_hot_minimal():
    assert sparsity_profile(state=_state([0.0, 5.0, 0.0]), node_groups={"g": [0, 1, 2]})["g"] == 0.0


def test_two_one_one():
    profile = sparsity_profile(state=_state([2.0, 1.0, 1.0]), node_groups={"g": [0, 1, 2]})
    assert profile["g"] == pytest.approx(1.5 / math.log2(3), abs=1e-5)
    assert profile["g"] == pytest.approx(0.946395, abs=1e-5)


def test_all_zero_group_counts_as_uniform():
    assert normalized_entropy([0.0, 0.0]) == 1.0


def test_singleton_group():
    assert normalized_entropy([4.2]) == 0.0


def test_scale_invariance():
    values = [0.2, 1.7, 0.9]
    scaled = [v * 1e6 for v in values]
    assert normalized_entropy(values) == pytest.approx(normalized_entropy(scaled), rel=1e-12)


def test_several_groups():
    profile = sparsity_profile(state=_state([1.0, 1.0, 1.0, 0.0]), node_groups={"a": [0, 1], "b": [2, 3]})
    assert profile == {"a": pytest.approx(1.0), "b": 0.0}


def test_empty_group():
    with pytest.raises(EmptyGroup):
        sparsity_profile(state=_state([1.0]), node_groups={"g": []})


def test_unknown_node():
    with pytest.raises(UnknownNodeId):
        sparsity_profile(state=_state([1.0]), node_groups={"g": [0, 9]})
