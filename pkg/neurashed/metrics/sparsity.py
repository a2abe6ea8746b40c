import math
from collections.abc import Mapping, Sequence

import numpy as np
from scipy.stats import entropy

from neurashed.dynamics.models import ModelState
from neurashed.errors import EmptyGroup, UnknownNodeId
from neurashed.graph.models import NodeId


def normalized_entropy(values: Sequence[float]) -> float:
    """Shannon entropy of ``values`` after normalisation, divided by log2 of their count.

    A single value has entropy 0. An all-zero vector is treated as uniform
    and scores 1.
    """
    if len(values) == 0:
        raise EmptyGroup("cannot take the entropy of an empty group")
    if len(values) == 1:
        return 0.0
    total = float(np.sum(values))
    if total == 0:
        return 1.0
    return float(entropy(np.asarray(values, dtype=np.float64), base=2) / math.log2(len(values)))


def sparsity_profile(
    *, state: ModelState, node_groups: Mapping[str, Sequence[NodeId]]
) -> dict[str, float]:
    """Normalized entropy of the amplification factors within each group."""
    profile: dict[str, float] = {}
    for name, nodes in node_groups.items():
        if not nodes:
            raise EmptyGroup(f"node group {name!r} is empty")
        missing = [n for n in nodes if n not in state.lam]
        if missing:
            raise UnknownNodeId(f"node group {name!r}: nodes {missing} have no lambda")
        profile[name] = normalized_entropy([state.lam[n] for n in nodes])
    return profile
