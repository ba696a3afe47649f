"""Partition quality: locality of edges and load balance."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np


@dataclass
class MetricsReport:
    local_edges: float
    edge_cuts: float
    max_load: int
    expected_load: float
    max_normalized_load: float
    per_partition_loads: list
    balance_ok: bool

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**{name: d[name] for name in cls.__dataclass_fields__})


def _labels(state):
    return state.labels if hasattr(state, "labels") else np.asarray(state)


def _local_edge_count(g, labels):
    e = g.edges()
    return int(np.count_nonzero(labels[e[:, 0]] == labels[e[:, 1]]))


def local_edges(g, state):
    """Fraction of directed edges whose endpoints share a partition.

    ``state`` is a :class:`PartitionState` or a plain label array.
    """
    if g.num_edges == 0:
        raise ValueError("local edges undefined for a graph without edges")
    return _local_edge_count(g, _labels(state)) / g.num_edges


def edge_cuts(g, state):
    # complement in floating point so the two fractions sum to exactly 1
    return 1.0 - local_edges(g, state)


def max_normalized_load(g, state):
    """Heaviest partition load over the mean partition load."""
    loads = np.asarray(state.loads)
    expected = loads.sum() / state.k
    if expected == 0:
        return 1.0
    return float(loads.max() / expected)


def balance_bounds(total_load, k, epsilon):
    """Lower and upper admissible partition load.

    The lower bound ``T/k * (1 - (1 + eps) * (k - 1))`` is negative, hence
    vacuous, once ``k > 1`` and ``eps`` is not tiny.
    """
    expected = total_load / k
    return expected * (1.0 - (1.0 + epsilon) * (k - 1)), expected * (1.0 + epsilon)


def balance_check(g, state, epsilon=None):
    eps = state.epsilon if epsilon is None else epsilon
    loads = np.asarray(state.loads)
    lower, upper = balance_bounds(loads.sum(), state.k, eps)
    return bool(np.all((lower <= loads) & (loads <= upper)))


def evaluate(g, state, epsilon=None):
    loads = np.asarray(state.loads)
    local = local_edges(g, state)
    return MetricsReport(
        local_edges=local,
        edge_cuts=1.0 - local,
        max_load=int(loads.max()),
        expected_load=float(loads.sum() / state.k),
        max_normalized_load=max_normalized_load(g, state),
        per_partition_loads=[int(x) for x in loads],
        balance_ok=balance_check(g, state, epsilon),
    )
