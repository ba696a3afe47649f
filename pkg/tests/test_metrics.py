import random

import numpy as np
import pytest

import reference as ref
from conftest import graph_from
from revolver.engine import hash_partition
from revolver.generators import preferential_attachment
from revolver.metrics import (
    MetricsReport,
    balance_bounds,
    balance_check,
    edge_cuts,
    evaluate,
    local_edges,
    max_normalized_load,
)
from revolver.scoring import PartitionState


def with_loads(loads, epsilon=0.05):
    g = graph_from([(0, 1)], n=max(len(loads), 2))
    k = len(loads)
    state = PartitionState.from_labels(g, np.arange(g.num_vertices) % k, k, epsilon)
    state.loads[:] = loads
    return g, state


def test_local_edges_single_partition():
    g = graph_from([(0, 1), (1, 2), (2, 0)])
    assert local_edges(g, np.zeros(3, dtype=int)) == 1.0


def test_local_edges_direct_count():
    g = graph_from([(0, 1), (2, 3)])
    assert local_edges(g, np.array([0, 0, 0, 1])) == 0.5
    assert edge_cuts(g, np.array([0, 0, 0, 1])) == 0.5


def test_local_edges_needs_edges():
    g = graph_from(np.empty((0, 2)), n=3)
    with pytest.raises(ValueError):
        local_edges(g, np.zeros(3, dtype=int))


@pytest.mark.parametrize("k", [2, 4, 8])
def test_hash_local_edges_near_one_over_k(k):
    g = preferential_attachment(20000, 3, seed=k)
    # hash labels line up with the generator's id order; shuffle to get random labels
    labels = np.random.default_rng(k).integers(0, k, g.num_vertices)
    assert local_edges(g, labels) == pytest.approx(1 / k, abs=0.02)
    assert local_edges(g, hash_partition(g, k)) == pytest.approx(1 / k, abs=0.02)


def test_max_normalized_load_examples():
    assert max_normalized_load(*with_loads([25, 25])) == 1.0
    assert max_normalized_load(*with_loads([30, 10])) == 1.5
    assert max_normalized_load(*with_loads([40])) == 1.0


@pytest.mark.parametrize(
    "loads, ok", [([50, 50], True), ([524, 476], True), ([60, 40], False)]
)
def test_balance_check_examples(loads, ok):
    assert balance_check(*with_loads(loads), epsilon=0.05) is ok


def test_balance_lower_bound_literal():
    lower, upper = balance_bounds(100, 4, 0.05)
    assert lower == pytest.approx(25 * (1 - 1.05 * 3))
    assert upper == pytest.approx(26.25)


def test_metrics_match_naive_scan():
    rng = random.Random(17)
    for _ in range(100):
        n, edges = ref.random_edges(rng, 40, 100)
        k = rng.randint(1, 6)
        g = graph_from(edges, n)
        labels = [rng.randrange(k) for _ in range(n)]
        state = PartitionState.from_labels(g, labels, k)
        load = ref.loads(edges, labels, k, n)
        report = evaluate(g, state)
        assert report.local_edges == ref.local_edges(edges, labels)
        assert report.local_edges + report.edge_cuts == 1.0
        assert report.per_partition_loads == load
        assert report.max_load == max(load)
        assert report.max_normalized_load == pytest.approx(ref.max_normalized_load(load, k),
                                                           abs=1e-12)
        assert report.max_normalized_load >= 1.0
        assert 0 <= report.local_edges <= 1 and 0 <= report.edge_cuts <= 1


def test_report_round_trip():
    g, state = with_loads([30, 10])
    report = evaluate(g, state)
    assert MetricsReport.from_dict(report.to_dict()) == report
    assert report.balance_ok is False
