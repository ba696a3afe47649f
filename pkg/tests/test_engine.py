import random
import warnings

import numpy as np
import pytest

import reference as ref
from conftest import graph_from
from revolver.engine import (
    RunConfig,
    accumulate_objective,
    global_score,
    halted,
    hash_partition,
    range_partition,
    revolver_run,
    run,
    spinner_run,
)
from revolver.generators import preferential_attachment, star, two_cliques
from revolver.metrics import local_edges
from revolver.scoring import PartitionState


def test_hash_partition_formula():
    g = graph_from([(0, 1)], n=10)
    labels = hash_partition(g, 4).labels
    assert labels[7] == 3
    assert labels[0] == 0
    assert hash_partition(g, 3).labels[0] == 0


def test_range_partition_formula():
    g = graph_from([(0, 1)], n=10)
    assert range_partition(g, 2).labels[[0, 5]].tolist() == [0, 1]
    assert range_partition(g, 5).labels[9] == 4
    assert np.all(np.diff(range_partition(g, 3).labels) >= 0)


@pytest.mark.parametrize("fn", [hash_partition, range_partition])
def test_static_single_partition(fn):
    g = two_cliques(5)
    state = fn(g, 1)
    assert set(state.labels.tolist()) == {0}
    assert local_edges(g, state) == 1.0


@pytest.mark.parametrize("algorithm", ["revolver", "spinner"])
def test_single_partition_runs(algorithm):
    g = two_cliques(6)
    res = run(g, RunConfig(k=1, algorithm=algorithm, seed=3))
    assert set(res.labels.tolist()) == {0}
    assert local_edges(g, res.state) == 1.0
    assert res.converged
    assert res.steps_executed == 5


def test_star_conserves_load_and_terminates():
    g = star(64)
    res = revolver_run(g, RunConfig(k=2, seed=1))
    assert res.steps_executed <= 290
    assert set(res.trace.total_load) == {g.num_edges}
    assert res.state.loads.sum() == g.num_edges


def test_trace_length_matches_steps():
    g = two_cliques(8)
    for algorithm in ("revolver", "spinner"):
        res = run(g, RunConfig(k=2, algorithm=algorithm, seed=2, max_steps=30))
        assert len(res.trace) == res.steps_executed <= 30
        assert set(np.unique(res.labels)) <= {0, 1}
        if res.converged:
            scores = [res.initial_score] + res.trace.score
            assert np.all(np.diff(scores[-6:]) < 0.001)


def test_max_steps_respected():
    g = preferential_attachment(300, 3, seed=1)
    res = revolver_run(g, RunConfig(k=4, seed=0, max_steps=3, theta=0.0))
    assert res.steps_executed == 3
    assert not res.converged


# accumulate_objective


def lambda_graph():
    # vertex 0 has neighbour 1 (weight 2)
    return graph_from([(0, 1), (1, 0)], n=2)


def test_accumulate_match_branch_adds_edge_weight():
    raw = accumulate_objective(0, 2, np.array([1, 2]), lambda_graph(), 3, p_best=0.0)
    assert raw.tolist() == [0, 0, 2]


def test_accumulate_no_match_and_blocked():
    raw = accumulate_objective(0, 1, np.array([0, 2]), lambda_graph(), 3, p_best=0.0)
    assert raw.tolist() == [0, 0, 0]


def test_accumulate_no_match_feasible():
    # the feasibility branch lands on v's own best label, here 2
    raw = accumulate_objective(0, 1, np.array([2, 2]), lambda_graph(), 3, p_best=0.4)
    assert raw.tolist() == [0, 0, 1]


def test_accumulate_untouched_labels_stay_zero():
    g = graph_from([(0, 1), (0, 2), (3, 0)], n=4)
    raw = accumulate_objective(0, 1, np.array([0, 1, 1, 3]), g, 5, p_best=1.0)
    # neighbours 1 and 2 endorse the selection, 3 falls back to label 0
    assert raw.tolist() == [1, 2, 0, 0, 0]


def test_spinner_fixed_point_on_unanimous_neighbourhoods():
    # two disjoint components, each already uniformly labelled and load balanced
    g = graph_from([(0, 1), (1, 0), (2, 3), (3, 2)])
    res = spinner_run(g, RunConfig(k=2, algorithm="spinner", seed=0, epsilon=0.5),
                      init_labels=np.array([0, 0, 1, 1]))
    assert res.labels.tolist() == [0, 0, 1, 1]


def test_spinner_two_cliques_not_worse_than_hash():
    g = two_cliques(20)
    base = local_edges(g, hash_partition(g, 2))
    for seed in range(3):
        res = spinner_run(g, RunConfig(k=2, algorithm="spinner", seed=seed))
        assert local_edges(g, res.state) >= base


def test_global_score_single_partition():
    g = two_cliques(5)
    assert global_score(hash_partition(g, 1), g) == 1.0


def test_global_score_matches_brute_force():
    rng = random.Random(5)
    n = 20
    raw = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.2]
    edges = raw + [(v, u) for u, v in raw]
    g = graph_from(edges, n)
    for _ in range(20):
        k = rng.randint(2, 4)
        labels = [rng.randrange(k) for _ in range(n)]
        state = PartitionState.from_labels(g, labels, k)
        load = ref.loads(edges, labels, k, n)
        want = sum(ref.normalized_score(edges, labels, v, k, load, state.capacity)[labels[v]]
                   for v in range(n)) / n
        assert global_score(state, g) == pytest.approx(want, abs=1e-12)
        assert 0 <= global_score(state, g) <= 1


def test_halted_rule():
    assert not halted([0.5, 0.5, 0.5], 0.001, 5)
    assert halted([0.5] * 6, 0.001, 5)
    assert not halted([0.1, 0.2, 0.2, 0.2, 0.2, 0.2], 0.001, 5)
    assert halted([0.1, 0.2, 0.2, 0.2, 0.2, 0.2, 0.2], 0.001, 5)
    # drops count as low improvement
    assert halted([0.5, 0.4, 0.3, 0.2, 0.1, 0.0], 0.001, 5)


def test_workers_one_is_reproducible():
    g = preferential_attachment(500, 3, seed=2)
    cfg = RunConfig(k=4, seed=9, max_steps=40)
    a, b = revolver_run(g, cfg), revolver_run(g, cfg)
    assert np.array_equal(a.labels, b.labels)
    assert a.trace.score == b.trace.score
    assert np.array_equal(a.probabilities, b.probabilities)
    c = revolver_run(g, RunConfig(k=4, seed=10, max_steps=40))
    assert not np.array_equal(a.labels, c.labels)


@pytest.mark.parametrize("algorithm", ["hash", "range"])
def test_static_baselines_ignore_workers(algorithm):
    g = preferential_attachment(200, 2, seed=0)
    a = run(g, RunConfig(k=3, algorithm=algorithm, workers=1))
    b = run(g, RunConfig(k=3, algorithm=algorithm, workers=4, seed=99))
    assert np.array_equal(a.labels, b.labels)


@pytest.mark.parametrize("algorithm", ["revolver", "spinner"])
def test_multi_worker_conserves_load(algorithm):
    g = preferential_attachment(2000, 4, seed=3)
    res = run(g, RunConfig(k=8, algorithm=algorithm, workers=4, seed=1, max_steps=20))
    assert set(res.trace.total_load) == {g.num_edges}
    assert np.bincount(res.labels, weights=g.out_degree, minlength=8).tolist() == \
        res.state.loads.tolist()


@pytest.mark.parametrize("measure", ["out", "merged"])
def test_balance_bound_at_termination(measure):
    g = preferential_attachment(1000, 3, seed=4)
    res = revolver_run(g, RunConfig(k=4, seed=2, degree_measure=measure))
    state = res.state
    bound = (1 + state.epsilon) * state.total_load / state.k + state.degrees.max()
    assert state.loads.max() <= bound


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(k=0)
    with pytest.raises(ValueError):
        RunConfig(alpha=1.5)
    with pytest.raises(ValueError):
        RunConfig(algorithm="metis")
    with pytest.warns(RuntimeWarning):
        RunConfig(k=30, epsilon=0.05)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        RunConfig(k=20, epsilon=0.05)
