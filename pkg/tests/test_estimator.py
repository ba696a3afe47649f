import numpy as np
import pytest
import scipy.sparse as sp
from sklearn.base import clone

from revolver.estimator import (
    HashPartitioner,
    RangePartitioner,
    RevolverPartitioner,
    SpinnerPartitioner,
    check_graph,
)
from revolver.generators import two_cliques
from revolver.graph import Graph

EDGES = np.array([[0, 1], [1, 0], [1, 2], [2, 3], [3, 2]])


def test_check_graph_accepts_edge_array_and_sparse():
    g = check_graph(EDGES)
    assert (g.num_vertices, g.num_edges) == (4, 5)
    adj = sp.csr_matrix((np.ones(5), (EDGES[:, 0], EDGES[:, 1])), shape=(5, 5))
    h = check_graph(adj)
    assert h.num_vertices == 5
    assert np.array_equal(h.edges(), g.edges())
    assert check_graph(g) is g


@pytest.mark.parametrize(
    "bad", [np.zeros((3, 3), dtype=int), np.array([[0, -1]]), sp.csr_matrix((2, 3))]
)
def test_check_graph_rejects_bad_input(bad):
    with pytest.raises(ValueError):
        check_graph(bad)


@pytest.mark.parametrize(
    "cls", [RevolverPartitioner, SpinnerPartitioner, HashPartitioner, RangePartitioner]
)
def test_estimator_protocol(cls):
    est = cls(n_partitions=2)
    params = est.get_params()
    assert params["n_partitions"] == 2
    twin = clone(est)
    assert twin.get_params() == params
    g = two_cliques(10)
    labels = est.fit_predict(g)
    assert labels.shape == (g.num_vertices,)
    assert set(labels.tolist()) <= {0, 1}
    assert 0 <= est.score(g) <= 1
    assert est.report_.local_edges == est.score(g)


def test_revolver_estimator_reproducible():
    g = two_cliques(20)
    a = RevolverPartitioner(random_state=4).fit_predict(g)
    b = RevolverPartitioner(random_state=4).fit_predict(g)
    assert np.array_equal(a, b)


def test_set_params_changes_run():
    est = RevolverPartitioner().set_params(max_steps=2, theta=0.0)
    est.fit(EDGES)
    assert est.n_iter_ == 2


def test_score_before_fit():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        HashPartitioner().score(Graph.from_edges([0], [1]))
