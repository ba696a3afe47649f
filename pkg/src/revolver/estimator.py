"""scikit-learn style front end.

Partitioners behave like clusterers: ``fit(X)`` partitions the graph ``X``
and stores ``labels_``; ``fit_predict`` returns them. ``X`` may be a
:class:`~revolver.graph.Graph`, a square scipy sparse adjacency matrix
(non-zeros are directed edges ``row -> col``) or an integer array of shape
``(n_edges, 2)``.
"""

import numpy as np
import scipy.sparse as sp
from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils import check_array
from sklearn.utils.validation import check_is_fitted

from . import engine, metrics
from .graph import Graph


def check_graph(X):
    """Coerce ``X`` into a :class:`Graph`."""
    if isinstance(X, Graph):
        return X
    if sp.issparse(X):
        if X.shape[0] != X.shape[1]:
            raise ValueError(f"adjacency matrix must be square, got shape {X.shape}")
        coo = sp.coo_matrix(X)
        mask = coo.data != 0
        return Graph.from_edges(coo.row[mask], coo.col[mask], num_vertices=X.shape[0])
    edges = check_array(X, dtype=np.int64, ensure_min_samples=1)
    if edges.shape[1] != 2:
        raise ValueError(f"edge array must have shape (n_edges, 2), got {edges.shape}")
    if edges.min() < 0:
        raise ValueError("vertex ids must be non-negative")
    return Graph.from_edges(edges[:, 0], edges[:, 1])


class _BasePartitioner(ClusterMixin, BaseEstimator):
    _algorithm = None

    def _config(self):
        params = self.get_params()
        return engine.RunConfig(
            k=self.n_partitions,
            epsilon=self.epsilon,
            alpha=params.get("alpha", 1.0),
            beta=params.get("beta", 0.1),
            max_steps=params.get("max_steps", 1),
            halt_window=params.get("halt_window", 1),
            theta=params.get("theta", 0.0),
            seed=params.get("random_state"),
            workers=params.get("n_jobs") or 1,
            algorithm=self._algorithm,
            degree_measure=self.degree_measure,
        )

    def fit(self, X, y=None):
        g = check_graph(X)
        result = engine.run(g, self._config())
        self.result_ = result
        self.labels_ = result.labels
        self.report_ = metrics.evaluate(g, result.state)
        self.n_iter_ = result.steps_executed
        return self

    def score(self, X, y=None):
        """Local-edge fraction of the fitted labels on ``X``."""
        check_is_fitted(self, "labels_")
        return metrics.local_edges(check_graph(X), self.labels_)


class RevolverPartitioner(_BasePartitioner):
    """Balanced k-way partitioning with one learning automaton per vertex.

    Parameters
    ----------
    n_partitions : int, default=2
    epsilon : float, default=0.05
        Allowed imbalance; partition capacity is ``(1 + epsilon)`` times the
        mean load.
    alpha, beta : float, default=1.0, 0.1
        Reward and penalty step sizes of the automata.
    max_steps : int, default=290
    halt_window : int, default=5
        Stop after this many consecutive steps improving the global score by
        less than ``theta``.
    theta : float, default=0.001
    degree_measure : {"out", "merged"}, default="out"
        Per-vertex load contribution.
    n_jobs : int, default=1
        Worker threads.
    random_state : int or None, default=None

    Attributes
    ----------
    labels_ : ndarray of shape (n_vertices,)
    report_ : MetricsReport
    result_ : RunResult
        Full run output including the per-step trace.
    n_iter_ : int
    """

    _algorithm = "revolver"

    def __init__(self, n_partitions=2, epsilon=0.05, alpha=1.0, beta=0.1, max_steps=290,
                 halt_window=5, theta=0.001, degree_measure="out", n_jobs=1,
                 random_state=None):
        self.n_partitions = n_partitions
        self.epsilon = epsilon
        self.alpha = alpha
        self.beta = beta
        self.max_steps = max_steps
        self.halt_window = halt_window
        self.theta = theta
        self.degree_measure = degree_measure
        self.n_jobs = n_jobs
        self.random_state = random_state


class SpinnerPartitioner(_BasePartitioner):
    """Synchronous penalised label propagation from a hash start."""

    _algorithm = "spinner"

    def __init__(self, n_partitions=2, epsilon=0.05, max_steps=290, halt_window=5,
                 theta=0.001, degree_measure="out", n_jobs=1, random_state=None):
        self.n_partitions = n_partitions
        self.epsilon = epsilon
        self.max_steps = max_steps
        self.halt_window = halt_window
        self.theta = theta
        self.degree_measure = degree_measure
        self.n_jobs = n_jobs
        self.random_state = random_state


class HashPartitioner(_BasePartitioner):
    """``v mod k``."""

    _algorithm = "hash"

    def __init__(self, n_partitions=2, epsilon=0.05, degree_measure="out"):
        self.n_partitions = n_partitions
        self.epsilon = epsilon
        self.degree_measure = degree_measure


class RangePartitioner(_BasePartitioner):
    """Contiguous id blocks, ``v * k // n``."""

    _algorithm = "range"

    def __init__(self, n_partitions=2, epsilon=0.05, degree_measure="out"):
        self.n_partitions = n_partitions
        self.epsilon = epsilon
        self.degree_measure = degree_measure
