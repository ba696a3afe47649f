"""Label-propagation scoring: neighbourhood term, load penalty, argmax and migration odds.

The ``_*`` functions are jitted cores shared with the parallel kernels; the
public functions wrap them with argument checking for use from Python.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit


def capacity(total_load, k, epsilon):
    """Per-partition load ceiling ``(1 + epsilon) * total_load / k``."""
    return (1.0 + epsilon) * total_load / k


@dataclass
class PartitionState:
    """Labels and per-partition loads of one k-way assignment.

    ``degrees`` is the per-vertex load contribution (see
    :meth:`Graph.degree_measure`); ``loads[l]`` is the sum of ``degrees``
    over vertices labelled ``l``.
    """

    k: int
    epsilon: float
    labels: np.ndarray
    loads: np.ndarray
    degrees: np.ndarray
    capacity: float

    @classmethod
    def from_labels(cls, g, labels, k, epsilon=0.05, degree_measure="out"):
        labels = np.ascontiguousarray(labels, dtype=np.int64)
        if labels.shape != (g.num_vertices,):
            raise ValueError("need exactly one label per vertex")
        if labels.size and (labels.min() < 0 or labels.max() >= k):
            raise ValueError(f"labels must lie in [0, {k})")
        degrees = np.ascontiguousarray(g.degree_measure(degree_measure), dtype=np.int64)
        loads = np.bincount(labels, weights=degrees, minlength=k).astype(np.int64)
        total = int(degrees.sum())
        return cls(
            k=int(k),
            epsilon=float(epsilon),
            labels=labels,
            loads=loads,
            degrees=degrees,
            capacity=capacity(total, k, epsilon),
        )

    @property
    def total_load(self):
        return int(self.loads.sum())

    def move(self, v, label):
        d = self.degrees[v]
        self.loads[self.labels[v]] -= d
        self.loads[label] += d
        self.labels[v] = label

    def copy(self):
        return PartitionState(
            self.k, self.epsilon, self.labels.copy(), self.loads.copy(),
            self.degrees, self.capacity,
        )


@dataclass
class ScoreTable:
    scores: np.ndarray
    best: np.ndarray
    penalty: np.ndarray


@dataclass
class MigrationPlan:
    candidate_loads: np.ndarray
    remaining: np.ndarray
    probability: np.ndarray


@njit(nogil=True, cache=True)
def _tau_into(v, labels, indptr, indices, weights, out):
    k = out.shape[0]
    out[:] = 0.0
    lo, hi = indptr[v], indptr[v + 1]
    if lo == hi:
        out[:] = 1.0 / k
        return
    total = 0.0
    for e in range(lo, hi):
        w = weights[e]
        out[labels[indices[e]]] += w
        total += w
    for l in range(k):
        out[l] /= total


@njit(nogil=True, cache=True)
def _penalty_into(loads, cap, out):
    k = out.shape[0]
    lowest = np.inf
    for l in range(k):
        out[l] = 1.0 - loads[l] / cap
        if out[l] < lowest:
            lowest = out[l]
    if lowest < 0.0:
        for l in range(k):
            out[l] -= lowest
    total = 0.0
    for l in range(k):
        total += out[l]
    if total <= 0.0:
        out[:] = 1.0 / k
        return
    for l in range(k):
        out[l] /= total


@njit(nogil=True, cache=True)
def _argmax(scores, current):
    best = 0
    for l in range(1, scores.shape[0]):
        if scores[l] > scores[best]:
            best = l
    if 0 <= current < scores.shape[0] and scores[current] == scores[best]:
        return current
    return best


@njit(nogil=True, cache=True)
def _migration_prob(cap, load, demand):
    if demand <= 0:
        return 1.0
    p = (cap - load) / demand
    if p < 0.0:
        return 0.0
    if p > 1.0:
        return 1.0
    return p


def tau(v, labels, g, k):
    """Weighted fraction of ``v``'s neighbourhood carrying each label.

    Isolated vertices get the uniform vector ``1/k``.
    """
    out = np.empty(k)
    _tau_into(v, np.asarray(labels, dtype=np.int64), g.nbr_indptr, g.nbr_indices, g.nbr_weights, out)
    return out


def penalty_vector(loads, cap):
    """Normalised spare-capacity vector ``1 - b(l)/C``.

    Negative entries shift the whole vector up by the most negative value
    before normalising; if nothing is left to normalise the result is
    uniform.
    """
    loads = np.asarray(loads, dtype=np.float64)
    if cap <= 0:
        raise ValueError("capacity must be positive")
    if loads.size == 0:
        raise ValueError("need at least one partition")
    out = np.empty(loads.size)
    _penalty_into(loads, float(cap), out)
    return out


def combine_scores(tau_vec, penalty):
    return (np.asarray(tau_vec) + np.asarray(penalty)) / 2.0


def normalized_score(v, state, g):
    """Score of every partition for ``v``: mean of neighbourhood and penalty terms."""
    return combine_scores(tau(v, state.labels, g, state.k), penalty_vector(state.loads, state.capacity))


def spinner_score(v, state, g):
    """Unnormalised score ``tau(v, l) - b(l)/C``; may be negative."""
    return tau(v, state.labels, g, state.k) - np.asarray(state.loads, dtype=np.float64) / state.capacity


def argmax_label(scores, current=-1):
    """Index of the top score, preferring ``current`` and then the lowest index on ties."""
    scores = np.asarray(scores, dtype=np.float64)
    if scores.size == 0:
        raise ValueError("empty score vector")
    return int(_argmax(scores, int(current)))


def score_table(state, g):
    """Normalised scores and best label for every vertex under one shared penalty."""
    penalty = penalty_vector(state.loads, state.capacity)
    scores = np.empty((g.num_vertices, state.k))
    best = np.empty(g.num_vertices, dtype=np.int64)
    buf = np.empty(state.k)
    for v in range(g.num_vertices):
        _tau_into(v, state.labels, g.nbr_indptr, g.nbr_indices, g.nbr_weights, buf)
        scores[v] = (buf + penalty) / 2.0
        best[v] = _argmax(scores[v], state.labels[v])
    return ScoreTable(scores=scores, best=best, penalty=penalty)


def migration_probabilities(candidate_loads, loads, cap):
    """Chance of admitting a vertex into each partition: spare capacity over demand, clamped to [0, 1]."""
    m = np.asarray(candidate_loads, dtype=np.float64)
    b = np.asarray(loads, dtype=np.float64)
    if np.any(m < 0):
        raise ValueError("candidate loads must be non-negative")
    prob = np.array([_migration_prob(cap, b[l], m[l]) for l in range(b.size)])
    return MigrationPlan(candidate_loads=m, remaining=cap - b, probability=prob)
