"""Partitioning drivers: Revolver, a Spinner-style baseline, hash and range.

Revolver and Spinner run their per-vertex work in jitted, GIL-free kernels
over static vertex chunks, one chunk per worker thread. Partition loads
and candidate demand are shared counters updated with atomic adds, so
loads are conserved exactly even when workers race.
"""

from __future__ import annotations

import logging
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from numba import njit

from ._parallel import atomic_add, atomic_load, chunk_bounds, next_u64, next_uniform, worker_seeds
from .automata import _build_signals, _roulette, _weighted_update
from .graph import DEGREE_MEASURES
from .scoring import (
    PartitionState,
    _argmax,
    _migration_prob,
    _penalty_into,
    _tau_into,
)

log = logging.getLogger(__name__)

ALGORITHMS = ("revolver", "spinner", "hash", "range")


@dataclass
class RunConfig:
    """Parameters of one partitioning run. Defaults follow the usual Spinner settings."""

    k: int = 2
    epsilon: float = 0.05
    alpha: float = 1.0
    beta: float = 0.1
    max_steps: int = 290
    halt_window: int = 5
    theta: float = 0.001
    seed: int | None = 0
    workers: int = 1
    algorithm: str = "revolver"
    degree_measure: str = "out"

    def __post_init__(self):
        self.validate()

    def validate(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        for name in ("alpha", "beta"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        if self.halt_window < 1:
            raise ValueError("halt_window must be at least 1")
        if self.theta < 0:
            raise ValueError("theta must be non-negative")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.degree_measure not in DEGREE_MEASURES:
            raise ValueError(f"unknown degree measure {self.degree_measure!r}")
        if (self.k - 1) * self.epsilon >= 1:
            warnings.warn(
                f"(k - 1) * epsilon = {(self.k - 1) * self.epsilon:.3g} >= 1; "
                "partitions may end up empty",
                RuntimeWarning,
                stacklevel=3,
            )

    def to_dict(self):
        return asdict(self)


@dataclass
class Trace:
    """Per-step series; entry ``i`` describes the state after step ``i + 1``."""

    score: list = field(default_factory=list)
    local_edges: list = field(default_factory=list)
    max_normalized_load: list = field(default_factory=list)
    total_load: list = field(default_factory=list)

    def __len__(self):
        return len(self.score)

    def append(self, score, local, mnl, total):
        self.score.append(score)
        self.local_edges.append(local)
        self.max_normalized_load.append(mnl)
        self.total_load.append(total)


@dataclass
class RunResult:
    state: PartitionState
    steps_executed: int
    converged: bool
    trace: Trace
    wall_time: float
    initial_score: float = float("nan")
    probabilities: np.ndarray | None = None

    @property
    def labels(self):
        return self.state.labels


# -- jitted kernels --------------------------------------------------------


@njit(nogil=True, cache=True)
def _accumulate(selected, best, p_best, v, lam, indptr, indices, weights, raw):
    for e in range(indptr[v], indptr[v + 1]):
        lu = lam[indices[e]]
        if selected == lu:
            raw[lu] += weights[e]
        elif p_best > 0.0:
            raw[best] += 1.0


@njit(nogil=True, cache=True)
def _roulette_chunk(lo, hi, rng, slot, probs, labels):
    for v in range(lo, hi):
        labels[v] = _roulette(probs[v], next_uniform(rng, slot))


@njit(nogil=True, cache=True)
def _revolver_chunk(lo, hi, rng, slot, labels, lam, loads, demand, probs, degrees, cap,
                    indptr, indices, weights, alpha, beta):
    k = loads.shape[0]
    tau = np.empty(k)
    pen = np.empty(k)
    score = np.empty(k)
    snap = np.empty(k)
    raw = np.empty(k)
    wts = np.empty(k)
    sig = np.empty(k, dtype=np.int8)
    order = np.arange(lo, hi)
    for i in range(order.shape[0] - 1, 0, -1):
        j = np.int64(next_u64(rng, slot) % np.uint64(i + 1))
        order[i], order[j] = order[j], order[i]
    for v in order:
        d = degrees[v]
        p = probs[v]
        cur = labels[v]

        # action selection; only vertices wanting to move add demand
        a = _roulette(p, next_uniform(rng, slot))
        p_a = 0.0
        if a != cur:
            m_a = atomic_add(demand, a, d) + d
            p_a = _migration_prob(cap, atomic_load(loads, a), m_a)

        # normalised score against the most recent labels and loads
        _tau_into(v, labels, indptr, indices, weights, tau)
        for l in range(k):
            snap[l] = atomic_load(loads, l)
        _penalty_into(snap, cap, pen)
        for l in range(k):
            score[l] = 0.5 * (tau[l] + pen[l])
        best = _argmax(score, cur)
        lam[v] = best

        # migrate; the fetch-add old value guards against a racing fill
        if a != cur and next_uniform(rng, slot) < p_a:
            old = atomic_add(loads, a, d)
            if old < cap or d == 0:
                atomic_add(loads, cur, -d)
                labels[v] = a
            else:
                atomic_add(loads, a, -d)

        # objective, signals, probability update
        p_best = _migration_prob(cap, atomic_load(loads, best), atomic_load(demand, best))
        raw[:] = 0.0
        _accumulate(a, best, p_best, v, lam, indptr, indices, weights, raw)
        if _build_signals(raw, sig, wts):
            _weighted_update(p, sig, wts, alpha, beta)


@njit(nogil=True, cache=True)
def _spinner_propose_chunk(lo, hi, labels, target, loads, demand, degrees, cap,
                           indptr, indices, weights):
    k = loads.shape[0]
    score = np.empty(k)
    for v in range(lo, hi):
        _tau_into(v, labels, indptr, indices, weights, score)
        for l in range(k):
            score[l] -= loads[l] / cap
        c = _argmax(score, labels[v])
        target[v] = c
        if c != labels[v]:
            atomic_add(demand, c, degrees[v])


@njit(nogil=True, cache=True)
def _spinner_migrate_chunk(lo, hi, rng, slot, labels, target, loads, prob, degrees):
    for v in range(lo, hi):
        c = target[v]
        cur = labels[v]
        if c != cur and next_uniform(rng, slot) < prob[c]:
            d = degrees[v]
            atomic_add(loads, c, d)
            atomic_add(loads, cur, -d)
            labels[v] = c


@njit(nogil=True, cache=True)
def _global_score(labels, loads, cap, indptr, indices, weights):
    n = labels.shape[0]
    k = loads.shape[0]
    pen = np.empty(k)
    snap = np.empty(k)
    for l in range(k):
        snap[l] = loads[l]
    _penalty_into(snap, cap, pen)
    total = 0.0
    for v in range(n):
        lv = labels[v]
        lo, hi = indptr[v], indptr[v + 1]
        if lo == hi:
            t = 1.0 / k
        else:
            same = 0.0
            wsum = 0.0
            for e in range(lo, hi):
                w = weights[e]
                wsum += w
                if labels[indices[e]] == lv:
                    same += w
            t = same / wsum
        total += 0.5 * (t + pen[lv])
    return total / n


@njit(nogil=True, cache=True)
def _local_edge_count(labels, out_indptr, out_indices):
    count = 0
    for v in range(labels.shape[0]):
        lv = labels[v]
        for e in range(out_indptr[v], out_indptr[v + 1]):
            if labels[out_indices[e]] == lv:
                count += 1
    return count


# -- drivers ---------------------------------------------------------------


def global_score(state, g):
    """Mean normalised score of every vertex's current partition, in [0, 1]."""
    return float(_global_score(state.labels, state.loads, state.capacity,
                               g.nbr_indptr, g.nbr_indices, g.nbr_weights))


def halted(scores, theta, window):
    """True when the last ``window`` improvements of ``scores`` were all below ``theta``.

    ``scores[0]`` is the score before the first step.
    """
    if len(scores) <= window:
        return False
    diffs = np.diff(scores[-(window + 1):])
    return bool(np.all(diffs < theta))


def accumulate_objective(v, selected, lam, g, k, p_best):
    """Raw weight vector of ``v`` from its neighbours' best labels.

    A neighbour whose best label equals ``v``'s selected action adds its
    edge weight to that label; any other neighbour adds 1 to ``v``'s own
    best label as long as that partition still admits migrations
    (``p_best > 0``).
    """
    raw = np.zeros(k)
    lam = np.ascontiguousarray(lam, dtype=np.int64)
    _accumulate(int(selected), int(lam[v]), float(p_best), v, lam,
                g.nbr_indptr, g.nbr_indices, g.nbr_weights, raw)
    return raw


def hash_partition(g, k, epsilon=0.05, degree_measure="out"):
    labels = np.arange(g.num_vertices, dtype=np.int64) % k
    return PartitionState.from_labels(g, labels, k, epsilon, degree_measure)


def range_partition(g, k, epsilon=0.05, degree_measure="out"):
    labels = np.arange(g.num_vertices, dtype=np.int64) * k // g.num_vertices
    return PartitionState.from_labels(g, labels, k, epsilon, degree_measure)


class _Workers:
    """Static chunks plus a thread pool; runs a kernel once per chunk."""

    def __init__(self, n, workers, seed):
        self.bounds = chunk_bounds(n, workers)
        self.rng = worker_seeds(seed, workers)
        self.pool = ThreadPoolExecutor(workers) if workers > 1 else None

    def run(self, kernel, *args, rng=False):
        jobs = []
        for w in range(len(self.bounds) - 1):
            head = (self.bounds[w], self.bounds[w + 1])
            if rng:
                head += (self.rng, w)
            jobs.append(head + args)
        if self.pool is None:
            for job in jobs:
                kernel(*job)
        else:
            for fut in [self.pool.submit(kernel, *job) for job in jobs]:
                fut.result()

    def close(self):
        if self.pool is not None:
            self.pool.shutdown()


def _step_stats(state, g):
    score = global_score(state, g)
    local = _local_edge_count(state.labels, g.out_indptr, g.out_indices) / max(g.num_edges, 1)
    total = int(state.loads.sum())
    expected = total / state.k
    mnl = float(state.loads.max() / expected) if expected > 0 else 1.0
    return score, local, mnl, total


def _iterate(g, cfg, state, step_fn):
    trace = Trace()
    scores = [global_score(state, g)]
    converged = False
    steps = 0
    for steps in range(1, cfg.max_steps + 1):
        step_fn()
        stats = _step_stats(state, g)
        trace.append(*stats)
        scores.append(stats[0])
        if halted(scores, cfg.theta, cfg.halt_window):
            converged = True
            break
    log.debug("%s: %d steps, converged=%s", cfg.algorithm, steps, converged)
    return steps, converged, trace, scores[0]


def revolver_run(g, cfg, init_labels=None):
    """Partition ``g`` with per-vertex weighted learning automata.

    Every step each worker walks its vertex chunk once: the vertex's
    automaton picks a candidate partition, the vertex scores all partitions
    from its neighbourhood and the live loads, migrates with the
    candidate's admission probability, and finally reinforces its automaton
    from the neighbours' best labels. Labels, loads and best labels are
    read as they are at that moment; there is no barrier inside a step.
    """
    t0 = time.perf_counter()
    n, k = g.num_vertices, cfg.k
    workers = _Workers(n, cfg.workers, cfg.seed)
    probs = np.full((n, k), 1.0 / k)
    if init_labels is None:
        labels = np.empty(n, dtype=np.int64)
        workers.run(_roulette_chunk, probs, labels, rng=True)
    else:
        labels = init_labels
    state = PartitionState.from_labels(g, labels, k, cfg.epsilon, cfg.degree_measure)
    lam = state.labels.copy()
    demand = np.zeros(k, dtype=np.int64)

    def step():
        demand[:] = 0
        workers.run(
            _revolver_chunk, state.labels, lam, state.loads, demand, probs, state.degrees,
            state.capacity, g.nbr_indptr, g.nbr_indices, g.nbr_weights, cfg.alpha, cfg.beta,
            rng=True,
        )

    try:
        steps, converged, trace, s0 = _iterate(g, cfg, state, step)
    finally:
        workers.close()
    return RunResult(state, steps, converged, trace, time.perf_counter() - t0, s0, probs)


def spinner_run(g, cfg, init_labels=None):
    """Synchronous label propagation with load penalty, starting from hash labels.

    Each step first picks, for all vertices against the same snapshot, the
    partition maximising ``tau - b/C``; then every vertex wanting to move
    does so with its target's admission probability.
    """
    t0 = time.perf_counter()
    n, k = g.num_vertices, cfg.k
    if init_labels is None:
        state = hash_partition(g, k, cfg.epsilon, cfg.degree_measure)
    else:
        state = PartitionState.from_labels(g, init_labels, k, cfg.epsilon, cfg.degree_measure)
    workers = _Workers(n, cfg.workers, cfg.seed)
    target = np.empty(n, dtype=np.int64)
    demand = np.zeros(k, dtype=np.int64)

    def step():
        demand[:] = 0
        workers.run(_spinner_propose_chunk, state.labels, target, state.loads, demand,
                    state.degrees, state.capacity, g.nbr_indptr, g.nbr_indices, g.nbr_weights)
        prob = np.array([_migration_prob(state.capacity, state.loads[l], demand[l])
                         for l in range(k)])
        workers.run(_spinner_migrate_chunk, state.labels, target, state.loads, prob,
                    state.degrees, rng=True)

    try:
        steps, converged, trace, s0 = _iterate(g, cfg, state, step)
    finally:
        workers.close()
    return RunResult(state, steps, converged, trace, time.perf_counter() - t0, s0)


def _static_run(g, cfg, fn):
    t0 = time.perf_counter()
    state = fn(g, cfg.k, cfg.epsilon, cfg.degree_measure)
    return RunResult(state, 0, True, Trace(), time.perf_counter() - t0, global_score(state, g))


def run(g, cfg):
    """Dispatch on ``cfg.algorithm``."""
    if cfg.algorithm == "revolver":
        return revolver_run(g, cfg)
    if cfg.algorithm == "spinner":
        return spinner_run(g, cfg)
    if cfg.algorithm == "hash":
        return _static_run(g, cfg, hash_partition)
    return _static_run(g, cfg, range_partition)
