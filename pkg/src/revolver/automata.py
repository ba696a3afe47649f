"""Variable-structure learning automata, classic and weighted.

Signals follow the usual convention: 0 is a reward, 1 a penalty.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

REWARD = 0
PENALTY = 1

# renormalise once accumulated drift exceeds this
_DRIFT_TOL = 1e-12


@dataclass
class StepSignals:
    """Reinforcement signal and weight per action for one learning step."""

    signals: np.ndarray
    weights: np.ndarray


@njit(nogil=True, cache=True)
def _roulette(p, u):
    acc = 0.0
    last = -1
    for i in range(p.shape[0]):
        if p[i] > 0.0:
            acc += p[i]
            last = i
            if u < acc:
                return i
    # u fell past the accumulated mass through rounding
    return last


@njit(nogil=True, cache=True)
def _classic_update(p, i, signal, alpha, beta):
    m = p.shape[0]
    if signal == 0:
        for j in range(m):
            if j == i:
                p[j] = p[j] + alpha * (1.0 - p[j])
            else:
                p[j] = p[j] * (1.0 - alpha)
    else:
        spread = beta / (m - 1)
        for j in range(m):
            if j == i:
                p[j] = p[j] * (1.0 - beta)
            else:
                p[j] = p[j] * (1.0 - beta) + spread


@njit(nogil=True, cache=True)
def _renormalize(p):
    total = 0.0
    for j in range(p.shape[0]):
        if p[j] < 0.0:
            p[j] = 0.0
        total += p[j]
    if abs(total - 1.0) > _DRIFT_TOL and total > 0.0:
        for j in range(p.shape[0]):
            p[j] /= total


@njit(nogil=True, cache=True)
def _weighted_update(p, signals, weights, alpha, beta):
    m = p.shape[0]
    spread = beta / (m - 1) if m > 1 else 0.0
    for i in range(m):
        if signals[i] == 0:
            for j in range(m):
                if j == i:
                    p[j] = p[j] + alpha * weights[j] * (1.0 - p[j])
                else:
                    p[j] = p[j] * (1.0 - alpha * weights[j])
        else:
            for j in range(m):
                if j == i:
                    p[j] = p[j] * (1.0 - beta * weights[j])
                else:
                    p[j] = p[j] * (1.0 - beta * weights[j]) + spread
    _renormalize(p)


@njit(nogil=True, cache=True)
def _build_signals(raw, signals, weights):
    """Fill ``signals``/``weights`` from ``raw``; False if there is nothing to learn from."""
    m = raw.shape[0]
    total = 0.0
    for i in range(m):
        total += raw[i]
    if total <= 0.0:
        return False
    mean = total / m
    reward_sum = 0.0
    penalty_sum = 0.0
    n_penalty = 0
    for i in range(m):
        if raw[i] > mean:
            signals[i] = 0
            reward_sum += raw[i]
        else:
            signals[i] = 1
            penalty_sum += raw[i]
            n_penalty += 1
    if reward_sum <= 0.0:
        return False
    for i in range(m):
        if signals[i] == 0:
            weights[i] = raw[i] / reward_sum
        elif penalty_sum > 0.0:
            weights[i] = raw[i] / penalty_sum
        else:
            weights[i] = 1.0 / n_penalty
    return True


def _as_prob(p):
    p = np.array(p, dtype=np.float64)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("probability vector must be a non-empty 1-d array")
    if np.any(p < 0) or not np.isclose(p.sum(), 1.0, atol=1e-9):
        raise ValueError("probability vector must be non-negative and sum to 1")
    return p


def roulette_select(p, rng):
    """Draw action ``i`` with probability ``p[i]`` using one uniform from ``rng``.

    ``rng`` is a :class:`numpy.random.Generator` or anything accepted by
    :func:`numpy.random.default_rng`.
    """
    p = np.asarray(p, dtype=np.float64)
    if p.size == 0 or not np.any(p > 0):
        raise ValueError("cannot select from an all-zero probability vector")
    rng = np.random.default_rng(rng)
    return int(_roulette(p, rng.random()))


def classic_update(p, i, signal, alpha, beta):
    """Linear reward-penalty update of a single action.

    A reward moves ``alpha`` of the remaining mass onto ``i``; a penalty
    takes ``beta`` of every entry and spreads ``beta`` evenly over the other
    actions. Returns a new vector.
    """
    p = _as_prob(p)
    if not (0 <= alpha <= 1 and 0 <= beta <= 1):
        raise ValueError("alpha and beta must lie in [0, 1]")
    if not 0 <= i < p.size:
        raise IndexError(f"action {i} out of range for {p.size} actions")
    if signal not in (REWARD, PENALTY):
        raise ValueError("signal must be 0 (reward) or 1 (penalty)")
    if signal == PENALTY and p.size < 2:
        raise ValueError("penalty update needs at least two actions")
    _classic_update(p, i, signal, alpha, beta)
    return p


def weighted_update(p, signals, alpha, beta):
    """Weighted update: every action is reinforced in turn, ``m * m`` entry updates.

    Actions are processed in ascending index order; each one applies its
    own reward or penalty rule to all entries scaled by the entries'
    weights. The result is renormalised against floating-point drift.
    """
    p = _as_prob(p)
    r = np.ascontiguousarray(signals.signals, dtype=np.int8)
    w = np.ascontiguousarray(signals.weights, dtype=np.float64)
    if r.shape != p.shape or w.shape != p.shape:
        raise ValueError("signals and weights must match the number of actions")
    _weighted_update(p, r, w, float(alpha), float(beta))
    return p


def build_signals(raw):
    """Split raw weights at their mean into reward and penalty halves.

    Entries strictly above the mean are rewarded, the rest penalised; each
    half is rescaled to sum to 1 (a penalty half of zeros becomes uniform).
    Returns ``None`` when every entry equals the mean, since no action
    stands out.
    """
    raw = np.asarray(raw, dtype=np.float64)
    if raw.ndim != 1 or raw.size == 0:
        raise ValueError("weight vector must be a non-empty 1-d array")
    if np.any(raw < 0):
        raise ValueError("weights must be non-negative")
    if not np.any(raw > 0):
        raise ValueError("all-zero weight vector carries no information")
    signals = np.empty(raw.size, dtype=np.int8)
    weights = np.empty(raw.size)
    if not _build_signals(raw, signals, weights):
        return None
    return StepSignals(signals=signals, weights=weights)


class AutomataNetwork:
    """One learning automaton per vertex, all with ``k`` actions.

    Parameters
    ----------
    n : int
        Number of automata.
    k : int
        Number of actions per automaton.
    alpha, beta : float
        Reward and penalty step sizes.
    seed : int or None
        Base seed for action selection.
    """

    def __init__(self, n, k, alpha=1.0, beta=0.1, seed=None):
        if k < 1:
            raise ValueError("k must be at least 1")
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.seed = seed
        self.probabilities = np.full((n, k), 1.0 / k)
        self._rng = np.random.default_rng(seed)

    @property
    def k(self):
        return self.probabilities.shape[1]

    def select(self, v):
        return roulette_select(self.probabilities[v], self._rng)

    def reinforce(self, v, raw_weights):
        """Update automaton ``v`` from raw weights; returns False when skipped."""
        sig = build_signals(raw_weights)
        if sig is None:
            return False
        self.probabilities[v] = weighted_update(self.probabilities[v], sig, self.alpha, self.beta)
        return True
