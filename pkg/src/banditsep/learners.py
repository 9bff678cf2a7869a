"""The five learners behind common bandit / full-information interfaces.

Bandit learners implement ``predict_proba(x)`` and ``update(x, yhat, z)``;
the full-information Multiclass Perceptron implements ``predict_proba`` and
``observe(x, yhat, y)``. Every learner exposes its exact per-round sampling
distribution, which the adaptive adversary consumes directly.

Tie-breaking is deterministic throughout: the smallest index wins.
"""

from __future__ import annotations

from typing import Callable

import numpy as np


def prediction_distribution(learner, x) -> np.ndarray:
    """Exact sampling distribution of the learner's next prediction on x."""
    return learner.predict_proba(np.asarray(x, dtype=float))


def _point_mass(K: int, label: int) -> np.ndarray:
    p = np.zeros(K)
    p[label - 1] = 1.0
    return p


class OvaLearner:
    """K one-vs-all binary perceptrons with bandit updates.

    Predicts any class whose binary score is non-negative (smallest index),
    or uniformly at random when all scores are negative. Updates only on
    (uniform round, correct) with +x and (score round, mistake) with -x.
    """

    def __init__(self, K: int, d: int):
        self.K = K
        self.d = d
        self.W = np.zeros((K, d))
        self.updates = 0

    def _positive_set_label(self, x) -> int:
        """Smallest index with non-negative score, or 0 if the set is empty."""
        scores = self.W @ x
        nz = np.flatnonzero(scores >= 0.0)
        return int(nz[0]) + 1 if nz.size else 0

    def predict_proba(self, x) -> np.ndarray:
        lead = self._positive_set_label(x)
        if lead == 0:
            return np.full(self.K, 1.0 / self.K)
        return _point_mass(self.K, lead)

    def update(self, x, yhat: int, z: int):
        empty = self._positive_set_label(x) == 0
        if empty and z == 0:
            self.W[yhat - 1] += x
            self.updates += 1
        elif not empty and z == 1:
            self.W[yhat - 1] -= x
            self.updates += 1


class KernelizedLearner:
    """Kernelized version of :class:`OvaLearner`.

    Stores per-class support sets J_i of (example, sign) pairs; the class
    score is the signed kernel sum over J_i. Support vectors are kept in a
    single stacked matrix so scores are one kernel-vector product per round.
    """

    def __init__(self, K: int, d: int, kernel: Callable[[np.ndarray, np.ndarray], float]):
        self.K = K
        self.d = d
        self.kernel = kernel
        self._xs: list[np.ndarray] = []
        self._signs: list[float] = []
        self._classes: list[int] = []
        self._X = np.zeros((0, d))
        self._sv_dirty = False
        self._cache_key: object = None
        self._cache_scores: np.ndarray | None = None

    @property
    def support_sets(self) -> list[list[tuple[np.ndarray, int]]]:
        J = [[] for _ in range(self.K)]
        for x, s, c in zip(self._xs, self._signs, self._classes):
            J[c - 1].append((x, int(s)))
        return J

    @property
    def support_size(self) -> int:
        return len(self._xs)

    def _scores(self, x) -> np.ndarray:
        # predict and update see the same x within a round; avoid the
        # second kernel pass (the cache never changes outputs)
        if x is self._cache_key and not self._sv_dirty:
            return self._cache_scores
        scores = np.zeros(self.K)
        if not self._xs:
            self._cache_key, self._cache_scores = x, scores
            return scores
        if self._sv_dirty:
            self._X = np.stack(self._xs)
            self._sign_arr = np.asarray(self._signs)
            self._class_idx = np.asarray(self._classes) - 1
            self._sv_dirty = False
        kvals = self.kernel(self._X, x)
        if not np.all(np.isfinite(kvals)):
            raise FloatingPointError("non-finite kernel value in score computation")
        # accumulate signed kernel values per class, in insertion order
        np.add.at(scores, self._class_idx, self._sign_arr * kvals)
        self._cache_key, self._cache_scores = x, scores
        return scores

    def _positive_set_label(self, x) -> int:
        scores = self._scores(x)
        nz = np.flatnonzero(scores >= 0.0)
        return int(nz[0]) + 1 if nz.size else 0

    def predict_proba(self, x) -> np.ndarray:
        lead = self._positive_set_label(x)
        if lead == 0:
            return np.full(self.K, 1.0 / self.K)
        return _point_mass(self.K, lead)

    def update(self, x, yhat: int, z: int):
        empty = self._positive_set_label(x) == 0
        if empty and z == 0:
            sign = +1.0
        elif not empty and z == 1:
            sign = -1.0
        else:
            return
        self._xs.append(np.array(x, dtype=float))
        self._signs.append(sign)
        self._classes.append(yhat)
        self._sv_dirty = True


class MulticlassPerceptron:
    """Full-information argmax perceptron with the classic two-sided update."""

    def __init__(self, K: int, d: int):
        self.K = K
        self.d = d
        self.W = np.zeros((K, d))
        self.mistakes = 0

    def predict_proba(self, x) -> np.ndarray:
        scores = self.W @ x
        return _point_mass(self.K, int(np.argmax(scores)) + 1)

    def observe(self, x, yhat: int, y: int):
        if yhat != y:
            self.W[y - 1] += x
            self.W[yhat - 1] -= x
            self.mistakes += 1

    def step(self, x, y: int) -> int:
        """Single full-information round; returns the prediction."""
        x = np.asarray(x, dtype=float)
        yhat = int(np.argmax(self.W @ x)) + 1
        self.observe(x, yhat, y)
        return yhat


class NearestNeighborLearner:
    """Predicts the label of the nearest stored point within distance gamma.

    Outside that radius it guesses uniformly and stores the point only when
    the guess was correct, so the store is always a gamma-packing and the
    learner is ignorant (its state depends only on correct rounds).
    """

    def __init__(self, K: int, d: int, gamma: float):
        self.K = K
        self.d = d
        self.gamma = gamma
        self._X = np.zeros((0, d))
        self._labels: list[int] = []

    @property
    def store_size(self) -> int:
        return len(self._labels)

    @property
    def stored(self) -> list[tuple[np.ndarray, int]]:
        return [(self._X[i].copy(), self._labels[i]) for i in range(len(self._labels))]

    def _nearest(self, x) -> tuple[float, int]:
        """(min distance, index); earliest-inserted point wins ties."""
        if not self._labels:
            return np.inf, -1
        dists = np.linalg.norm(self._X - x, axis=1)
        idx = int(np.argmin(dists))  # argmin returns the first minimum
        return float(dists[idx]), idx

    def predict_proba(self, x) -> np.ndarray:
        dist, idx = self._nearest(x)
        if dist <= self.gamma:
            return _point_mass(self.K, self._labels[idx])
        return np.full(self.K, 1.0 / self.K)

    def update(self, x, yhat: int, z: int):
        dist, _ = self._nearest(x)
        if dist <= self.gamma:
            return  # feedback ignored on nearest-neighbor rounds
        if z == 0:
            self._X = np.vstack([self._X, np.asarray(x, dtype=float)])
            self._labels.append(yhat)


class BanditronLearner:
    """Epsilon-greedy linear baseline with an unbiased matrix update.

    Not part of the separability analysis; included for experiment
    comparisons only.
    """

    def __init__(self, K: int, d: int, eta: float):
        if not 0.0 < eta <= 1.0:
            raise ValueError("exploration rate must be in (0, 1]")
        self.K = K
        self.d = d
        self.eta = eta
        self.W = np.zeros((K, d))

    def _greedy(self, x) -> int:
        return int(np.argmax(self.W @ x)) + 1

    def predict_proba(self, x) -> np.ndarray:
        p = np.full(self.K, self.eta / self.K)
        p[self._greedy(x) - 1] += 1.0 - self.eta
        return p

    def update(self, x, yhat: int, z: int):
        jhat = self._greedy(x)
        p = self.predict_proba(x)
        g = np.zeros(self.K)
        if z == 0:
            g[yhat - 1] += 1.0 / p[yhat - 1]
        g[jhat - 1] -= 1.0
        self.W += np.outer(g, x)
