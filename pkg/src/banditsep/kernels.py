"""The rational kernel, its explicit feature map, and Gram diagnostics.

All kernels accept either a single vector or a stacked (n, d) matrix as the
first argument and broadcast over rows.
"""

from __future__ import annotations

import math
from itertools import combinations_with_replacement
from typing import Iterable, Iterator

import numpy as np

#: largest total degree for which the multinomial coefficient is computed
#: explicitly (log-space keeps it finite; beyond this we refuse)
MAX_FEATURE_DEGREE = 170


def rational_kernel(x, xp):
    """k(x, x') = 1 / (1 - <x, x'>/2), defined for <x, x'> < 2."""
    ip = np.asarray(x) @ np.asarray(xp)
    if np.any(ip >= 2.0):
        raise ValueError("rational kernel undefined: inner product >= 2")
    return 1.0 / (1.0 - 0.5 * ip)


def linear_kernel(x, xp):
    return np.asarray(x) @ np.asarray(xp)


def polynomial_kernel(x, xp, degree: int = 3):
    return (1.0 + np.asarray(x) @ np.asarray(xp)) ** degree


def make_kernel(name: str, **params):
    """Kernel by config name: ``rational``, ``linear``, ``poly(degree=...)``."""
    if name == "rational":
        return rational_kernel
    if name == "linear":
        return linear_kernel
    if name == "poly":
        degree = int(params.get("degree", 3))
        return lambda x, xp: polynomial_kernel(x, xp, degree)
    raise ValueError(f"unknown kernel {name!r}")


def multinomial(alpha: tuple[int, ...]) -> float:
    """Multinomial coefficient (|alpha|; alpha_1, ..., alpha_d)."""
    n = sum(alpha)
    if n > MAX_FEATURE_DEGREE:
        raise OverflowError(f"multi-index degree {n} exceeds cap {MAX_FEATURE_DEGREE}")
    logv = math.lgamma(n + 1) - sum(math.lgamma(a + 1) for a in alpha)
    return math.exp(logv)


def feature_coordinate(x, alpha: tuple[int, ...]) -> float:
    """Coordinate of the rational kernel's feature map at multi-index alpha:
    x^alpha * sqrt(2^-|alpha| * multinomial(|alpha|; alpha)).
    """
    x = np.asarray(x, dtype=float)
    if len(alpha) != x.shape[0]:
        raise ValueError("multi-index length must match dimension")
    if any(a < 0 for a in alpha):
        raise ValueError("multi-index entries must be non-negative")
    n = sum(alpha)
    mono = 1.0
    for xi, a in zip(x, alpha):
        if a:
            mono *= xi ** a
    return mono * math.sqrt(2.0 ** (-n) * multinomial(alpha))


def multi_indices(d: int, max_degree: int) -> Iterator[tuple[int, ...]]:
    """All multi-indices with |alpha| <= max_degree, graded lexicographic."""
    for n in range(max_degree + 1):
        # combinations of variable slots -> exponent vectors, lex within grade
        for combo in combinations_with_replacement(range(d), n):
            alpha = [0] * d
            for j in combo:
                alpha[j] += 1
            yield tuple(alpha)


def truncated_kernel(x, xp, D: int) -> float:
    """Partial feature-map inner product over |alpha| <= D.

    By the multinomial theorem this equals sum_{n<=D} (<x,x'>/2)^n, which is
    how it is evaluated (O(D + d) instead of enumerating multi-indices).
    """
    if D < 0:
        raise ValueError("truncation degree must be >= 0")
    half = 0.5 * float(np.asarray(x) @ np.asarray(xp))
    total = 0.0
    term = 1.0
    for _ in range(D + 1):
        total += term
        term *= half
    return total


def gram_matrix(xs: Iterable, kernel=rational_kernel) -> tuple[np.ndarray, dict]:
    """Gram matrix plus a PSD diagnostic.

    The PSD check passes when the smallest eigenvalue is >= -1e-8 * trace.
    """
    pts = [np.asarray(p, dtype=float) for p in xs]
    n = len(pts)
    G = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            G[i, j] = G[j, i] = kernel(pts[i], pts[j])
    eigs = np.linalg.eigvalsh(G) if n else np.array([])
    floor = -1e-8 * float(np.trace(G)) if n else 0.0
    min_eig = float(eigs[0]) if n else 0.0
    report = {
        "psd": bool(min_eig >= floor),
        "min_eigenvalue": min_eig,
        "floor": floor,
    }
    return G, report
