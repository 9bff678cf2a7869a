"""Dataset generators, the adaptive lower-bound adversary, and the
set-splitting reduction.

Every generator is pure given (parameters, seed) and attaches a separator
witness that re-verifies at the declared margin and kind.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .core import (
    SEP_TOL,
    ExampleStream,
    LabeledExample,
    LinearSeparator,
)
from .learners import prediction_distribution

# ---------------------------------------------------------------------------
# wedge datasets: K=3, d=3, points on the disc of radius 1/sqrt(2) with a
# constant third coordinate 1/sqrt(2); angular sectors (degrees)
#   class 1: [-15, 15], class 2: [15, 180], class 3: [-180, -15]
# class proportions 0.8 / 0.1 / 0.1; margin-violating points are rejected.

WEDGE_GAMMA = 0.05
_WEDGE_SECTORS = ((-15.0, 15.0), (15.0, 180.0), (-180.0, -15.0))
_WEDGE_PROPS = (0.8, 0.1, 0.1)


def _wedge_weak_witness() -> LinearSeparator:
    # the three decision boundaries are the rays at +15, -15, and 180
    # degrees; these weights put each pairwise difference w_y - w_i normal
    # to the corresponding boundary, then normalize to total norm 1
    c, s = math.cos(math.radians(75.0)), math.sin(math.radians(75.0))
    W = np.array([
        [2.0 * c / 3.0, 0.0, 0.0],
        [-c / 3.0, s, 0.0],
        [-c / 3.0, -s, 0.0],
    ])
    W /= math.sqrt(float(np.sum(W ** 2)))
    return LinearSeparator(W, margin=WEDGE_GAMMA, kind="weak")


def _wedge_strong_witness() -> LinearSeparator:
    # affine scores via the constant third coordinate: x1 - 0.35 for class 1,
    # +/- x2 - 0.25 for classes 2 and 3, normalized to total norm 1
    r2 = math.sqrt(2.0)
    W = np.array([
        [1.0, 0.0, -0.35 * r2],
        [0.0, 1.0, -0.25 * r2],
        [0.0, -1.0, -0.25 * r2],
    ])
    W /= math.sqrt(float(np.sum(W ** 2)))
    return LinearSeparator(W, margin=WEDGE_GAMMA, kind="strong")


def _sample_sector_points(
    rng: np.random.Generator,
    n: int,
    label: int,
    witness: LinearSeparator,
    kind: str,
    gamma: float,
    sectors=_WEDGE_SECTORS,
) -> list[LabeledExample]:
    """Rejection-sample n points of one wedge class at margin gamma."""
    lo, hi = (math.radians(a) for a in sectors[label - 1])
    W = witness.weights
    r_max = 1.0 / math.sqrt(2.0)
    out: list[LabeledExample] = []
    while len(out) < n:
        batch = max(4 * (n - len(out)), 64)
        theta = rng.uniform(lo, hi, size=batch)
        rho = rng.uniform(0.0, r_max, size=batch)
        X = np.column_stack([
            rho * np.cos(theta),
            rho * np.sin(theta),
            np.full(batch, r_max),
        ])
        S = X @ W.T
        own = S[:, label - 1]
        others = np.delete(S, label - 1, axis=1)
        if kind == "weak":
            ok = (own[:, None] - others >= gamma).all(axis=1)
        else:
            ok = (own >= gamma / 2.0) & (others <= -gamma / 2.0).all(axis=1)
        for row in X[ok]:
            out.append(LabeledExample(x=row, y=label))
            if len(out) == n:
                break
    return out


def gen_wedge_dataset(kind: str, T: int, seed: int) -> ExampleStream:
    """Three-class wedge data on the unit ball (see module header).

    ``kind`` selects the witness geometry: "weak" data is separable only in
    the relative sense (class score beats the others by gamma), "strong"
    data keeps every class score outside the [-gamma/2, gamma/2] band.
    """
    if kind not in ("weak", "strong"):
        raise ValueError(f"unknown wedge kind {kind!r}")
    if T < 0:
        raise ValueError("T must be >= 0")
    rng = np.random.default_rng(seed)
    witness = _wedge_weak_witness() if kind == "weak" else _wedge_strong_witness()
    labels = rng.choice([1, 2, 3], size=T, p=_WEDGE_PROPS)
    per_class = [int(np.sum(labels == k)) for k in (1, 2, 3)]
    pools = [
        _sample_sector_points(rng, per_class[k - 1], k, witness, kind, WEDGE_GAMMA)
        for k in (1, 2, 3)
    ]
    iters = [iter(p) for p in pools]
    examples = [next(iters[y - 1]) for y in labels]
    return ExampleStream(
        K=3, d=3, examples=examples, gamma=WEDGE_GAMMA, radius=1.0, witness=witness
    )


# ---------------------------------------------------------------------------
# generic sector dataset in the plane (used for nearest-neighbor streams)

def gen_sector_dataset(T: int, gamma: float, seed: int, K: int = 3) -> ExampleStream:
    """K equal angular sectors in R^2, unit ball, uniform class proportions.

    Witness: w_i = (1/sqrt(K)) * (cos t_i, sin t_i) with t_i the sector
    centers, so the weak margin of a point grows with its distance from the
    sector boundaries; points with margin < gamma are rejected.
    """
    if K < 2:
        raise ValueError("need at least two sectors")
    rng = np.random.default_rng(seed)
    centers = np.pi / 2.0 + 2.0 * np.pi * np.arange(K) / K
    W = np.column_stack([np.cos(centers), np.sin(centers)]) / math.sqrt(K)
    witness = LinearSeparator(W, margin=gamma, kind="weak")
    half = np.pi / K
    examples: list[LabeledExample] = []
    labels = rng.integers(1, K + 1, size=T)
    for y in labels:
        while True:
            theta = centers[y - 1] + rng.uniform(-half, half)
            rho = rng.uniform(0.0, 1.0)
            x = np.array([rho * math.cos(theta), rho * math.sin(theta)])
            s = W @ x
            gaps = s[y - 1] - np.delete(s, y - 1)
            if np.min(gaps) >= gamma:
                examples.append(LabeledExample(x=x, y=int(y)))
                break
    return ExampleStream(
        K=K, d=2, examples=examples, gamma=gamma, radius=1.0, witness=witness
    )


# ---------------------------------------------------------------------------
# hard instances from the lower-bound proofs

def gen_bandit_lower_instance(K: int, R: float, gamma: float, seed: int) -> ExampleStream:
    """Strongly separable stream on which any bandit learner suffers
    Omega(K (R/gamma)^2) expected mistakes.

    M = floor((R/gamma)^2 / 4) blocks; block j repeats
    v_j = (R/sqrt(2)) (e_j + e_{M+1}) for K-1 rounds under a label drawn
    uniformly per block.
    """
    if K < 2:
        raise ValueError("need at least two classes")
    if K > (R / gamma) ** 2:
        raise ValueError("need K <= (R/gamma)^2 for the witness to fit the norm budget")
    rng = np.random.default_rng(seed)
    M = int((R / gamma) ** 2 / 4.0)
    d = M + 1
    labels = rng.integers(1, K + 1, size=M)
    examples = []
    for j in range(M):
        v = np.zeros(d)
        v[j] = v[M] = R / math.sqrt(2.0)
        for _ in range(K - 1):
            examples.append(LabeledExample(x=v.copy(), y=int(labels[j])))
    W = np.zeros((K, d))
    scale = math.sqrt(2.0) * gamma / R
    for j in range(M):
        W[labels[j] - 1, j] = scale
    W[:, M] = -scale / 2.0
    witness = LinearSeparator(W, margin=gamma, kind="strong")
    return ExampleStream(
        K=K, d=d, examples=examples, gamma=gamma, radius=R, witness=witness
    )


def gen_fullinfo_lower_instance(K: int, R: float, gamma: float, seed: int) -> ExampleStream:
    """Weakly separable stream with uniformly random labels over orthogonal
    directions: x_t = R e_t for T = floor((R/gamma)^2) rounds."""
    if K < 2:
        raise ValueError("need at least two classes")
    rng = np.random.default_rng(seed)
    T = int((R / gamma) ** 2)
    labels = rng.integers(1, K + 1, size=T)
    examples = []
    for t in range(T):
        x = np.zeros(T)
        x[t] = R
        examples.append(LabeledExample(x=x, y=int(labels[t])))
    W = np.zeros((K, T))
    for t in range(T):
        W[labels[t] - 1, t] = gamma / R
    witness = LinearSeparator(W, margin=gamma, kind="weak")
    return ExampleStream(
        K=K, d=T, examples=examples, gamma=gamma, radius=R, witness=witness
    )


# ---------------------------------------------------------------------------
# gamma-separated point pairs for the ignorant-learner adversary

def gen_packing_pairs(
    gamma: float,
    N: int,
    d: int,
    seed: int,
    max_attempts: int = 1_000_000,
) -> tuple[np.ndarray, np.ndarray]:
    """N pairs (u_i, v_i) in R^d with <u_i, v_i> >= gamma and
    <u_i, v_j> <= -gamma for i != j, all norms <= 1.

    Built from unit vectors z_i in R^{d-1} with pairwise inner products
    <= 1 - 8*gamma, found by rejection sampling and verified exhaustively
    before returning.
    """
    if not 0.0 < gamma < 1.0 / 160.0:
        raise ValueError("gamma must be in (0, 1/160)")
    if d < 3:
        raise ValueError("need d >= 3")
    rng = np.random.default_rng(seed)
    Z = np.zeros((N, d - 1))
    count = 0
    attempts = 0
    cap = 1.0 - 8.0 * gamma
    while count < N:
        if attempts >= max_attempts:
            raise RuntimeError(
                f"packing attempt budget exhausted after placing {count} of {N} vectors"
            )
        attempts += 1
        z = rng.standard_normal(d - 1)
        z /= np.linalg.norm(z)
        if count and np.max(Z[:count] @ z) > cap:
            continue
        Z[count] = z
        count += 1
    V = np.column_stack([Z / 2.0, np.full(N, 0.5)])
    U = np.column_stack([Z / 2.0, np.full(N, -(1.0 - 4.0 * gamma) / 2.0)])
    # exhaustive pairwise verification, chunked to bound memory
    for lo in range(0, N, 512):
        hi = min(lo + 512, N)
        G = U[lo:hi] @ V.T
        diag = G[np.arange(hi - lo), np.arange(lo, hi)]
        if np.any(diag < gamma - SEP_TOL):
            raise AssertionError("packing verification failed on a diagonal pair")
        G[np.arange(hi - lo), np.arange(lo, hi)] = -np.inf
        if np.any(G > -gamma + SEP_TOL):
            raise AssertionError("packing verification failed on an off-diagonal pair")
    if np.any(np.linalg.norm(U, axis=1) > 1.0 + SEP_TOL) or np.any(
        np.linalg.norm(V, axis=1) > 1.0 + SEP_TOL
    ):
        raise AssertionError("packing verification failed a norm check")
    return U, V


# ---------------------------------------------------------------------------
# adaptive adversary against ignorant learners (K = 2)

@dataclass(frozen=True)
class AdversaryState:
    round: int  # next round to play, 1-based
    phase: int  # 1 or 2
    tau: Optional[int] = None  # switch round (phase-2 anchor)


def ignorant_adversary_next(
    state: AdversaryState,
    p1: float,
    V: np.ndarray,
    T: int,
    q0: float,
) -> tuple[LabeledExample, AdversaryState]:
    """One adversary step given the learner's probability p1 of predicting
    class 1 on the upcoming point.

    Phase 1 plays fresh packing points labeled 1 while the learner is
    unlikely to say 1; the first time p1 >= 1 - q0 it flips the label to 2
    and phase 2 replays that round forever.
    """
    t = state.round
    if t > T:
        raise ValueError(f"round {t} beyond horizon T={T}")
    if state.phase == 2:
        ex = LabeledExample(x=V[state.tau - 1], y=2)
        return ex, replace(state, round=t + 1)
    if p1 < 1.0 - q0:
        return LabeledExample(x=V[t - 1], y=1), replace(state, round=t + 1)
    ex = LabeledExample(x=V[t - 1], y=2)
    return ex, AdversaryState(round=t + 1, phase=2, tau=t)


class IgnorantAdversary:
    """Adaptive stream source implementing the two-phase strategy above.

    Drives any bandit learner through ``next_example(learner)``; the
    learner's exact prediction distribution on the candidate point decides
    the branch. After a run, ``witness()`` returns a strong separator for
    the emitted sequence.
    """

    def __init__(self, U: np.ndarray, V: np.ndarray, T: int, gamma: float):
        if len(V) < T:
            raise ValueError("need at least T packing pairs")
        self.U = U
        self.V = V
        self.T = T
        self.gamma = gamma
        self.q0 = 1.0 / math.sqrt(T)
        self.state = AdversaryState(round=1, phase=1)
        self.emitted: list[LabeledExample] = []

    def next_example(self, learner) -> LabeledExample:
        if self.state.phase == 2:
            p1 = 0.0  # unused in phase 2
        else:
            dist = prediction_distribution(learner, self.V[self.state.round - 1])
            p1 = float(dist[0])
        ex, self.state = ignorant_adversary_next(
            self.state, p1, self.V, self.T, self.q0
        )
        self.emitted.append(ex)
        return ex

    def witness(self) -> LinearSeparator:
        """Strong separator for the emitted sequence.

        After a switch at round tau: (w1, w2) = (-u_tau/2, u_tau/2). If the
        switch never happened every label is 1 and the shared positive last
        coordinate of the points separates directly.
        """
        d = self.V.shape[1]
        if self.state.tau is not None:
            u = self.U[self.state.tau - 1]
            W = np.stack([-u / 2.0, u / 2.0])
        else:
            w = np.zeros(d)
            w[-1] = 1.0 / math.sqrt(2.0)
            W = np.stack([w, -w])
        return LinearSeparator(W, margin=self.gamma, kind="strong")

    def stream(self) -> ExampleStream:
        return ExampleStream(
            K=2, d=self.V.shape[1], adversary=self, gamma=self.gamma,
            radius=1.0, rounds=self.T,
        )


# ---------------------------------------------------------------------------
# set-splitting reduction (labels: positive k = strong, negative -k = "not k")

@dataclass(frozen=True)
class WeakLabelingInstance:
    K: int
    d: int
    samples: tuple  # of (tuple[int, ...] feature vector, int label)


def reduce_set_splitting(S: Sequence[int], C: Sequence[Sequence[int]]) -> WeakLabelingInstance:
    """Encode a set-splitting instance as a weak-labeling feasibility
    problem over {0,1}^(N+1) with K = 3.

    Sample types: the origin-with-bias point demands class 3; each element
    point forbids class 3 (label -3); each subset's indicator point demands
    class 3 again.
    """
    N = len(S)
    if sorted(S) != list(range(1, N + 1)):
        raise ValueError("ground set must be {1..N}")
    for c in C:
        if not c or not set(c) <= set(S):
            raise ValueError(f"malformed subset {c!r}")
    samples = [(tuple([0] * N + [1]), 3)]
    for i in range(1, N + 1):
        x = [0] * (N + 1)
        x[i - 1] = 1
        x[N] = 1
        samples.append((tuple(x), -3))
    for c in C:
        x = [0] * (N + 1)
        for i in c:
            x[i - 1] = 1
        x[N] = 1
        samples.append((tuple(x), 3))
    return WeakLabelingInstance(K=3, d=N + 1, samples=tuple(samples))


def check_weak_labeling(
    inst: WeakLabelingInstance, W: np.ndarray, tol: float = SEP_TOL
) -> tuple[bool, Optional[tuple]]:
    """Check a weight matrix against every sample's (strict) constraint.

    Returns (ok, first violated sample) — strong label k needs w_k to beat
    every other class strictly; weak label -k needs some class to beat w_k.
    """
    for x, y in inst.samples:
        s = W @ np.asarray(x, dtype=float)
        if y > 0:
            others = np.delete(s, y - 1)
            if not np.all(s[y - 1] > others + tol):
                return False, (x, y)
        else:
            k = -y
            others = np.delete(s, k - 1)
            if not np.any(others > s[k - 1] + tol):
                return False, (x, y)
    return True, None


def splitting_to_weights(
    S1: Sequence[int], S2: Sequence[int], inst: WeakLabelingInstance
) -> np.ndarray:
    """Weights realizing the weak labeling from a valid splitting:
    a_i = 1 on the part's elements, -N elsewhere, bias -1/2; third class
    is the zero vector. Verified against the instance before returning."""
    N = inst.d - 1
    s1, s2 = set(S1), set(S2)
    if s1 & s2 or s1 | s2 != set(range(1, N + 1)):
        raise ValueError("parts must be disjoint and cover the ground set")
    w1 = np.array([1.0 if i in s1 else -float(N) for i in range(1, N + 1)] + [-0.5])
    w2 = np.array([1.0 if i in s2 else -float(N) for i in range(1, N + 1)] + [-0.5])
    W = np.stack([w1, w2, np.zeros(N + 1)])
    ok, bad = check_weak_labeling(inst, W)
    if not ok:
        raise ValueError(f"splitting does not realize the labeling; violated sample {bad}")
    return W


def weights_to_splitting(
    W: np.ndarray, inst: WeakLabelingInstance
) -> tuple[set, set]:
    """Splitting recovered from a weight triple that realizes the labeling:
    part 1 collects elements whose point prefers class 1 over class 3,
    part 2 the remaining elements preferring class 2. Verified against the
    subsets before returning."""
    ok, bad = check_weak_labeling(inst, W)
    if not ok:
        raise ValueError(f"weights do not realize the labeling; violated sample {bad}")
    N = inst.d - 1
    S1, S2 = set(), set()
    for i in range(1, N + 1):
        e = np.zeros(N + 1)
        e[i - 1] = 1.0
        e[N] = 1.0
        if float((W[0] - W[2]) @ e) > 0.0:
            S1.add(i)
        elif float((W[1] - W[2]) @ e) > 0.0:
            S2.add(i)
    subsets = _instance_subsets(inst)
    bad_part = _splitting_violation(S1, S2, N, subsets)
    if bad_part is not None:
        raise ValueError(f"recovered parts violate subset {bad_part}")
    return S1, S2


def _instance_subsets(inst: WeakLabelingInstance) -> list[frozenset]:
    N = inst.d - 1
    subsets = []
    for x, y in inst.samples[1 + N:]:
        subsets.append(frozenset(i + 1 for i in range(N) if x[i]))
    return subsets


def _splitting_violation(S1, S2, N, subsets) -> Optional[frozenset]:
    if set(S1) & set(S2) or set(S1) | set(S2) != set(range(1, N + 1)):
        return frozenset()
    for c in subsets:
        if c <= set(S1) or c <= set(S2):
            return c
    return None


def is_valid_splitting(S1, S2, S, C) -> bool:
    return _splitting_violation(set(S1), set(S2), len(S), [frozenset(c) for c in C]) is None


def brute_force_set_splitting(
    S: Sequence[int], C: Sequence[Sequence[int]]
) -> Optional[tuple[set, set]]:
    """First valid splitting in subset-mask order, or None."""
    N = len(S)
    if N > 20:
        raise ValueError("exhaustive search capped at |S| <= 20")
    subsets = [frozenset(c) for c in C]
    for mask in range(2 ** N):
        S1 = {i + 1 for i in range(N) if mask >> i & 1}
        S2 = set(range(1, N + 1)) - S1
        if _splitting_violation(S1, S2, N, subsets) is None:
            return S1, S2
    return None


def grid_search_weights(
    inst: WeakLabelingInstance, seed: int = 0, random_tries: int = 200
) -> list[np.ndarray]:
    """All weight triples found to realize the instance, drawn from the
    forward construction over every bipartition plus random candidates."""
    N = inst.d - 1
    found = []
    for mask in range(2 ** N):
        S1 = {i + 1 for i in range(N) if mask >> i & 1}
        S2 = set(range(1, N + 1)) - S1
        try:
            found.append(splitting_to_weights(S1, S2, inst))
        except ValueError:
            pass
    rng = np.random.default_rng(seed)
    for _ in range(random_tries):
        W = rng.uniform(-2.0, 2.0, size=(3, N + 1))
        if check_weak_labeling(inst, W)[0]:
            found.append(W)
    return found


# ---------------------------------------------------------------------------
# weak-labeling instance file I/O (dataset format, labels -k for "not k")

def save_weak_instance(path, inst: WeakLabelingInstance):
    with open(path, "w") as f:
        f.write(f"{inst.K} {inst.d} 0.0 1.0 weaklabel\n")
        for x, y in inst.samples:
            coords = " ".join(repr(float(v)) for v in x)
            f.write(f"{coords} {y}\n")


def load_weak_instance(path) -> WeakLabelingInstance:
    with open(path) as f:
        lines = [ln.strip() for ln in f if ln.strip()]
    K, d = int(lines[0].split()[0]), int(lines[0].split()[1])
    samples = []
    for ln in lines[1:]:
        parts = ln.split()
        x = tuple(int(float(v)) for v in parts[:-1])
        samples.append((x, int(parts[-1])))
    return WeakLabelingInstance(K=K, d=d, samples=tuple(samples))
