"""Domain types, game loops, and separability verifiers.

The bandit game reveals only the binary correctness signal z_t to the
learner; the full-information game reveals the true label. Both loops are
deterministic given (learner config, stream, seed).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

#: tolerance for all separability inequalities (double-precision dot
#: products over moderate dimensions)
SEP_TOL = 1e-9


@dataclass(frozen=True)
class LabeledExample:
    x: np.ndarray
    y: int  # class label in 1..K

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        if self.x.ndim != 1 or self.x.shape[0] < 1:
            raise ValueError("feature vector must be 1-d and non-empty")
        if self.y < 1:
            raise ValueError(f"label {self.y} must be >= 1")


@dataclass(frozen=True)
class LinearSeparator:
    """K weight vectors plus a margin claim (weak or strong)."""

    weights: np.ndarray  # shape (K, d)
    margin: float
    kind: str  # "weak" | "strong"

    def __post_init__(self):
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        if self.kind not in ("weak", "strong"):
            raise ValueError(f"unknown separator kind {self.kind!r}")
        if self.margin <= 0:
            raise ValueError("margin must be positive")

    @property
    def total_sq_norm(self) -> float:
        return float(np.sum(self.weights ** 2))


@dataclass
class MistakeTrace:
    rounds: int
    records: list  # (t, yhat, z, cum_mistakes), 1-indexed t
    seed: int

    @property
    def mistakes(self) -> int:
        return self.records[-1][3] if self.records else 0

    def cumulative(self) -> np.ndarray:
        return np.array([r[3] for r in self.records], dtype=int)


@dataclass
class ExampleStream:
    """Fixed list of examples or an adaptive adversary handle.

    An adaptive adversary is any object with
    ``next_example(learner) -> LabeledExample``; it may query the learner's
    prediction distribution on candidate points before committing.
    """

    K: int
    d: int
    examples: Optional[Sequence[LabeledExample]] = None
    adversary: Optional[object] = None
    gamma: Optional[float] = None
    radius: float = 1.0
    witness: Optional[LinearSeparator] = None
    rounds: Optional[int] = None  # required for adaptive streams

    def __post_init__(self):
        if (self.examples is None) == (self.adversary is None):
            raise ValueError("stream needs exactly one of examples / adversary")
        if self.adversary is not None and self.rounds is None:
            raise ValueError("adaptive stream needs an explicit round count")

    @property
    def is_adaptive(self) -> bool:
        return self.adversary is not None

    def __len__(self) -> int:
        return self.rounds if self.is_adaptive else len(self.examples)


def _check_example(ex: LabeledExample, K: int, d: int, t: int):
    if ex.x.shape[0] != d:
        raise ValueError(f"round {t}: example dimension {ex.x.shape[0]} != stream d={d}")
    if not 1 <= ex.y <= K:
        raise ValueError(f"round {t}: label {ex.y} outside 1..{K}")


def sample_prediction(dist: np.ndarray, rng: np.random.Generator) -> int:
    """Draw a 1-based label from a distribution; point masses skip the RNG.

    Skipping the draw for deterministic rounds keeps traces of different
    algorithms with identical distributions byte-identical under a shared
    seed.
    """
    i = int(np.argmax(dist))
    if dist[i] >= 1.0:
        return i + 1
    p = np.asarray(dist, dtype=float)
    return int(rng.choice(len(p), p=p / p.sum())) + 1


def run_bandit_session(learner, stream: ExampleStream, seed: int) -> MistakeTrace:
    """Play the bandit protocol: the learner sees x_t and only z_t, never y_t."""
    if getattr(learner, "K", stream.K) != stream.K:
        raise ValueError(f"learner K={learner.K} != stream K={stream.K}")
    rng = np.random.default_rng(seed)
    records = []
    cum = 0
    T = len(stream)
    fixed = None if stream.is_adaptive else stream.examples
    for t in range(1, T + 1):
        if fixed is not None:
            ex = fixed[t - 1]
            _check_example(ex, stream.K, stream.d, t)
            dist = learner.predict_proba(ex.x)
        else:
            # the adversary reacts to the learner's conditional distribution
            # on the example it is about to play
            ex = stream.adversary.next_example(learner)
            _check_example(ex, stream.K, stream.d, t)
            dist = learner.predict_proba(ex.x)
        yhat = sample_prediction(dist, rng)
        z = int(yhat != ex.y)
        cum += z
        learner.update(ex.x, yhat, z)
        records.append((t, yhat, z, cum))
    return MistakeTrace(rounds=T, records=records, seed=seed)


def run_fullinfo_session(learner, stream: ExampleStream, seed: int = 0) -> MistakeTrace:
    """Play the full-information protocol: the true label is revealed."""
    rng = np.random.default_rng(seed)
    records = []
    cum = 0
    T = len(stream)
    if stream.is_adaptive:
        raise ValueError("full-information sessions require a fixed stream")
    for t, ex in enumerate(stream.examples, start=1):
        _check_example(ex, stream.K, stream.d, t)
        dist = learner.predict_proba(ex.x)
        yhat = sample_prediction(dist, rng)
        z = int(yhat != ex.y)
        cum += z
        learner.observe(ex.x, yhat, ex.y)
        records.append((t, yhat, z, cum))
    return MistakeTrace(rounds=T, records=records, seed=seed)


def verify_weak_separability(
    examples: Iterable[LabeledExample],
    sep: LinearSeparator,
    gamma: float,
    tol: float = SEP_TOL,
) -> tuple[bool, Optional[tuple[int, int]]]:
    """Check the weak separability inequalities against a witness.

    Returns (ok, first_violation) where the violation is the (t, i) pair
    (1-based round, competing class) that failed, or None.
    """
    W = sep.weights
    if sep.total_sq_norm > 1.0 + tol:
        return False, None
    for t, ex in enumerate(examples, start=1):
        scores = W @ ex.x
        target = scores[ex.y - 1]
        for i in range(W.shape[0]):
            if i == ex.y - 1:
                continue
            if target < scores[i] + gamma - tol:
                return False, (t, i + 1)
    return True, None


def verify_strong_separability(
    examples: Iterable[LabeledExample],
    sep: LinearSeparator,
    gamma: float,
    tol: float = SEP_TOL,
) -> tuple[bool, Optional[tuple[int, int]]]:
    """Check the strong separability inequalities against a witness."""
    W = sep.weights
    if sep.total_sq_norm > 1.0 + tol:
        return False, None
    half = gamma / 2.0
    for t, ex in enumerate(examples, start=1):
        scores = W @ ex.x
        if scores[ex.y - 1] < half - tol:
            return False, (t, ex.y)
        for i in range(W.shape[0]):
            if i == ex.y - 1:
                continue
            if scores[i] > -half + tol:
                return False, (t, i + 1)
    return True, None


def probe_strong_separability(
    examples: Sequence[LabeledExample],
    K: int,
    gamma: float,
    budget: int = 2000,
    seed: int = 0,
    tol: float = SEP_TOL,
) -> bool:
    """Search random unit-budget candidate separators for a strong witness.

    Returns True if a feasible witness was found. A False result means
    "refuted up to probe budget", not a proof of infeasibility.
    """
    rng = np.random.default_rng(seed)
    d = examples[0].x.shape[0]
    X = np.stack([ex.x for ex in examples])
    y = np.array([ex.y for ex in examples])
    for _ in range(budget):
        W = rng.standard_normal((K, d))
        W /= np.sqrt(np.sum(W ** 2))
        S = X @ W.T  # (T, K)
        own = S[np.arange(len(y)), y - 1]
        if np.any(own < gamma / 2 - tol):
            continue
        mask = np.ones_like(S, dtype=bool)
        mask[np.arange(len(y)), y - 1] = False
        if np.all(S[mask] <= -gamma / 2 + tol):
            return True
    return False


# ---------------------------------------------------------------------------
# dataset file format:  header "K d gamma R mode", one line per example
# "x_1 ... x_d y", optional witness block starting with a "W" line followed
# by K rows "w_1 ... w_d" (weights of a separator whose kind equals mode).

def save_dataset(
    path,
    examples: Sequence[LabeledExample],
    K: int,
    d: int,
    gamma: float,
    radius: float,
    mode: str,
    witness: Optional[LinearSeparator] = None,
):
    with open(path, "w") as f:
        f.write(f"{K} {d} {gamma!r} {radius!r} {mode}\n")
        for ex in examples:
            coords = " ".join(repr(float(v)) for v in ex.x)
            f.write(f"{coords} {ex.y}\n")
        if witness is not None:
            f.write("W\n")
            for row in witness.weights:
                f.write(" ".join(repr(float(v)) for v in row) + "\n")


def load_dataset(path) -> ExampleStream:
    with open(path) as f:
        lines = [ln.strip() for ln in f if ln.strip()]
    K, d, gamma, radius, mode = lines[0].split()
    K, d, gamma, radius = int(K), int(d), float(gamma), float(radius)
    examples = []
    witness = None
    i = 1
    while i < len(lines):
        if lines[i] == "W":
            rows = [np.array([float(v) for v in lines[i + 1 + j].split()]) for j in range(K)]
            kind = mode if mode in ("weak", "strong") else "weak"
            witness = LinearSeparator(np.stack(rows), margin=gamma, kind=kind)
            i += 1 + K
            continue
        parts = lines[i].split()
        x = np.array([float(v) for v in parts[:-1]])
        examples.append(LabeledExample(x=x, y=int(parts[-1])))
        i += 1
    return ExampleStream(
        K=K, d=d, examples=examples, gamma=gamma, radius=radius, witness=witness
    )
