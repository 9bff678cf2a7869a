"""Closed-form mistake bounds and the weak-to-strong margin transform.

Some of these quantities are astronomically small or large (the transformed
margins decay doubly-exponentially in K and 1/gamma), so every bound is
carried in log2 space internally; a linear value is reported only when it
fits comfortably in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

#: switch to log2-only reporting when |log2 value| exceeds this
LINEAR_REPORT_LIMIT = 300.0


@dataclass(frozen=True)
class BoundValue:
    """A bound carried as log2(value); ``value`` is None when out of range."""

    log2: float

    @property
    def value(self) -> float | None:
        if abs(self.log2) > LINEAR_REPORT_LIMIT:
            return None
        return 2.0 ** self.log2

    def __repr__(self):
        v = self.value
        return f"BoundValue(log2={self.log2:.6g})" if v is None else f"BoundValue({v:.6g})"


def _log2_floor_term(ratio_sq: float, factor: float) -> float:
    """log2(floor(factor * ratio_sq)), exact floor when representable.

    The floor is taken with a 1e-9 relative nudge so that ratios that are
    integers in exact arithmetic (e.g. (1/0.1)^2 = 100) are not knocked
    down by double-precision rounding.
    """
    v = factor * ratio_sq
    if v < 2.0 ** 53:
        f = math.floor(v + 1e-9 * abs(v))
        if f < 1:
            return -math.inf
        return math.log2(f)
    return math.log2(v)


def expected_mistakes_strong_upper(K: int, R: float, gamma: float) -> BoundValue:
    """(K - 1) * floor(4 (R/gamma)^2): expected-mistake ceiling of the
    one-vs-all bandit learner under strong separability."""
    _validate(K, R, gamma)
    return BoundValue(math.log2(K - 1) + _log2_floor_term((R / gamma) ** 2, 4.0))


def updates_strong_upper(R: float, gamma: float) -> BoundValue:
    """floor(4 (R/gamma)^2): almost-sure cap on the learner's update count."""
    _validate(2, R, gamma)
    return BoundValue(_log2_floor_term((R / gamma) ** 2, 4.0))


def expected_mistakes_strong_lower(K: int, R: float, gamma: float) -> BoundValue:
    """((K - 1)/2) * floor((R/gamma)^2 / 4): matching lower bound."""
    _validate(K, R, gamma)
    return BoundValue(math.log2((K - 1) / 2.0) + _log2_floor_term((R / gamma) ** 2, 0.25))


def perceptron_mistakes_upper(R: float, gamma: float) -> BoundValue:
    """floor(2 (R/gamma)^2): full-information multiclass perceptron, weak
    separability."""
    _validate(2, R, gamma)
    return BoundValue(_log2_floor_term((R / gamma) ** 2, 2.0))


def fullinfo_mistakes_lower(R: float, gamma: float) -> BoundValue:
    """(1/2) floor((R/gamma)^2): full-information lower bound."""
    _validate(2, R, gamma)
    return BoundValue(-1.0 + _log2_floor_term((R / gamma) ** 2, 1.0))


def nn_mistakes_upper(K: int, R: float, gamma: float, d: int) -> BoundValue:
    """(K - 1) (2R/gamma + 1)^d: nearest-neighbor expected mistakes (its
    store is a gamma-packing of the radius-R ball)."""
    _validate(K, R, gamma)
    if d < 1:
        raise ValueError("dimension must be >= 1")
    return BoundValue(math.log2(K - 1) + d * math.log2(2.0 * R / gamma + 1.0))


def ignorant_mistakes_lower(gamma: float, d: int) -> BoundValue:
    """(1/10) (1/(160 gamma))^((d-2)/4): lower bound for ignorant learners
    (state a function of correct rounds only), unit radius."""
    if gamma <= 0:
        raise ValueError("margin must be positive")
    if d < 2:
        raise ValueError("dimension must be >= 2")
    return BoundValue(-math.log2(10.0) + (d - 2) / 4.0 * -math.log2(160.0 * gamma))


def _validate(K: int, R: float, gamma: float):
    if K < 2:
        raise ValueError("need at least two classes")
    if R <= 0 or gamma <= 0:
        raise ValueError("radius and margin must be positive")
    if gamma > R:
        raise ValueError("margin cannot exceed the radius")


# ---------------------------------------------------------------------------
# weak -> strong margin transform

@dataclass(frozen=True)
class MarginTransform:
    """Strong margin achievable in the rational kernel's feature space for
    any weakly separable stream with margin gamma on the unit ball.

    gamma1 comes from the Chebyshev-power construction, gamma2 from the
    rational-function construction; the transform keeps the better one.
    """

    K: int
    gamma: float
    log2_gamma1: float
    log2_gamma2: float

    @property
    def log2_gamma(self) -> float:
        return max(self.log2_gamma1, self.log2_gamma2)

    @property
    def gamma_new(self) -> float | None:
        return None if self.log2_gamma < -LINEAR_REPORT_LIMIT else 2.0 ** self.log2_gamma


def margin_transform(K: int, gamma: float) -> MarginTransform:
    if K < 2:
        raise ValueError("need at least two classes")
    if not 0.0 < gamma <= 1.0:
        raise ValueError("margin must be in (0, 1]")
    # first construction: a = ceil(log2(2K - 2)), b = ceil(sqrt(2/gamma)),
    # gamma1 = (376 a b)^(-a b / 2) / (2 sqrt(K))
    a = math.ceil(math.log2(2 * K - 2))
    b = math.ceil(math.sqrt(2.0 / gamma))
    log2_g1 = -(a * b / 2.0) * math.log2(376.0 * a * b) - math.log2(2.0 * math.sqrt(K))
    # second construction: r = 2 ceil(log2(4K - 3)/4) + 1, s = ceil(log2(2/gamma)),
    # gamma2 = (2^(s+1) r (K-1) (4s+2))^(-(s + 1/2) r (K-1)) / (4 sqrt(K) (4K-5) 2^(K-1))
    r = 2 * math.ceil(math.log2(4 * K - 3) / 4.0) + 1
    s = math.ceil(math.log2(2.0 / gamma))
    base_log2 = (s + 1) + math.log2(r * (K - 1) * (4 * s + 2))
    log2_g2 = -((s + 0.5) * r * (K - 1)) * base_log2 - (
        math.log2(4.0 * math.sqrt(K) * (4 * K - 5)) + (K - 1)
    )
    return MarginTransform(K=K, gamma=gamma, log2_gamma1=log2_g1, log2_gamma2=log2_g2)


def kernelized_weak_bound(K: int, gamma: float) -> BoundValue:
    """Expected-mistake bound of the kernelized learner under weak
    separability: (K - 1) * 4 * k_max / gamma'^2 with k_max = 2 (the
    rational kernel's diagonal cap on the unit ball) and gamma' the
    transformed strong margin."""
    mt = margin_transform(K, gamma)
    return BoundValue(math.log2(K - 1) + 2.0 + 1.0 - 2.0 * mt.log2_gamma)


@dataclass(frozen=True)
class BoundReport:
    """All closed-form bounds for one (K, R, gamma, d) setting."""

    K: int
    R: float
    gamma: float
    d: int | None
    strong_upper: BoundValue
    strong_updates: BoundValue
    strong_lower: BoundValue
    perceptron_upper: BoundValue
    fullinfo_lower: BoundValue
    nn_upper: BoundValue | None
    ignorant_lower: BoundValue | None
    transform: MarginTransform | None
    kernelized_weak: BoundValue | None


def bound_report(K: int, R: float, gamma: float, d: int | None = None) -> BoundReport:
    _validate(K, R, gamma)
    nn = nn_mistakes_upper(K, R, gamma, d) if d is not None else None
    ig = ignorant_mistakes_lower(gamma / R, d) if (d is not None and d >= 2) else None
    # the transform is stated on the unit ball; rescale the margin by R
    mt = margin_transform(K, min(gamma / R, 1.0))
    kw = kernelized_weak_bound(K, min(gamma / R, 1.0))
    return BoundReport(
        K=K,
        R=R,
        gamma=gamma,
        d=d,
        strong_upper=expected_mistakes_strong_upper(K, R, gamma),
        strong_updates=updates_strong_upper(R, gamma),
        strong_lower=expected_mistakes_strong_lower(K, R, gamma),
        perceptron_upper=perceptron_mistakes_upper(R, gamma),
        fullinfo_lower=fullinfo_mistakes_lower(R, gamma),
        nn_upper=nn,
        ignorant_lower=ig,
        transform=mt,
        kernelized_weak=kw,
    )
