"""Sparse multivariate polynomials, Chebyshev machinery, and the two
margin-amplifying constructions.

Polynomials are maps from multi-index tuples to coefficients; arithmetic is
exact sparse arithmetic with coefficients in double precision. The second
(rational-function based) construction produces values far outside double
range, so its evaluator works in sign + log2-magnitude form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .kernels import multinomial

#: refuse to materialize expansions with more monomials than this
TERM_CAP = 2_000_000


class TermCapExceeded(RuntimeError):
    pass


class SparsePoly:
    """Multivariate polynomial as {multi-index tuple: coefficient}."""

    __slots__ = ("d", "coeffs")

    def __init__(self, d: int, coeffs: Optional[dict] = None):
        self.d = d
        self.coeffs = {}
        if coeffs:
            for a, c in coeffs.items():
                if c != 0.0:
                    self.coeffs[tuple(a)] = float(c)

    @classmethod
    def constant(cls, d: int, value: float) -> "SparsePoly":
        return cls(d, {tuple([0] * d): value})

    @classmethod
    def variable(cls, d: int, j: int) -> "SparsePoly":
        a = [0] * d
        a[j] = 1
        return cls(d, {tuple(a): 1.0})

    @classmethod
    def linear(cls, coeffs: Sequence[float], constant: float = 0.0) -> "SparsePoly":
        d = len(coeffs)
        p = cls.constant(d, constant)
        for j, c in enumerate(coeffs):
            if c != 0.0:
                a = [0] * d
                a[j] = 1
                p.coeffs[tuple(a)] = float(c)
        return p

    @property
    def degree(self) -> int:
        return max((sum(a) for a in self.coeffs), default=0)

    @property
    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        return math.sqrt(sum(c * c for c in self.coeffs.values()))

    def __eq__(self, other) -> bool:
        return isinstance(other, SparsePoly) and self.d == other.d and self.coeffs == other.coeffs

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            v = out.get(a, 0.0) + c
            if v == 0.0:
                out.pop(a, None)
            else:
                out[a] = v
        return SparsePoly(self.d, out)

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + other.scale(-1.0)

    def scale(self, k: float) -> "SparsePoly":
        if k == 0.0:
            return SparsePoly(self.d)
        return SparsePoly(self.d, {a: k * c for a, c in self.coeffs.items()})

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        if len(self.coeffs) * len(other.coeffs) > 4 * TERM_CAP:
            raise TermCapExceeded("product would exceed the monomial cap")
        out: dict = {}
        for a, ca in self.coeffs.items():
            for b, cb in other.coeffs.items():
                key = tuple(ai + bi for ai, bi in zip(a, b))
                v = out.get(key, 0.0) + ca * cb
                if v == 0.0:
                    out.pop(key, None)
                else:
                    out[key] = v
        if len(out) > TERM_CAP:
            raise TermCapExceeded(f"{len(out)} monomials exceeds cap {TERM_CAP}")
        return SparsePoly(self.d, out)

    def __pow__(self, n: int) -> "SparsePoly":
        if n < 0:
            raise ValueError("negative power")
        result = SparsePoly.constant(self.d, 1.0)
        base = self
        k = n
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        total = 0.0
        for a, c in self.coeffs.items():
            term = c
            for xi, ai in zip(x, a):
                if ai:
                    term *= xi ** ai
            total += term
        return total


def compose_univariate(coeffs: Sequence[float], inner: SparsePoly) -> SparsePoly:
    """Evaluate a univariate polynomial (coeff list, ascending) at a
    multivariate argument, via Horner."""
    result = SparsePoly.constant(inner.d, 0.0)
    for c in reversed(list(coeffs)):
        result = result * inner + SparsePoly.constant(inner.d, c)
    return result


# ---------------------------------------------------------------------------
# Chebyshev polynomials of the first kind

MAX_CHEBYSHEV_EXPANSION = 64


def chebyshev_eval(n: int, z: float) -> float:
    """T_n(z) via the three-term recurrence (no expansion)."""
    if n < 0:
        raise ValueError("order must be >= 0")
    if n == 0:
        return 1.0
    prev, cur = 1.0, float(z)
    for _ in range(n - 1):
        prev, cur = cur, 2.0 * z * cur - prev
    return cur


def chebyshev_coeffs(n: int) -> list[float]:
    """Coefficient list (ascending) of T_n, for n <= 64."""
    if n > MAX_CHEBYSHEV_EXPANSION:
        raise ValueError(f"expansion limited to n <= {MAX_CHEBYSHEV_EXPANSION}")
    if n == 0:
        return [1.0]
    prev, cur = [1.0], [0.0, 1.0]
    for _ in range(n - 1):
        nxt = [0.0] + [2.0 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return cur


def chebyshev(n: int) -> SparsePoly:
    """T_n as an expanded univariate SparsePoly."""
    return SparsePoly(1, {(i,): c for i, c in enumerate(chebyshev_coeffs(n)) if c != 0.0})


# ---------------------------------------------------------------------------
# sign + log2-magnitude arithmetic for the rational construction

LogMag = tuple[int, float]  # (sign in {-1, 0, +1}, log2 |value|)

LM_ZERO: LogMag = (0, -math.inf)


def lm_from_float(v: float) -> LogMag:
    if v == 0.0:
        return LM_ZERO
    return (1 if v > 0 else -1, math.log2(abs(v)))


def lm_to_float(a: LogMag) -> float:
    s, l = a
    if s == 0:
        return 0.0
    if l > 1023:
        return math.inf * s
    return s * 2.0 ** l


def lm_mul(a: LogMag, b: LogMag) -> LogMag:
    if a[0] == 0 or b[0] == 0:
        return LM_ZERO
    return (a[0] * b[0], a[1] + b[1])


def lm_pow(a: LogMag, k: int) -> LogMag:
    if a[0] == 0:
        return LM_ZERO if k else (1, 0.0)
    sign = -1 if (a[0] < 0 and k % 2) else 1
    return (sign, a[1] * k)


def lm_sum(terms: Sequence[LogMag]) -> LogMag:
    live = [t for t in terms if t[0] != 0]
    if not live:
        return LM_ZERO
    top = max(l for _, l in live)
    acc = 0.0
    for s, l in live:
        acc += s * 2.0 ** (l - top)
    if acc == 0.0:
        return LM_ZERO
    return (1 if acc > 0 else -1, top + math.log2(abs(acc)))


# ---------------------------------------------------------------------------
# Construction I: Chebyshev powers

@dataclass(frozen=True)
class ChebyshevConstruction:
    """Polynomial that is >= 1/2 on the margin-gamma intersection of the
    halfspaces <v_i, x> >= 0 and <= -1/2 on the union of their complements.

    p(x) = m + 1/2 - sum_i T_s(1 - <v_i, x>)^r  with r = ceil(log2(2m)),
    s = ceil(sqrt(1/gamma)).
    """

    vs: tuple
    gamma: float
    r: int
    s: int
    expanded: Optional[SparsePoly]

    @property
    def degree(self) -> int:
        return self.r * self.s

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        total = len(self.vs) + 0.5
        for v in self.vs:
            total -= chebyshev_eval(self.s, 1.0 - float(v @ x)) ** self.r
        return total


def chebyshev_construction(vs, gamma: float, expand: bool = True) -> ChebyshevConstruction:
    vs = tuple(np.asarray(v, dtype=float) for v in vs)
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must be in (0, 1)")
    m = len(vs)
    r = math.ceil(math.log2(2 * m))
    s = math.ceil(math.sqrt(1.0 / gamma))
    expanded = None
    if expand:
        try:
            d = vs[0].shape[0]
            ts = chebyshev_coeffs(s) if s <= MAX_CHEBYSHEV_EXPANSION else None
            if ts is not None:
                p = SparsePoly.constant(d, m + 0.5)
                for v in vs:
                    inner = SparsePoly.linear(list(-v), constant=1.0)
                    p = p - compose_univariate(ts, inner) ** r
                expanded = p
        except TermCapExceeded:
            expanded = None
    return ChebyshevConstruction(vs=vs, gamma=gamma, r=r, s=s, expanded=expanded)


# ---------------------------------------------------------------------------
# Construction II: rational-function based

@dataclass(frozen=True)
class RationalConstructionParams:
    m: int
    gamma: float
    r: int = field(init=False)
    s: int = field(init=False)

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError("gamma must be in (0, 1)")
        # always recomputed from (m, gamma), never trusted from callers
        object.__setattr__(self, "r", 2 * math.ceil(math.log2(4 * self.m + 1) / 4) + 1)
        object.__setattr__(self, "s", math.ceil(math.log2(1.0 / self.gamma)))


def p_base_lm(n: int, z: float) -> LogMag:
    """P_n(z) = (z - 1) * prod_{i=1..n} (z - 2^i)^2, in log-magnitude form."""
    acc = lm_from_float(z - 1.0)
    for i in range(1, n + 1):
        acc = lm_mul(acc, lm_pow(lm_from_float(z - 2.0 ** i), 2))
    return acc


def ab_lm(n: int, k: int, z: float) -> tuple[LogMag, LogMag]:
    """(A_{n,k}(z), B_{n,k}(z)) where A = P^k - P(-z)^k, B = -P^k - P(-z)^k."""
    pk = lm_pow(p_base_lm(n, z), k)
    pmk = lm_pow(p_base_lm(n, -z), k)
    a = lm_sum([pk, (-pmk[0], pmk[1])])
    b = lm_sum([(-pk[0], pk[1]), (-pmk[0], pmk[1])])
    return a, b


def s_ratio(n: int, k: int, z: float) -> float:
    """S_{n,k}(z) = A_{n,k}(z) / B_{n,k}(z), returned in linear scale."""
    a, b = ab_lm(n, k, z)
    if b[0] == 0:
        raise ZeroDivisionError("B_{n,k} vanished")
    return lm_to_float((a[0] * b[0], a[1] - b[1]))


@dataclass(frozen=True)
class RationalConstruction:
    """The second halfspace-intersection polynomial, evaluated in
    sign + log2-magnitude form (its intermediates exceed double range).

    q(x) = sum_i A(z_i) prod_{j != i} B(z_j) - (m - 1/2) prod_j B(z_j)
    with z_j = <v_j, x> / gamma, and p(x) = 2^(1 - s(s+1) r m) q(x).
    """

    vs: tuple
    params: RationalConstructionParams
    expanded: Optional[SparsePoly]

    @property
    def degree_bound(self) -> int:
        p = self.params
        return (2 * p.s + 1) * p.r * p.m

    def q_surrogate(self, x) -> float:
        """Q(x) = sum_i S(z_i) - (m - 1/2); same sign as p on the unit ball
        and |p| >= |Q| there."""
        x = np.asarray(x, dtype=float)
        p = self.params
        total = -(p.m - 0.5)
        for v in self.vs:
            total += s_ratio(p.s, p.r, float(v @ x) / self.gamma)
        return total

    @property
    def gamma(self) -> float:
        return self.params.gamma

    def __call__(self, x) -> LogMag:
        """p(x) as (sign, log2 magnitude)."""
        x = np.asarray(x, dtype=float)
        p = self.params
        bs = []
        zs = []
        for v in self.vs:
            z = float(v @ x) / p.gamma
            zs.append(z)
            bs.append(ab_lm(p.s, p.r, z)[1])
        # q = (sum_i S(z_i) - (m - 1/2)) * prod_j B(z_j)
        q_lin = -(p.m - 0.5)
        for z in zs:
            q_lin += s_ratio(p.s, p.r, z)
        acc = lm_from_float(q_lin)
        for b in bs:
            acc = lm_mul(acc, b)
        scale = (1, 1.0 - p.s * (p.s + 1) * p.r * p.m)
        return lm_mul(scale, acc)


def rational_construction(vs, gamma: float, expand: bool = False) -> RationalConstruction:
    vs = tuple(np.asarray(v, dtype=float) for v in vs)
    params = RationalConstructionParams(m=len(vs), gamma=gamma)
    expanded = None
    if expand:
        try:
            expanded = _expand_rational(vs, params)
        except (TermCapExceeded, OverflowError):
            expanded = None
    return RationalConstruction(vs=vs, params=params, expanded=expanded)


def _p_base_poly(n: int, inner: SparsePoly) -> SparsePoly:
    acc = inner - SparsePoly.constant(inner.d, 1.0)
    for i in range(1, n + 1):
        acc = acc * (inner - SparsePoly.constant(inner.d, 2.0 ** i)) ** 2
    return acc


def _expand_rational(vs, params: RationalConstructionParams) -> SparsePoly:
    d = vs[0].shape[0]
    m, r, s = params.m, params.r, params.s
    a_polys, b_polys = [], []
    for v in vs:
        inner = SparsePoly.linear(list(v / params.gamma))
        pk = _p_base_poly(s, inner) ** r
        pmk = _p_base_poly(s, inner.scale(-1.0)) ** r
        a_polys.append(pk - pmk)
        b_polys.append(pk.scale(-1.0) - pmk)
    q = SparsePoly(d)
    for i in range(m):
        term = a_polys[i]
        for j in range(m):
            if j != i:
                term = term * b_polys[j]
        q = q + term
    prod_b = SparsePoly.constant(d, 1.0)
    for b in b_polys:
        prod_b = prod_b * b
    q = q - prod_b.scale(m - 0.5)
    return q.scale(2.0 ** (1 - s * (s + 1) * r * m))


# ---------------------------------------------------------------------------
# embedding into the rational kernel's feature space

def embed_poly(p: SparsePoly) -> dict:
    """Coefficient vector c with <c, phi(x)> = p(x) as a finite sum.

    c_alpha = p_alpha * 2^{|alpha|/2} / sqrt(multinomial(alpha)).
    """
    c = {}
    for a, coeff in p.coeffs.items():
        n = sum(a)
        c[a] = coeff * 2.0 ** (n / 2.0) / math.sqrt(multinomial(a))
    return c


def embed_norm(c: dict) -> float:
    return math.sqrt(sum(v * v for v in c.values()))


def embed_dot(c: dict, x) -> float:
    """<c, phi(x)> over c's (finite) support."""
    from .kernels import feature_coordinate

    x = np.asarray(x, dtype=float)
    return sum(v * feature_coordinate(x, a) for a, v in c.items())
