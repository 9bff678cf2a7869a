"""Property suite for the polynomial machinery.

Each check returns a dict with at least {"pass": bool}; ``run_suite``
collects them all, and the ``verify-poly`` CLI subcommand dumps the result
as JSON. The acceptance tests call the individual checks directly.
"""

from __future__ import annotations

import math

import numpy as np

from .polynomials import (
    SparsePoly,
    chebyshev,
    chebyshev_construction,
    chebyshev_eval,
    lm_to_float,
    ab_lm,
    rational_construction,
    RationalConstructionParams,
    p_base_lm,
    s_ratio,
)

GRID_STEP = 1e-3
N_RANDOM_GRID = 1000


def check_chebyshev_cosine(n_max: int = 20, tol: float = 1e-9, seed: int = 0) -> dict:
    """T_n(cos t) = cos(n t) over random angles."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in range(n_max + 1):
        for t in rng.uniform(0.0, 2.0 * np.pi, size=100):
            worst = max(worst, abs(chebyshev_eval(n, math.cos(t)) - math.cos(n * t)))
    return {"pass": worst <= tol, "worst": worst, "tol": tol}


def check_chebyshev_bounded(n_max: int = 20, tol: float = 1e-12) -> dict:
    """|T_n| <= 1 on [-1, 1]."""
    zs = np.arange(-1.0, 1.0 + GRID_STEP, GRID_STEP)
    worst = 0.0
    for n in range(n_max + 1):
        vals = np.abs([chebyshev_eval(n, z) for z in zs])
        worst = max(worst, float(np.max(vals)) - 1.0)
    return {"pass": worst <= tol, "worst_excess": worst, "tol": tol}


def check_chebyshev_growth(n_max: int = 20, tol: float = 1e-9) -> dict:
    """T_n(z) >= 1 + n^2 (z - 1) on [1, 2]."""
    zs = np.arange(1.0, 2.0 + GRID_STEP, GRID_STEP)
    worst = 0.0
    for n in range(n_max + 1):
        for z in zs:
            gap = chebyshev_eval(n, z) - (1.0 + n * n * (z - 1.0))
            worst = min(worst, gap)
    return {"pass": worst >= -tol, "worst_gap": worst, "tol": tol}


def check_chebyshev_norm(n_max: int = 20) -> dict:
    """||T_n|| <= (1 + sqrt(2))^n on the expanded coefficients."""
    ok = True
    ratios = []
    for n in range(n_max + 1):
        bound = (1.0 + math.sqrt(2.0)) ** n
        nm = chebyshev(n).norm
        ratios.append(nm / bound)
        ok = ok and nm <= bound
    return {"pass": ok, "max_ratio": max(ratios)}


def _random_poly(rng, d: int, deg: int, terms: int) -> SparsePoly:
    coeffs = {}
    for _ in range(terms):
        alpha = tuple(int(a) for a in rng.multinomial(rng.integers(0, deg + 1), np.full(d, 1.0 / d)))
        coeffs[alpha] = float(rng.standard_normal())
    return SparsePoly(d, coeffs)


def check_norm_sum_lemma(trials: int = 50, seed: int = 1) -> dict:
    """||sum p_j|| <= sum ||p_j||."""
    rng = np.random.default_rng(seed)
    ok = True
    for _ in range(trials):
        d = int(rng.integers(1, 4))
        polys = [_random_poly(rng, d, 4, 6) for _ in range(int(rng.integers(2, 5)))]
        total = polys[0]
        for p in polys[1:]:
            total = total + p
        ok = ok and total.norm <= sum(p.norm for p in polys) + 1e-12
    return {"pass": ok}


def check_norm_product_lemma(trials: int = 50, seed: int = 2) -> dict:
    """||prod p_j||^2 <= n^(sum deg) * prod ||p_j||^2 for n factors."""
    rng = np.random.default_rng(seed)
    ok = True
    for _ in range(trials):
        d = int(rng.integers(1, 4))
        n = int(rng.integers(2, 4))
        polys = [_random_poly(rng, d, 3, 4) for _ in range(n)]
        prod = polys[0]
        for p in polys[1:]:
            prod = prod * p
        bound = n ** sum(p.degree for p in polys)
        for p in polys:
            bound *= p.norm ** 2
        ok = ok and prod.norm ** 2 <= bound * (1.0 + 1e-12)
    return {"pass": ok}


def check_norm_power_lemma(trials: int = 50, seed: int = 3) -> dict:
    """||p^n||^2 <= n^(n s) ||p||^(2n) for deg(p) <= s."""
    rng = np.random.default_rng(seed)
    ok = True
    for _ in range(trials):
        d = int(rng.integers(1, 3))
        p = _random_poly(rng, d, 3, 4)
        s = max(p.degree, 1)
        n = int(rng.integers(2, 4))
        ok = ok and (p ** n).norm ** 2 <= n ** (n * s) * p.norm ** (2 * n) * (1.0 + 1e-12)
    return {"pass": ok}


# ---------------------------------------------------------------------------
# region sampling shared by the sign-condition checks

def sample_halfspace_directions(rng, m: int, d: int) -> list[np.ndarray]:
    """m unit vectors clustered enough that the positive region is nonempty."""
    anchor = rng.standard_normal(d)
    anchor /= np.linalg.norm(anchor)
    vs = []
    for _ in range(m):
        v = anchor + 0.5 * rng.standard_normal(d)
        vs.append(v / np.linalg.norm(v))
    return vs


def sample_region_points(rng, vs, gamma: float, n: int, positive: bool) -> np.ndarray:
    """n points of the unit ball with <v_i, x> >= gamma for all i (positive
    region) or <v_i, x> <= -gamma for at least one i (negative region)."""
    d = vs[0].shape[0]
    V = np.stack(vs)
    out = []
    while len(out) < n:
        batch = max(4 * (n - len(out)), 256)
        X = rng.standard_normal((batch, d))
        X *= (rng.uniform(0.0, 1.0, size=batch) ** (1.0 / d) / np.linalg.norm(X, axis=1))[:, None]
        S = X @ V.T
        mask = (S >= gamma).all(axis=1) if positive else (S <= -gamma).any(axis=1)
        out.extend(X[mask])
    return np.array(out[:n])


def check_chebyshev_sign_conditions(
    m: int, gamma: float, n_points: int = 10_000, d: int = 3, seed: int = 4, tol: float = 1e-9
) -> dict:
    rng = np.random.default_rng(seed)
    vs = sample_halfspace_directions(rng, m, d)
    cons = chebyshev_construction(vs, gamma)
    pos = sample_region_points(rng, vs, gamma, n_points, positive=True)
    neg = sample_region_points(rng, vs, gamma, n_points, positive=False)
    viol_pos = sum(1 for x in pos if cons(x) < 0.5 - tol)
    viol_neg = sum(1 for x in neg if cons(x) > -0.5 + tol)
    return {
        "pass": viol_pos == 0 and viol_neg == 0,
        "violations_positive": viol_pos,
        "violations_negative": viol_neg,
        "m": m, "gamma": gamma, "r": cons.r, "s": cons.s,
    }


def check_rational_sign_conditions(
    m: int, gamma: float, n_points: int = 10_000, d: int = 3, seed: int = 5
) -> dict:
    """Sign conditions of the second construction, in log-magnitude form:
    on the positive region p >= 1/2, on the negative region p <= -1/2."""
    rng = np.random.default_rng(seed)
    vs = sample_halfspace_directions(rng, m, d)
    cons = rational_construction(vs, gamma)
    log_half = -1.0  # log2(1/2)
    slack = 1e-9
    pos = sample_region_points(rng, vs, gamma, n_points, positive=True)
    neg = sample_region_points(rng, vs, gamma, n_points, positive=False)
    viol_pos = sum(
        1 for x in pos
        if not (lambda sm: sm[0] > 0 and sm[1] >= log_half - slack)(cons(x))
    )
    viol_neg = sum(
        1 for x in neg
        if not (lambda sm: sm[0] < 0 and sm[1] >= log_half - slack)(cons(x))
    )
    return {
        "pass": viol_pos == 0 and viol_neg == 0,
        "violations_positive": viol_pos,
        "violations_negative": viol_neg,
        "m": m, "gamma": gamma, "r": cons.params.r, "s": cons.params.s,
    }


def check_chebyshev_expanded_norm(m: int = 2, gamma: float = 0.2, seed: int = 6) -> dict:
    """||p|| <= (188 r s)^(r s / 2) for the expanded first construction."""
    rng = np.random.default_rng(seed)
    vs = sample_halfspace_directions(rng, m, 3)
    cons = chebyshev_construction(vs, gamma, expand=True)
    if cons.expanded is None:
        return {"pass": False, "reason": "expansion unavailable"}
    rs = cons.r * cons.s
    log_bound = (rs / 2.0) * math.log2(188.0 * rs)
    log_norm = math.log2(cons.expanded.norm)
    return {"pass": log_norm <= log_bound, "log2_norm": log_norm, "log2_bound": log_bound}


def check_s_ratio_range(m: int, gamma: float) -> dict:
    """S_{s,r}(z) in [1, 1 + 1/(2m)] on [1, 2^s]."""
    params = RationalConstructionParams(m=m, gamma=gamma)
    s, r = params.s, params.r
    rng = np.random.default_rng(7)
    zs = np.concatenate([
        np.arange(1.0, 2.0 ** s + GRID_STEP, GRID_STEP),
        rng.uniform(1.0, 2.0 ** s, size=N_RANDOM_GRID),
    ])
    lo = min(s_ratio(s, r, z) for z in zs)
    hi = max(s_ratio(s, r, z) for z in zs)
    ok = lo >= 1.0 - 1e-9 and hi <= 1.0 + 1.0 / (2 * m) + 1e-9
    return {"pass": ok, "min": lo, "max": hi, "upper": 1.0 + 1.0 / (2 * m)}


def check_b_lower_bound(m: int, gamma: float) -> dict:
    """B_{s,r}(z) >= (1 - 1/(4m+1)) 2^(s(s+1)r) on [-2^s, 2^s]."""
    params = RationalConstructionParams(m=m, gamma=gamma)
    s, r = params.s, params.r
    rng = np.random.default_rng(8)
    zs = np.concatenate([
        np.arange(-(2.0 ** s), 2.0 ** s + GRID_STEP, GRID_STEP),
        rng.uniform(-(2.0 ** s), 2.0 ** s, size=N_RANDOM_GRID),
    ])
    log_floor = math.log2(1.0 - 1.0 / (4 * m + 1)) + s * (s + 1) * r
    worst = math.inf
    for z in zs:
        b = ab_lm(s, r, z)[1]
        if b[0] <= 0:
            return {"pass": False, "reason": f"B not positive at z={z}"}
        worst = min(worst, b[1])
    return {"pass": worst >= log_floor - 1e-9, "min_log2_B": worst, "log2_floor": log_floor}


def check_p_base_properties(n_max: int = 6) -> dict:
    """0 <= 4 P_n(z) <= -P_n(-z) on [1, 2^n] and -P_n(-z) >= 2^(n(n+1)) for
    z >= 0."""
    ok = True
    for n in range(n_max + 1):
        zs = np.linspace(1.0, 2.0 ** n, 2000)
        for z in zs:
            p = lm_to_float(p_base_lm(n, z)) if n <= 6 else None
            pm = p_base_lm(n, -z)
            if p is None:
                continue
            neg = -lm_to_float(pm) if pm[1] < 300 else math.inf
            if not (0.0 <= 4.0 * p <= neg * (1 + 1e-9) + 1e-12):
                ok = False
        for z in np.linspace(0.0, 2.0 ** n, 2000):
            pm = p_base_lm(n, -z)
            if pm[0] >= 0 or pm[1] < n * (n + 1) - 1e-9:
                ok = False
    return {"pass": ok}


def run_suite(fast: bool = False) -> dict:
    """All property checks; ``fast`` shrinks the sign-condition sampling."""
    n_pts = 1000 if fast else 10_000
    results = {
        "chebyshev_cosine": check_chebyshev_cosine(),
        "chebyshev_bounded": check_chebyshev_bounded(),
        "chebyshev_growth": check_chebyshev_growth(),
        "chebyshev_norm": check_chebyshev_norm(),
        "norm_sum_lemma": check_norm_sum_lemma(),
        "norm_product_lemma": check_norm_product_lemma(),
        "norm_power_lemma": check_norm_power_lemma(),
        "chebyshev_expanded_norm": check_chebyshev_expanded_norm(),
        "p_base_properties": check_p_base_properties(),
    }
    for m in (2, 3):
        for gamma in (0.2, 0.1):
            key = f"m{m}_g{gamma}"
            results[f"chebyshev_signs_{key}"] = check_chebyshev_sign_conditions(m, gamma, n_pts)
            results[f"rational_signs_{key}"] = check_rational_sign_conditions(m, gamma, n_pts)
            results[f"s_ratio_range_{key}"] = check_s_ratio_range(m, gamma)
            results[f"b_lower_bound_{key}"] = check_b_lower_bound(m, gamma)
    results["all_pass"] = all(
        v.get("pass", False) for k, v in results.items() if isinstance(v, dict)
    )
    return results
