"""End-to-end acceptance suite.

Each test prints a single PASS/FAIL line (run pytest with -s to see them
live). These are the binding checks for the whole artifact; tolerances are
fixed and must not be loosened.
"""

import itertools
import math
import time

import mpmath
import numpy as np
import pytest
from mpmath import mpf

from banditsep.core import (
    ExampleStream,
    LabeledExample,
    run_bandit_session,
    run_fullinfo_session,
    verify_strong_separability,
)
from banditsep.bounds import kernelized_weak_bound, margin_transform
from banditsep.instances import (
    IgnorantAdversary,
    brute_force_set_splitting,
    check_weak_labeling,
    gen_packing_pairs,
    gen_sector_dataset,
    gen_wedge_dataset,
    grid_search_weights,
    is_valid_splitting,
    reduce_set_splitting,
    splitting_to_weights,
    weights_to_splitting,
)
from banditsep.kernels import (
    feature_coordinate,
    gram_matrix,
    linear_kernel,
    rational_kernel,
    truncated_kernel,
)
from banditsep.learners import (
    KernelizedLearner,
    MulticlassPerceptron,
    NearestNeighborLearner,
    OvaLearner,
)
from banditsep.polynomials import SparsePoly, embed_dot, embed_norm, embed_poly
from banditsep import polyprops

SEEDS_20 = tuple(range(20))


def _report(num: int, ok: bool, detail: str):
    print(f"\nACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num}: {detail}"


def test_criterion_1_strong_case_bound():
    """One-vs-all learner on strong wedge data: update cap and mistake cap."""
    worst_updates, mistakes, worst_time = 0, [], 0.0
    for seed in SEEDS_20:
        stream = gen_wedge_dataset("strong", 100_000, seed)
        learner = OvaLearner(3, 3)
        t0 = time.perf_counter()
        trace = run_bandit_session(learner, stream, seed)
        worst_time = max(worst_time, time.perf_counter() - t0)
        worst_updates = max(worst_updates, learner.updates)
        mistakes.append(trace.mistakes)
    mean_m = sum(mistakes) / len(mistakes)
    ok = worst_updates <= 1600 and mean_m <= 3200 and worst_time < 10.0
    _report(1, ok, f"max updates {worst_updates} <= 1600, mean mistakes "
                   f"{mean_m:.1f} <= 3200, max runtime {worst_time:.2f}s < 10s")


def test_criterion_2_perceptron_bound():
    """Full-information perceptron on weak wedge data: deterministic cap."""
    worst = 0
    for seed in SEEDS_20:
        stream = gen_wedge_dataset("weak", 100_000, seed)
        trace = run_fullinfo_session(MulticlassPerceptron(3, 3), stream)
        worst = max(worst, trace.mistakes)
    ok = worst <= 800
    _report(2, ok, f"max mistakes {worst} <= 800 over 20 runs")


def test_criterion_3_kernelized_plateau():
    """Rational-kernel learner plateaus on weak data; the linear learner
    keeps erring in the final window."""
    T = 200_000
    window_start = int(0.9 * T)
    zero_seeds = 0
    kern_window_total, ova_window_total = 0, 0
    worst_time = 0.0
    for seed in SEEDS_20:
        stream = gen_wedge_dataset("weak", T, seed)
        kern = KernelizedLearner(3, 3, rational_kernel)
        t0 = time.perf_counter()
        ktr = run_bandit_session(kern, stream, seed)
        worst_time = max(worst_time, time.perf_counter() - t0)
        kcum = ktr.cumulative()
        kwin = int(kcum[-1] - kcum[window_start - 1])
        zero_seeds += kwin == 0
        kern_window_total += kwin
        otr = run_bandit_session(OvaLearner(3, 3), stream, seed)
        ocum = otr.cumulative()
        ova_window_total += int(ocum[-1] - ocum[window_start - 1])
    ok = (
        zero_seeds >= 18
        and ova_window_total >= 100 * max(kern_window_total, 1)
        and worst_time < 300.0
    )
    _report(3, ok, f"{zero_seeds}/20 seeds with zero final-10% mistakes, "
                   f"window totals ova {ova_window_total} vs kernelized "
                   f"{kern_window_total}, max runtime {worst_time:.1f}s < 300s")


def test_criterion_4_linear_kernel_oracle_equivalence():
    """Kernelized learner with the linear kernel reproduces the primal
    learner's predictions exactly."""
    rng = np.random.default_rng(42)
    mismatches = 0
    for trial in range(50):
        K, d, T = int(rng.integers(2, 6)), int(rng.integers(2, 8)), 1000
        X = rng.standard_normal((T, d))
        X /= np.maximum(1.0, np.linalg.norm(X, axis=1))[:, None]
        ex = [LabeledExample(x=X[t], y=int(rng.integers(1, K + 1))) for t in range(T)]
        stream = ExampleStream(K=K, d=d, examples=ex)
        t1 = run_bandit_session(OvaLearner(K, d), stream, seed=trial)
        t2 = run_bandit_session(KernelizedLearner(K, d, linear_kernel), stream, seed=trial)
        if [r[1] for r in t1.records] != [r[1] for r in t2.records]:
            mismatches += 1
    _report(4, mismatches == 0, f"{mismatches}/50 streams with prediction mismatches")


def test_criterion_5_polynomial_suites():
    """Chebyshev properties, both constructions' sign conditions, the
    expanded-norm inequality, and the norm lemmas."""
    results = {
        "cosine": polyprops.check_chebyshev_cosine(),
        "bounded": polyprops.check_chebyshev_bounded(),
        "growth": polyprops.check_chebyshev_growth(),
        "norm": polyprops.check_chebyshev_norm(),
        "expanded_norm": polyprops.check_chebyshev_expanded_norm(m=2, gamma=0.2),
        "sum_lemma": polyprops.check_norm_sum_lemma(),
        "product_lemma": polyprops.check_norm_product_lemma(),
        "power_lemma": polyprops.check_norm_power_lemma(),
    }
    for m, gamma in itertools.product((2, 3), (0.2, 0.1)):
        results[f"cheb_signs_{m}_{gamma}"] = polyprops.check_chebyshev_sign_conditions(
            m, gamma, n_points=10_000)
        results[f"rat_signs_{m}_{gamma}"] = polyprops.check_rational_sign_conditions(
            m, gamma, n_points=10_000)
    failures = [k for k, v in results.items() if not v["pass"]]
    _report(5, not failures, f"failed sub-checks: {failures or 'none'}")


def test_criterion_6_embedding_norm_bound():
    """Feature-space coefficients reproduce the polynomial and respect the
    2^(deg/2) norm inflation bound."""
    rng = np.random.default_rng(6)
    worst_err, norm_ok = 0.0, True
    for _ in range(100):
        d = int(rng.integers(1, 4))
        coeffs = {}
        for _ in range(int(rng.integers(2, 10))):
            a = tuple(int(v) for v in rng.multinomial(
                int(rng.integers(0, 7)), np.full(d, 1.0 / d)))
            coeffs[a] = float(rng.standard_normal())
        p = SparsePoly(d, coeffs)
        c = embed_poly(p)
        norm_ok = norm_ok and embed_norm(c) <= 2.0 ** (p.degree / 2.0) * p.norm * (1 + 1e-12)
        for _ in range(100):
            x = rng.standard_normal(d)
            x /= max(1.0, np.linalg.norm(x))
            worst_err = max(worst_err, abs(embed_dot(c, x) - p(x)))
    ok = worst_err <= 1e-8 and norm_ok
    _report(6, ok, f"max reconstruction error {worst_err:.2e} <= 1e-8, "
                   f"norm bound {'held' if norm_ok else 'violated'}")


def test_criterion_7_kernel_identity():
    """Degree-60 truncation agrees with the closed form; Gram matrix PSD."""
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        x = rng.standard_normal(4)
        x *= rng.uniform(0.0, 0.9) / np.linalg.norm(x)
        xp = rng.standard_normal(4)
        xp *= rng.uniform(0.0, 0.9) / np.linalg.norm(xp)
        worst = max(worst, abs(truncated_kernel(x, xp, 60) - rational_kernel(x, xp)))
    pts = []
    for _ in range(50):
        v = rng.standard_normal(4)
        pts.append(v * rng.uniform(0.0, 0.99) / np.linalg.norm(v))
    _, rep = gram_matrix(pts)
    ok = worst <= 1e-6 and rep["psd"]
    _report(7, ok, f"max truncation error {worst:.2e} <= 1e-6, Gram PSD={rep['psd']}")


def test_criterion_8_nearest_neighbor():
    """Store stays a packing of bounded size; mean mistakes under the cap."""
    cap_store = (2.0 / 0.3 + 1.0) ** 2  # ~58.8
    cap_mean = 2.0 * cap_store          # ~117.6
    worst_store, mistakes = 0, []
    for seed in SEEDS_20:
        stream = gen_sector_dataset(10_000, 0.3, seed)
        learner = NearestNeighborLearner(3, 2, gamma=0.3)
        trace = run_bandit_session(learner, stream, seed)
        worst_store = max(worst_store, learner.store_size)
        mistakes.append(trace.mistakes)
    mean_m = sum(mistakes) / len(mistakes)
    ok = worst_store <= cap_store and mean_m <= cap_mean
    _report(8, ok, f"max store {worst_store} <= {cap_store:.1f}, "
                   f"mean mistakes {mean_m:.1f} <= {cap_mean:.1f}")


def test_criterion_9_ignorant_adversary():
    """The adaptive adversary forces many mistakes on the (ignorant)
    nearest-neighbor learner while staying strongly separable."""
    gamma, d, T, runs = 1e-5, 5, 10_000, 50
    U, V = gen_packing_pairs(gamma, T, d, seed=0)
    mistakes, separable = [], True
    for run in range(runs):
        adv = IgnorantAdversary(U, V, T, gamma)
        learner = NearestNeighborLearner(2, d, gamma=gamma)
        trace = run_bandit_session(learner, adv.stream(), seed=run)
        mistakes.append(trace.mistakes)
        ok, _ = verify_strong_separability(adv.emitted, adv.witness(), gamma)
        separable = separable and ok
    mean_m = sum(mistakes) / len(mistakes)
    ok = mean_m >= 10.0 and separable
    _report(9, ok, f"mean mistakes {mean_m:.1f} >= 10, all runs strongly "
                   f"separable: {separable}")


def test_criterion_10_reduction():
    """Worked instance reproduced exactly; soundness on all small instances."""
    inst = reduce_set_splitting([1, 2, 3], [[1, 2], [2, 3]])
    expected = (
        ((0, 0, 0, 1), 3), ((1, 0, 0, 1), -3), ((0, 1, 0, 1), -3),
        ((0, 0, 1, 1), -3), ((1, 1, 0, 1), 3), ((0, 1, 1, 1), 3),
    )
    exact = inst.samples == expected
    forward_ok = backward_ok = True
    for N in (1, 2, 3, 4):
        S = list(range(1, N + 1))
        pool = [list(c) for r in range(1, N + 1)
                for c in itertools.combinations(S, r)]
        for n_c in range(0, 4):
            for C in itertools.combinations(pool, n_c):
                C = [list(c) for c in C]
                inst_nc = reduce_set_splitting(S, C)
                split = brute_force_set_splitting(S, C)
                if split is not None:
                    try:
                        W = splitting_to_weights(split[0], split[1], inst_nc)
                        forward_ok = forward_ok and check_weak_labeling(inst_nc, W)[0]
                    except ValueError:
                        forward_ok = False
                else:
                    forward_ok = forward_ok and not grid_search_weights(
                        inst_nc, random_tries=0)
                for W in grid_search_weights(inst_nc, random_tries=20):
                    try:
                        S1, S2 = weights_to_splitting(W, inst_nc)
                    except ValueError:
                        backward_ok = False
                        continue
                    backward_ok = backward_ok and is_valid_splitting(S1, S2, S, C)
    ok = exact and forward_ok and backward_ok
    _report(10, ok, f"worked instance exact={exact}, forward={forward_ok}, "
                    f"backward={backward_ok}")


def test_criterion_11_bounds_oracle():
    """Margin transform and kernelized bound against 60-digit evaluation."""
    mpmath.mp.dps = 60
    log2 = lambda x: mpmath.log(x, 2)
    worst = 0.0
    for K in (2, 3, 5, 10):
        for gamma in (0.5, 0.1, 0.05, 0.01):
            Km, g = mpf(K), mpf(gamma)
            a = int(mpmath.ceil(log2(2 * Km - 2)))
            b = int(mpmath.ceil(mpmath.sqrt(2 / g)))
            o1 = -(mpf(a) * b / 2) * log2(376 * a * b) - log2(2 * mpmath.sqrt(Km))
            r = 2 * int(mpmath.ceil(log2(4 * Km - 3) / 4)) + 1
            s = int(mpmath.ceil(log2(2 / g)))
            base = (s + 1) + log2(mpf(r) * (Km - 1) * (4 * s + 2))
            o2 = -((mpf(s) + mpf(1) / 2) * r * (Km - 1)) * base - (
                log2(4 * mpmath.sqrt(Km) * (4 * Km - 5)) + (Km - 1))
            mt = margin_transform(K, gamma)
            kb = kernelized_weak_bound(K, gamma)
            o_kb = log2(Km - 1) + 3 - 2 * max(o1, o2)
            for got, want in ((mt.log2_gamma1, o1), (mt.log2_gamma2, o2),
                              (kb.log2, o_kb)):
                worst = max(worst, abs(got - float(want)) / abs(float(want)))
    ok = worst <= 1e-6
    _report(11, ok, f"worst relative log2 error {worst:.2e} <= 1e-6")
