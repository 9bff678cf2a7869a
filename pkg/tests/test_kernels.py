import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from banditsep.kernels import (
    MAX_FEATURE_DEGREE,
    feature_coordinate,
    gram_matrix,
    linear_kernel,
    make_kernel,
    multi_indices,
    multinomial,
    polynomial_kernel,
    rational_kernel,
    truncated_kernel,
)

unit_vectors = arrays(
    float, 3, elements=st.floats(-0.5, 0.5, allow_nan=False)
)


class TestRationalKernel:
    def test_at_origin(self):
        assert rational_kernel(np.zeros(2), np.zeros(2)) == 1.0

    def test_unit_norm_self_value(self):
        x = np.array([1.0, 0.0])
        assert rational_kernel(x, x) == 2.0

    def test_orthogonal_inputs(self):
        assert rational_kernel(np.array([0.6, 0.0]), np.array([0.0, 0.8])) == 1.0

    def test_domain_error(self):
        x = np.array([1.5, 0.0])
        with pytest.raises(ValueError):
            rational_kernel(x, x)

    def test_matrix_broadcast(self):
        X = np.array([[1.0, 0.0], [0.0, 0.0]])
        vals = rational_kernel(X, np.array([1.0, 0.0]))
        assert np.array_equal(vals, [2.0, 1.0])

    @settings(max_examples=100, deadline=None)
    @given(unit_vectors, unit_vectors)
    def test_symmetry_exact(self, x, xp):
        assert rational_kernel(x, xp) == rational_kernel(xp, x)

    @settings(max_examples=100, deadline=None)
    @given(unit_vectors)
    def test_diagonal_cap_on_unit_ball(self, x):
        n = np.linalg.norm(x)
        if n > 0:
            x = x / max(1.0, n)
        assert rational_kernel(x, x) <= 2.0 + 1e-12


def test_other_kernels_and_registry():
    x, xp = np.array([1.0, 2.0]), np.array([3.0, -1.0])
    assert linear_kernel(x, xp) == 1.0
    assert polynomial_kernel(x, xp, degree=2) == 4.0
    assert make_kernel("linear")(x, xp) == 1.0
    assert make_kernel("poly", degree=2)(x, xp) == 4.0
    assert make_kernel("rational")(np.zeros(2), np.zeros(2)) == 1.0
    with pytest.raises(ValueError):
        make_kernel("gaussian")


class TestFeatureMap:
    def test_empty_multi_index(self):
        assert feature_coordinate(np.array([3.0, -2.0]), (0, 0)) == 1.0

    def test_univariate(self):
        # single variable: coefficient is t^n / 2^(n/2)
        for n in range(6):
            got = feature_coordinate(np.array([0.7]), (n,))
            assert got == pytest.approx(0.7 ** n * 2.0 ** (-n / 2.0))

    def test_mixed_pair(self):
        a, b = 0.3, -0.4
        got = feature_coordinate(np.array([a, b]), (1, 1))
        assert got == pytest.approx(a * b / math.sqrt(2.0))

    def test_validation(self):
        with pytest.raises(ValueError):
            feature_coordinate(np.array([1.0]), (1, 1))
        with pytest.raises(ValueError):
            feature_coordinate(np.array([1.0]), (-1,))

    def test_multinomial_overflow_cap(self):
        with pytest.raises(OverflowError):
            multinomial((MAX_FEATURE_DEGREE + 1,))
        assert multinomial((2, 1)) == pytest.approx(3.0)


class TestMultiIndices:
    def test_counts(self):
        # |alpha| <= n in d variables: C(d + n, n) indices
        idx = list(multi_indices(3, 4))
        assert len(idx) == math.comb(7, 4)
        assert len(set(idx)) == len(idx)

    def test_graded_order(self):
        idx = list(multi_indices(2, 3))
        grades = [sum(a) for a in idx]
        assert grades == sorted(grades)
        assert idx[0] == (0, 0)


class TestTruncatedKernel:
    def test_degree_zero(self):
        assert truncated_kernel(np.array([0.9]), np.array([0.9]), 0) == 1.0

    def test_geometric_partial_sum(self):
        got = truncated_kernel(np.array([1.0]), np.array([1.0]), 3)
        assert got == pytest.approx(1.875)

    def test_matches_explicit_feature_sum(self):
        rng = np.random.default_rng(0)
        x = rng.uniform(-0.5, 0.5, size=2)
        xp = rng.uniform(-0.5, 0.5, size=2)
        D = 6
        explicit = sum(
            feature_coordinate(x, a) * feature_coordinate(xp, a)
            for a in multi_indices(2, D)
        )
        assert truncated_kernel(x, xp, D) == pytest.approx(explicit, abs=1e-12)

    def test_tail_bound_agreement(self):
        rng = np.random.default_rng(1)
        for _ in range(200):
            x = rng.standard_normal(3)
            x *= rng.uniform(0, 1) / np.linalg.norm(x)
            xp = rng.standard_normal(3)
            xp *= rng.uniform(0, 1) / np.linalg.norm(xp)
            h = abs(float(x @ xp)) / 2.0
            bound = h ** 61 / (1.0 - h) if h < 1 else np.inf
            err = abs(truncated_kernel(x, xp, 60) - rational_kernel(x, xp))
            assert err <= bound + 1e-12


class TestGram:
    def test_single_origin_point(self):
        G, rep = gram_matrix([np.zeros(2)])
        assert np.array_equal(G, [[1.0]]) and rep["psd"]

    def test_duplicate_point_rank_one(self):
        p = np.array([0.5, 0.1])
        G, rep = gram_matrix([p, p])
        assert rep["psd"]
        assert abs(np.linalg.det(G)) < 1e-10

    def test_random_points_psd(self):
        rng = np.random.default_rng(2)
        pts = []
        for _ in range(50):
            v = rng.standard_normal(4)
            pts.append(v * rng.uniform(0, 0.99) / np.linalg.norm(v))
        G, rep = gram_matrix(pts)
        assert rep["psd"]
        assert np.array_equal(G, G.T)
