"""Closed-form bounds against an independent high-precision evaluation."""

import math

import mpmath
import pytest
from mpmath import mpf

from banditsep.bounds import (
    BoundValue,
    bound_report,
    expected_mistakes_strong_lower,
    expected_mistakes_strong_upper,
    fullinfo_mistakes_lower,
    ignorant_mistakes_lower,
    kernelized_weak_bound,
    margin_transform,
    nn_mistakes_upper,
    perceptron_mistakes_upper,
    updates_strong_upper,
)

mpmath.mp.dps = 60

KS = (2, 3, 5, 10)
GAMMAS = (0.5, 0.1, 0.05, 0.01)


def _log2(x):
    return mpmath.log(x, 2)


def _oracle_transform(K, gamma):
    K, g = mpf(K), mpf(gamma)
    a = int(mpmath.ceil(_log2(2 * K - 2)))
    b = int(mpmath.ceil(mpmath.sqrt(2 / g)))
    lg1 = -(mpf(a) * b / 2) * _log2(376 * a * b) - _log2(2 * mpmath.sqrt(K))
    r = 2 * int(mpmath.ceil(_log2(4 * K - 3) / 4)) + 1
    s = int(mpmath.ceil(_log2(2 / g)))
    base = (s + 1) + _log2(mpf(r) * (K - 1) * (4 * s + 2))
    lg2 = -((mpf(s) + mpf(1) / 2) * r * (K - 1)) * base - (
        _log2(4 * mpmath.sqrt(K) * (4 * K - 5)) + (K - 1)
    )
    return lg1, lg2


@pytest.mark.parametrize("K", KS)
@pytest.mark.parametrize("gamma", GAMMAS)
def test_margin_transform_matches_oracle(K, gamma):
    mt = margin_transform(K, gamma)
    o1, o2 = _oracle_transform(K, gamma)
    assert abs(mt.log2_gamma1 - float(o1)) <= 1e-6 * abs(float(o1))
    assert abs(mt.log2_gamma2 - float(o2)) <= 1e-6 * abs(float(o2))
    assert mt.log2_gamma == max(mt.log2_gamma1, mt.log2_gamma2)


@pytest.mark.parametrize("K", KS)
@pytest.mark.parametrize("gamma", GAMMAS)
def test_kernelized_weak_bound_matches_oracle(K, gamma):
    o1, o2 = _oracle_transform(K, gamma)
    oracle = float(_log2(K - 1) + 3 - 2 * max(o1, o2))
    got = kernelized_weak_bound(K, gamma).log2
    assert abs(got - oracle) <= 1e-6 * abs(oracle)


@pytest.mark.parametrize("K", KS)
@pytest.mark.parametrize("gamma", GAMMAS)
def test_closed_forms_match_oracle(K, gamma):
    R = 1.0
    # the floor terms are sensitive to the difference between the double
    # 0.1 and the real number 1/10; the oracle works with the exact
    # rational the double literal denotes in source
    from fractions import Fraction

    ratio2 = (1 / mpmath.mpmathify(Fraction(str(gamma)))) ** 2
    cases = [
        (expected_mistakes_strong_upper(K, R, gamma),
         _log2((K - 1) * mpmath.floor(4 * ratio2))),
        (updates_strong_upper(R, gamma), _log2(mpmath.floor(4 * ratio2))),
        (expected_mistakes_strong_lower(K, R, gamma),
         _log2(mpf(K - 1) / 2 * mpmath.floor(ratio2 / 4))),
        (perceptron_mistakes_upper(R, gamma), _log2(mpmath.floor(2 * ratio2))),
        (fullinfo_mistakes_lower(R, gamma), _log2(mpmath.floor(ratio2) / 2)),
        (nn_mistakes_upper(K, R, gamma, 4),
         _log2((K - 1) * (2 / mpf(gamma) + 1) ** 4)),
    ]
    for got, want in cases:
        assert abs(got.log2 - float(want)) <= 1e-6 * max(1.0, abs(float(want)))


def test_ignorant_lower_oracle():
    for gamma in (1e-3, 1e-5):
        for d in (3, 5, 9):
            want = float(_log2(mpf(1) / 10 * (1 / (160 * mpf(gamma))) ** (mpf(d - 2) / 4)))
            got = ignorant_mistakes_lower(gamma, d).log2
            assert abs(got - want) <= 1e-6 * max(1.0, abs(want))


def test_reference_values():
    # K=3, gamma=0.05, R=1: the standard example setting
    assert expected_mistakes_strong_upper(3, 1.0, 0.05).value == pytest.approx(3200)
    assert updates_strong_upper(1.0, 0.05).value == pytest.approx(1600)
    assert perceptron_mistakes_upper(1.0, 0.05).value == pytest.approx(800)
    # K=2, gamma=0.5: hand-checkable transform
    mt = margin_transform(2, 0.5)
    assert 2.0 ** mt.log2_gamma1 == pytest.approx(1.0 / 752.0 / (2.0 * math.sqrt(2.0)))
    assert kernelized_weak_bound(2, 0.5).log2 == pytest.approx(25.109, abs=1e-3)
    # K=3, gamma=0.05 parameter values inside the transform
    a = math.ceil(math.log2(2 * 3 - 2))
    assert a == 2
    r = 2 * math.ceil(math.log2(4 * 3 - 3) / 4) + 1
    s = math.ceil(math.log2(2.0 / 0.05))
    assert (r, s) == (3, 6)


def test_bound_value_reporting():
    assert BoundValue(log2=3.0).value == 8.0
    assert BoundValue(log2=-500.0).value is None
    assert "log2" in repr(BoundValue(log2=400.0))


def test_validation_errors():
    with pytest.raises(ValueError):
        expected_mistakes_strong_upper(1, 1.0, 0.1)
    with pytest.raises(ValueError):
        perceptron_mistakes_upper(1.0, -0.1)
    with pytest.raises(ValueError):
        perceptron_mistakes_upper(1.0, 2.0)  # margin beyond radius
    with pytest.raises(ValueError):
        nn_mistakes_upper(2, 1.0, 0.1, 0)
    with pytest.raises(ValueError):
        ignorant_mistakes_lower(0.1, 1)
    with pytest.raises(ValueError):
        margin_transform(2, 1.5)


def test_bound_report_shape():
    rep = bound_report(3, 1.0, 0.05, d=3)
    assert rep.strong_upper.value == pytest.approx(3200)
    assert rep.nn_upper is not None and rep.ignorant_lower is not None
    assert rep.transform.gamma_new is None or rep.transform.gamma_new > 0
    rep2 = bound_report(2, 1.0, 0.5)
    assert rep2.nn_upper is None and rep2.ignorant_lower is None
