from __future__ import annotations

import math

import numpy as np
import pytest

from prss_extropy.distributions import make_exponential, make_pareto, make_power, make_uniform
from prss_extropy.errors import AccuracyError, ConfigurationError, DomainError, ParameterDomainError
from prss_extropy.extropy import LambdaTransform, expected_lambda, extropy, gwe, gwe_srs, lambda_eval
from prss_extropy.weights import (
    make_constant_one,
    make_weight_odd_power,
    make_weight_power,
    weight_from_descriptor,
)


def test_power_weight_values():
    assert make_weight_power(0)(7.0) == 1.0
    assert make_weight_power(1)(3.0) == 3.0
    assert make_weight_power(2)(0.5) == 0.25
    assert make_weight_power(0.5)(4.0) == pytest.approx(2.0)
    with pytest.raises(ParameterDomainError):
        make_weight_power(-1)


def test_weight_flags_on_grid():
    x = np.linspace(0, 5, 201)
    for m in (0, 0.5, 1, 2, 3):
        w = make_weight_power(m)
        assert w.non_negative and np.all(w(x) >= 0)
        assert w.increasing and np.all(np.diff(w(x)) >= 0)
        assert w.odd == (m in (1, 3))
    xs = np.linspace(-3, 3, 121)
    for k in (1, 3, 5):
        w = make_weight_odd_power(k)
        assert w.odd and not w.non_negative
        np.testing.assert_allclose(w(-xs), -w(xs), rtol=1e-15)
    for bad in (2, 0, -1, 1.5):
        with pytest.raises(ParameterDomainError):
            make_weight_odd_power(bad)


def test_weight_descriptors():
    assert weight_from_descriptor({"kind": "power", "m": 2})(3.0) == 9.0
    assert weight_from_descriptor({"kind": "constant_one"})(3.0) == 1.0
    assert weight_from_descriptor({"kind": "odd_power", "m": 3})(-2.0) == -8.0
    for bad in ({"kind": "log"}, {"kind": "power"}, {"kind": "odd_power", "m": 2}, {"m": 1}):
        with pytest.raises(ConfigurationError):
            weight_from_descriptor(bad)


def test_lambda_eval():
    t = LambdaTransform(make_uniform(), make_constant_one())
    assert lambda_eval(t, 0.7) == 1.0
    u = np.linspace(0.001, 0.999, 97)
    assert np.all(t(u) == 1.0)
    for bad in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(DomainError):
            lambda_eval(t, bad)


def test_lambda_exponential_formula():
    # Lambda(u) = (-1)^m (1-u) ln(1-u)^m / lam^(m-1) for Exp(lam), w = x^m
    u = np.linspace(0.01, 0.99, 31)
    for lam in (0.5, 1.0, 2.0):
        for m in (0, 1, 2, 3):
            got = LambdaTransform(make_exponential(lam), make_weight_power(m))(u)
            want = (-1) ** m * (1 - u) * np.log1p(-u) ** m / lam ** (m - 1)
            np.testing.assert_allclose(got, want, rtol=1e-12)
    t = LambdaTransform(make_exponential(1), make_weight_power(1))
    assert lambda_eval(t, 1 - math.exp(-1)) == pytest.approx(math.exp(-1), rel=1e-12)


def test_lambda_pareto_limit_at_zero():
    for alpha in (2.0, 3.0):
        t = LambdaTransform(make_pareto(alpha), make_weight_power(1))
        assert lambda_eval(t, 1e-12) == pytest.approx(alpha, rel=1e-9)


def test_extropy_values():
    assert extropy(make_uniform()) == pytest.approx(-0.5, abs=1e-10)
    assert extropy(make_exponential(1)) == pytest.approx(-0.25, abs=1e-10)
    assert extropy(make_uniform(0, 2)) == pytest.approx(-0.25, abs=1e-10)


def test_gwe_values():
    assert gwe(make_exponential(1), make_weight_power(1)) == pytest.approx(-0.125, abs=1e-9)
    assert gwe(make_uniform(), make_weight_power(1)) == pytest.approx(-0.25, abs=1e-10)
    for m in (1, 2, 3, 4.5):
        assert gwe(make_uniform(), make_weight_power(m)) == pytest.approx(-1 / (2 * (m + 1)), rel=1e-10)


def test_gwe_divergent_pareto():
    # int x^m alpha^2 x^(-2 alpha - 2) dx diverges once m >= 2 alpha + 1
    with pytest.raises(AccuracyError):
        gwe(make_pareto(1), make_weight_power(3))
    assert gwe(make_pareto(1), make_weight_power(2)) == pytest.approx(-0.5 * 1 / 1, rel=1e-8)


def test_gwe_srs():
    d, w = make_exponential(1), make_weight_power(1)
    assert gwe_srs(d, w, 1).to_float() == pytest.approx(gwe(d, w), rel=1e-12)
    assert gwe_srs(make_uniform(), make_constant_one(), 2).to_float() == pytest.approx(-0.5, rel=1e-10)
    assert gwe_srs(d, w, 2).to_float() == pytest.approx(-1 / 32, rel=1e-8)
    big = gwe_srs(make_exponential(0.001), make_weight_power(3), 200)
    assert big.sign == -1 and math.isfinite(big.log_magnitude)
    with pytest.raises(DomainError):
        gwe_srs(d, w, 0)


def test_expected_lambda_sign():
    for d in (make_power(2), make_exponential(2), make_pareto(3)):
        for m in (0, 1, 2):
            assert expected_lambda(d, make_weight_power(m)).value > 0


def test_scale_law_plain_gwe():
    for m in (0, 1, 2, 3):
        w = make_weight_power(m)
        vals = [gwe(make_exponential(lam), w) * lam ** (m - 1) for lam in (0.5, 1, 2, 4)]
        np.testing.assert_allclose(vals, vals[1], rtol=1e-8)
