from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate

from prss_extropy.errors import AccuracyError
from prss_extropy.quadrature import integrate_interval, integrate_unit
from prss_extropy.signedlog import SignedLogValue


def test_constant_and_polynomials():
    assert integrate_unit(lambda u: np.ones_like(u)).value == pytest.approx(1.0, abs=1e-12)
    assert integrate_unit(lambda u: u**2).value == pytest.approx(1 / 3, abs=1e-14)
    for k in range(0, 24):
        assert integrate_unit(lambda u, k=k: u**k).value == pytest.approx(1 / (k + 1), rel=1e-12)


def test_log_endpoint_case():
    # int_0^1 -ln(1-u) (1-u) du = 1/4 (integration by parts)
    res = integrate_unit(lambda u: -np.log1p(-u) * (1 - u))
    assert res.value == pytest.approx(0.25, rel=1e-9)
    assert 0 <= res.abs_error_estimate <= max(1e-12, 1e-9 * abs(res.value))
    assert res.evaluations > 0


@pytest.mark.parametrize(
    "f, exact",
    [
        (lambda u: u**-0.5, 2.0),
        (lambda u: u**-0.9, 10.0),
        (lambda u: np.log(u) ** 2, 2.0),
        (lambda u: np.sin(20 * u), (1 - math.cos(20)) / 20),
    ],
)
def test_singular_and_oscillatory(f, exact):
    assert integrate_unit(f).value == pytest.approx(exact, rel=1e-8)


def test_against_scipy_quad():
    f = lambda u: np.exp(-3 * u) * np.sqrt(u) * (1 - u) ** 1.5  # noqa: E731
    ref, _ = integrate.quad(f, 0, 1, epsabs=1e-14, epsrel=1e-13)
    assert integrate_unit(f).value == pytest.approx(ref, rel=1e-10)


def test_interval():
    assert integrate_interval(np.cos, 0.0, math.pi / 2).value == pytest.approx(1.0, abs=1e-13)


def test_divergent_raises_with_estimate():
    with pytest.raises(AccuracyError) as info:
        integrate_unit(lambda u: 1 / u)
    assert math.isfinite(info.value.estimate)


def test_signed_log_roundtrip():
    for x in (1e-300, 3.5e-7, -2.0, 1.0, 7.25e150, -1e300):
        assert SignedLogValue.from_float(x).to_float() == pytest.approx(x, rel=1e-12)
    z = SignedLogValue.from_float(0.0)
    assert z.sign == 0 and z.log_magnitude == -math.inf


def test_signed_log_arithmetic():
    a, b = SignedLogValue.from_float(-3.0), SignedLogValue.from_float(0.5)
    assert (a * b).to_float() == pytest.approx(-1.5)
    assert (a / b).to_float() == pytest.approx(-6.0)
    assert (a**3).to_float() == pytest.approx(-27.0)
    assert (a**0).to_float() == 1.0
    assert (-a).to_float() == pytest.approx(3.0, rel=1e-15)
    assert abs(a).to_float() == pytest.approx(3.0, rel=1e-15)
    assert a < b and a <= a


def test_signed_log_beyond_float_range():
    big = SignedLogValue.from_log(800.0)
    assert big.to_float() == math.inf
    assert (big / SignedLogValue.from_log(799.0)).to_float() == pytest.approx(math.e)
