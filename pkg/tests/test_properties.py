from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from prss_extropy.distributions import make_exponential, make_pareto, make_power, make_uniform
from prss_extropy.extropy import gwe, gwe_srs
from prss_extropy.orders import check_disp, check_hr, check_lr, check_st
from prss_extropy.prss import bound_ratio_rhs, gwe_prss, gwe_prss_closed, make_design
from prss_extropy.quadrature import integrate_interval, integrate_unit
from prss_extropy.signedlog import SignedLogValue
from prss_extropy.weights import make_weight_power

FAST = settings(max_examples=40, deadline=None)

rate = st.floats(0.2, 5.0, allow_nan=False)
ns = st.integers(1, 8)
ps = st.floats(0.01, 0.99, allow_nan=False).filter(lambda p: abs(p - 0.5) > 1e-9)
ms = st.sampled_from([0, 1, 2])


@st.composite
def distributions(draw):
    kind = draw(st.sampled_from(["power", "exponential", "pareto", "uniform"]))
    if kind == "power":
        return make_power(draw(st.floats(1.0, 5.0)))
    if kind == "exponential":
        return make_exponential(draw(rate))
    if kind == "pareto":
        return make_pareto(draw(st.floats(2.0, 6.0)))
    lo = draw(st.floats(-3, 3))
    return make_uniform(lo, lo + draw(st.floats(0.1, 4)))


@FAST
@given(distributions(), st.floats(1e-6, 1 - 1e-6))
def test_quantile_cdf_roundtrip(d, u):
    assert float(d.cdf(d.quantile(u))) == pytest.approx(u, rel=1e-9, abs=1e-12)


@FAST
@given(distributions(), st.lists(st.floats(1e-4, 1 - 1e-4), min_size=2, max_size=10))
def test_quantile_monotone(d, us):
    us = np.sort(np.asarray(us))
    assert np.all(np.diff(d.quantile(us)) >= 0)


@FAST
@given(ns, ps)
def test_design_strata(n, p):
    d = make_design(n, p)
    strata = d.strata()
    assert sum(s.count for s in strata) == n
    assert all(1 <= s.rank <= n for s in strata)
    assert sorted(d.set_ranks()) == sorted(r for s in strata for r in [s.rank] * s.count)
    assert 1 <= d.a <= n and 1 <= d.b <= n


@FAST
@given(ns, ps, st.floats(1.0, 4.0), ms)
def test_swapping_p_and_q_keeps_value(n, p, theta, m):
    dist, w = make_power(theta), make_weight_power(m)
    a = gwe_prss(dist, w, make_design(n, p)).float_value
    b = gwe_prss(dist, w, make_design(n, 1 - p)).float_value
    assert a == pytest.approx(b, rel=1e-12)


@FAST
@given(distributions(), ms)
def test_single_unit_reduces_to_gwe(d, m):
    assume(d.support.lower >= 0)
    w = make_weight_power(m)
    assert gwe_prss(d, w, make_design(1, 0.3)).float_value == pytest.approx(gwe(d, w), rel=1e-9)


@FAST
@given(distributions(), ns, ps, ms)
def test_prss_gwe_is_negative(d, n, p, m):
    assume(d.support.lower >= 0)
    res = gwe_prss(d, make_weight_power(m), make_design(n, p))
    assert res.value.sign == -1
    assert gwe_srs(d, make_weight_power(m), n).sign == -1


@FAST
@given(st.sampled_from(["power", "exponential", "pareto"]), st.floats(1.0, 4.0), ns, ps, ms)
def test_closed_form_matches_quadrature(family, shp, n, p, m):
    d = {"power": make_power, "exponential": make_exponential, "pareto": make_pareto}[family](shp)
    w, design = make_weight_power(m), make_design(n, p)
    closed = gwe_prss_closed(d, w, design).value
    quad = gwe_prss(d, w, design).value
    assert closed.sign == quad.sign
    assert closed.log_magnitude == pytest.approx(quad.log_magnitude, abs=1e-7)


@FAST
@given(rate, ns, ps, ms)
def test_exponential_scale_law(lam, n, p, m):
    w, design = make_weight_power(m), make_design(n, p)
    base = gwe_prss(make_exponential(1), w, design).value.log_magnitude
    scaled = gwe_prss(make_exponential(lam), w, design).value.log_magnitude
    assert scaled == pytest.approx(base + n * (1 - m) * math.log(lam), abs=1e-8)


@FAST
@given(st.integers(2, 8), st.floats(0.01, 0.49), st.floats(1.0, 4.0), ms)
def test_ratio_below_bound(n, p, theta, m):
    d, w, design = make_power(theta), make_weight_power(m), make_design(n, p)
    ratio = gwe_prss(d, w, design).value / gwe_srs(d, w, n)
    assert ratio.log_magnitude <= bound_ratio_rhs(design).log_magnitude + 1e-9


finite = st.floats(-1e6, 1e6, allow_nan=False).filter(lambda x: abs(x) > 1e-6)


@FAST
@given(finite, finite)
def test_signed_log_arithmetic(x, y):
    a, b = SignedLogValue.from_float(x), SignedLogValue.from_float(y)
    assert (a * b).to_float() == pytest.approx(x * y, rel=1e-12)
    assert (a / b).to_float() == pytest.approx(x / y, rel=1e-12)
    assert (a < b) == (x < y)
    assert (-a).to_float() == pytest.approx(-x, rel=1e-14)


@FAST
@given(finite, st.integers(0, 6))
def test_signed_log_power(x, k):
    assert (SignedLogValue.from_float(x) ** k).to_float() == pytest.approx(x**k, rel=1e-11)


@FAST
@given(st.lists(st.floats(-3, 3), min_size=1, max_size=12), st.floats(-2, 2), st.floats(0.1, 3))
def test_quadrature_polynomials(coefs, a, width):
    b = a + width
    poly = np.polynomial.Polynomial(coefs)
    exact = poly.integ()(b) - poly.integ()(a)
    res = integrate_interval(poly, a, b)
    assert res.value == pytest.approx(exact, rel=1e-10, abs=1e-10)


@FAST
@given(st.floats(-0.9, 3.0))
def test_quadrature_endpoint_singularity(k):
    res = integrate_unit(lambda u: u**k)
    exact = 1 / (k + 1)
    assert abs(res.value - exact) <= max(1e-9 * exact, res.abs_error_estimate)


@FAST
@given(distributions())
def test_orders_reflexive(d):
    for check in (check_st, check_lr, check_hr):
        assert check(d, d).holds == "yes"
    assert check_disp(d, d).holds == "yes"
