from __future__ import annotations

import math
from fractions import Fraction
from math import comb, factorial

import numpy as np
import pytest

from prss_extropy.distributions import make_exponential, make_pareto, make_power, make_uniform
from prss_extropy.errors import (
    ConfigurationError,
    DivergenceError,
    DomainError,
    ParameterDomainError,
    UnsupportedFamilyError,
)
from prss_extropy.extropy import gwe
from prss_extropy.prss import (
    beta_phi_pdf,
    bound_ratio_rhs,
    c_constant,
    design_from_descriptor,
    exponential_order_moment,
    gwe_prss,
    gwe_prss_closed_exponential,
    gwe_prss_closed_pareto,
    gwe_prss_closed_power,
    make_design,
    order_statistic_cdf,
    order_statistic_pdf,
    q_constant,
    stratum_expectation,
)
from prss_extropy.quadrature import integrate_unit
from prss_extropy.weights import make_constant_one, make_weight_odd_power, make_weight_power


@pytest.mark.parametrize(
    "n, p, a, b, clamped",
    [(4, 0.3, 2, 4, False), (5, 0.25, 2, 5, False), (2, 0.1, 1, 2, True), (3, 0.3, 1, 3, False),
     (1, 0.3, 1, 1, False), (7, 0.5, 4, 4, False)],
)
def test_design_ranks(n, p, a, b, clamped):
    d = make_design(n, p)
    assert (d.a, d.b) == (a, b)
    assert (d.a_clamped or d.b_clamped) == clamped
    assert sum(s.count for s in d.strata()) == n
    assert d.q == 1 - p


def test_design_strata_layout():
    assert [(s.rank, s.count) for s in make_design(4, 0.3).strata()] == [(2, 2), (4, 2)]
    assert [(s.rank, s.count) for s in make_design(3, 0.3).strata()] == [(1, 1), (3, 1), (2, 1)]
    assert [(s.rank, s.count) for s in make_design(1, 0.3).strata()] == [(1, 1)]
    assert make_design(5, 0.25).set_ranks() == [2, 2, 5, 5, 3]


def test_design_rounding_half_away():
    # 0.5 * 6 = 3 exactly; 0.25 * 6 = 1.5 -> 2; decimal arithmetic avoids 0.35 * 3 = 1.0499...
    assert make_design(5, 0.25).a == 2
    assert make_design(2, 0.35).a_target == pytest.approx(1.05)
    assert make_design(2, 0.35).a == 1


def test_design_p_half_warns():
    d = make_design(4, 0.5)
    assert d.a == d.b and d.warnings


@pytest.mark.parametrize("n, p", [(0, 0.3), (2, 0.0), (2, 1.0), (2, -0.2), (2.5, 0.3)])
def test_design_domain(n, p):
    with pytest.raises(ParameterDomainError):
        make_design(n, p)


def test_design_descriptor():
    d = design_from_descriptor({"n": 4, "p": 0.3, "cycles": 3})
    assert (d.n, d.a, d.b, d.m_cycles) == (4, 2, 4, 3)
    with pytest.raises(ConfigurationError):
        design_from_descriptor({"n": 4})
    with pytest.raises(ConfigurationError):
        design_from_descriptor({"n": 4, "p": 0.3, "size": 1})


def test_order_statistic_pdf():
    u = make_uniform()
    assert order_statistic_pdf(u, 1, 2, 0.25) == pytest.approx(1.5)
    assert order_statistic_pdf(u, 2, 2, 0.25) == pytest.approx(0.5)
    e = make_exponential(2)
    x = np.linspace(0.01, 3, 17)
    np.testing.assert_allclose(order_statistic_pdf(e, 1, 1, x), e.pdf(x), rtol=1e-14)
    with pytest.raises(DomainError):
        order_statistic_pdf(u, 3, 2, 0.5)


def test_order_statistic_cdf_matches_pdf():
    d = make_exponential(1)
    for i, n in ((1, 3), (2, 3), (3, 3), (2, 5)):
        x = 1.3
        res = integrate_unit(lambda t: order_statistic_pdf(d, i, n, t * x) * x)
        assert order_statistic_cdf(d, i, n, x) == pytest.approx(res.value, rel=1e-10)


def test_beta_phi():
    assert beta_phi_pdf(1, 1, 0.3) == pytest.approx(1.0)
    assert beta_phi_pdf(1, 2, 0.5) == pytest.approx(0.75)
    for n in range(1, 11):
        for i in range(1, n + 1):
            assert integrate_unit(lambda u: beta_phi_pdf(i, n, u)).value == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(DomainError):
        beta_phi_pdf(1, 2, 1.5)
    with pytest.raises(DomainError):
        beta_phi_pdf(0, 2, 0.5)


def _c_exact(i, n):
    return Fraction(comb(2 * i - 2, i - 1) * comb(2 * n - 2 * i, n - i), comb(2 * n - 1, n - 1))


def test_c_constant():
    assert c_constant(1, 2).to_float() == pytest.approx(2 / 3, rel=1e-14)
    assert c_constant(2, 2).to_float() == pytest.approx(2 / 3, rel=1e-14)
    assert c_constant(1, 1).to_float() == pytest.approx(1.0, rel=1e-14)
    for n in range(1, 12):
        for i in range(1, n + 1):
            assert c_constant(i, n).to_float() == pytest.approx(float(_c_exact(i, n)), rel=1e-12)


def _q_exact(n, p):
    """Brute-force Q with exact rationals, odd n using the printed trailing factor."""
    d = make_design(n, p)
    if n % 2 == 0:
        return Fraction(n) ** n * _c_exact(d.a, n) ** (n // 2) * _c_exact(d.b, n) ** (n // 2)
    h = (n - 1) // 2
    tail = Fraction(n * factorial(n - 1) ** 4, factorial(h) ** 4 * factorial(2 * n - 1))
    return Fraction(n) ** n * _c_exact(d.a, n) ** h * _c_exact(d.b, n) ** h * tail


def test_q_constant():
    assert q_constant(make_design(1, 0.3)).to_float() == pytest.approx(1.0, rel=1e-14)
    assert q_constant(make_design(2, 0.3)).to_float() == pytest.approx(16 / 9, rel=1e-14)
    c13, c33 = _c_exact(1, 3), _c_exact(3, 3)
    assert q_constant(make_design(3, 0.3)).to_float() == pytest.approx(
        float(27 * c13 * c33 * Fraction(48, 120)), rel=1e-13)
    for n in range(1, 16):
        for p in (0.1, 0.2, 0.3, 0.4, 0.5):
            assert q_constant(make_design(n, p)).to_float() == pytest.approx(float(_q_exact(n, p)), rel=1e-11)


def test_q_constant_large_n_finite():
    q = q_constant(make_design(400, 0.3))
    assert q.sign == 1 and math.isfinite(q.log_magnitude)


def test_stratum_expectation():
    for i, n in ((1, 1), (2, 3), (4, 7)):
        assert stratum_expectation(make_uniform(), make_constant_one(), i, n).value == pytest.approx(1.0, abs=1e-12)
    assert stratum_expectation(make_uniform(), make_weight_power(1), 1, 2).value == pytest.approx(0.25, rel=1e-12)
    assert stratum_expectation(make_exponential(1), make_constant_one(), 1, 1).value == pytest.approx(0.5, rel=1e-12)


def test_gwe_prss_examples():
    assert gwe_prss(make_exponential(1), make_weight_power(1), make_design(1, 0.3)).float_value == pytest.approx(
        -0.125, abs=1e-9)
    res = gwe_prss(make_uniform(), make_constant_one(), make_design(2, 0.3))
    assert res.float_value == pytest.approx(-8 / 9, rel=1e-12)
    assert res.reassemble().to_float() == pytest.approx(res.float_value, rel=1e-10)
    assert [f.rank for f in res.factors] == [1, 2]


@pytest.mark.parametrize("d", [make_power(2), make_exponential(0.5), make_pareto(3), make_uniform(-1, 2)], ids=repr)
def test_n1_reduces_to_gwe(d):
    for w in (make_constant_one(), make_weight_power(1), make_weight_power(2)):
        if d.support.lower < 0 and w is not None and w.descriptor.get("kind") == "power":
            continue
        assert gwe_prss(d, w, make_design(1, 0.3)).float_value == pytest.approx(gwe(d, w), rel=1e-10)


def test_p_symmetry_even_n():
    d, w = make_exponential(1.5), make_weight_power(2)
    for n in (2, 4, 6):
        for p in (0.1, 0.2, 0.3, 0.4):
            v1 = gwe_prss(d, w, make_design(n, p)).float_value
            v2 = gwe_prss(d, w, make_design(n, 1 - p)).float_value
            assert v1 == pytest.approx(v2, rel=1e-10)


def test_result_serialisation():
    res = gwe_prss(make_uniform(), make_constant_one(), make_design(2, 0.3))
    out = res.to_dict()
    assert set(out) >= {"value", "sign", "log_magnitude", "method", "error_estimate", "factors", "design"}
    assert out["design"] == {"n": 2, "p": 0.3, "a": 1, "b": 2}
    assert out["sign"] == -1 and out["method"] == "quadrature"


def test_unknown_method():
    with pytest.raises(ConfigurationError):
        gwe_prss(make_uniform(), make_constant_one(), make_design(2, 0.3), "simpson")


def test_closed_power_values():
    one = make_design(1, 0.3)
    assert gwe_prss_closed_power(1, 1, one).float_value == pytest.approx(-0.25, rel=1e-14)
    assert gwe_prss_closed_power(1, 2, one).float_value == pytest.approx(-1 / 6, rel=1e-14)
    d = make_design(2, 0.3)
    assert gwe_prss_closed_power(2, 1, d).float_value == pytest.approx(
        gwe_prss(make_power(2), make_weight_power(1), d).float_value, rel=1e-8)


def test_closed_exponential_values():
    one = make_design(1, 0.3)
    assert gwe_prss_closed_exponential(1, 1, one).float_value == pytest.approx(-0.125, abs=1e-12)
    assert gwe_prss_closed_exponential(1, 0, one).float_value == pytest.approx(-0.25, rel=1e-12)
    for n in (1, 2, 3, 4):
        vals = [gwe_prss_closed_exponential(lam, 1, make_design(n, 0.3)).float_value for lam in (0.5, 1, 2)]
        np.testing.assert_allclose(vals, vals[1], rtol=1e-9)


def test_exponential_order_moment():
    # E[W_{1:1}^m] = m! for standard exponential; E[min of 2] = 1/2
    for m in (0, 1, 2, 3):
        assert exponential_order_moment(1, 1, m) == pytest.approx(math.factorial(m), rel=1e-10)
    assert exponential_order_moment(1, 2, 1) == pytest.approx(0.5, rel=1e-10)
    # E[W_{2:2}] = 1 + 1/2
    assert exponential_order_moment(2, 2, 1) == pytest.approx(1.5, rel=1e-10)


def test_closed_pareto_values():
    assert gwe_prss_closed_pareto(2, 1, make_design(1, 0.3)).float_value == pytest.approx(
        gwe(make_pareto(2), make_weight_power(1)), rel=1e-8)
    d = make_design(2, 0.3)
    assert gwe_prss_closed_pareto(3, 0, d).float_value == pytest.approx(
        gwe_prss(make_pareto(3), make_constant_one(), d).float_value, rel=1e-8)


def test_closed_pareto_divergence():
    # alpha=1: finite for m=2 (top gamma argument (2 - m + 1)/1 = 1 > 0), divergent once m >= 3
    assert gwe_prss_closed_pareto(1, 2, make_design(1, 0.3)).float_value == pytest.approx(-0.5, rel=1e-12)
    with pytest.raises(DivergenceError):
        gwe_prss_closed_pareto(1, 3, make_design(1, 0.3))
    with pytest.raises(DivergenceError):
        gwe_prss_closed_pareto(1, 3, make_design(2, 0.3))


def test_closed_power_divergence():
    with pytest.raises(DivergenceError):
        gwe_prss_closed_power(0.5, 0, make_design(1, 0.3))


def test_closed_form_dispatch():
    with pytest.raises(UnsupportedFamilyError):
        gwe_prss(make_uniform(), make_constant_one(), make_design(2, 0.3), "closed_form")
    with pytest.raises(UnsupportedFamilyError):
        gwe_prss(make_exponential(1), make_weight_odd_power(1), make_design(2, 0.3), "closed-form")


def test_bound_rhs():
    assert bound_ratio_rhs(make_design(2, 0.3)).to_float() == pytest.approx(16.0, rel=1e-14)
    rhs3 = bound_ratio_rhs(make_design(3, 0.3)).to_float()
    assert 0 < rhs3 < math.inf
    with pytest.raises(DomainError):
        bound_ratio_rhs(make_design(1, 0.3))


def _rhs_exact(n, p):
    """Bound constant in exact rationals with 0^0 = 1."""
    d = make_design(n, p)

    def term(r):
        return Fraction(comb(n - 1, r - 1) ** 2 * (r - 1) ** (2 * r - 2) * (n - r) ** (2 * n - 2 * r))

    if n % 2 == 0:
        k = n // 2
        return Fraction(n ** (2 * n), (n - 1) ** (2 * n * (n - 1))) * term(d.a) ** k * term(d.b) ** k
    k = (n - 1) // 2
    pre = Fraction(n ** (2 * n - 2), (n - 1) ** (2 * (n - 1) ** 2))
    mid = Fraction(factorial(n) ** 2, factorial(k) ** 4)
    return pre * mid * term(d.a) ** k * term(d.b) ** k


def test_bound_rhs_exact():
    for n in range(2, 12):
        for p in (0.1, 0.2, 0.3, 0.4):
            assert bound_ratio_rhs(make_design(n, p)).to_float() == pytest.approx(float(_rhs_exact(n, p)), rel=1e-11)
