"""General weighted extropy of percentile ranked set samples.

For a design with set size n and ranks a, b the GWE factorises into
per-stratum beta expectations of the Lambda transform,

    J = -(Q/2) * prod_strata E[Lambda(B_{2r-1:2n-1})]^count,

with B_{2r-1:2n-1} ~ Beta(2r-1, 2n-2r+1) and Q = n^n prod C_{r,n}.  All
constants are carried as log-magnitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Mapping, Sequence

import numpy as np
from scipy.special import betainc

from .distributions import Distribution
from .errors import (
    AccuracyError,
    ConfigurationError,
    DivergenceError,
    DomainError,
    ParameterDomainError,
    UnsupportedFamilyError,
)
from .extropy import LambdaTransform
from .quadrature import DEFAULT_ABS_TOL, DEFAULT_REL_TOL, integrate_unit
from .signedlog import SignedLogValue
from .weights import WeightFunction

__all__ = [
    "GWEResult",
    "PRSSDesign",
    "StratumFactor",
    "StratumSpec",
    "beta_phi_pdf",
    "bound_ratio_rhs",
    "c_constant",
    "design_from_descriptor",
    "exponential_order_moment",
    "gwe_prss",
    "gwe_prss_closed",
    "gwe_prss_closed_exponential",
    "gwe_prss_closed_pareto",
    "gwe_prss_closed_power",
    "make_design",
    "order_statistic_cdf",
    "order_statistic_pdf",
    "q_constant",
    "stratum_expectation",
]

METHODS = ("quadrature", "closed_form", "monte_carlo")


def _log_factorial(k: float) -> float:
    return math.lgamma(k + 1.0)


def _log_binom(n: int, k: int) -> float:
    return _log_factorial(n) - _log_factorial(k) - _log_factorial(n - k)


def _xlogy(x: float, y: float) -> float:
    # 0 * log(0) := 0, i.e. 0^0 = 1
    return 0.0 if x == 0 else x * math.log(y)


def _round_half_away(x: Decimal) -> int:
    return int(x.quantize(Decimal(1), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class StratumSpec:
    rank: int
    count: int


@dataclass(frozen=True)
class PRSSDesign:
    """Set size n, percentile p and the derived ranks a = [p(n+1)], b = [q(n+1)].

    ``[.]`` rounds half away from zero; the result is then clamped into
    [1, n].  The unrounded targets and the clamping flags are kept so
    reports can show what happened.
    """

    n: int
    p: float
    m_cycles: int = 1
    a: int = field(init=False)
    b: int = field(init=False)
    a_target: float = field(init=False)
    b_target: float = field(init=False)
    a_clamped: bool = field(init=False)
    b_clamped: bool = field(init=False)
    warnings: tuple[str, ...] = field(init=False)

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise ParameterDomainError(f"set size n must be a positive integer, got {self.n!r}")
        if not (isinstance(self.p, (int, float)) and 0.0 < self.p < 1.0):
            raise ParameterDomainError(f"percentile p must lie in (0, 1), got {self.p!r}")
        if int(self.m_cycles) != self.m_cycles or self.m_cycles < 0:
            raise ParameterDomainError(f"cycle count must be a non-negative integer, got {self.m_cycles!r}")
        n = int(self.n)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m_cycles", int(self.m_cycles))
        p_dec = Decimal(repr(float(self.p)))
        a_raw = p_dec * (n + 1)
        b_raw = (1 - p_dec) * (n + 1)
        a_round, b_round = _round_half_away(a_raw), _round_half_away(b_raw)
        a = min(max(a_round, 1), n)
        b = min(max(b_round, 1), n)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "a_target", float(a_raw))
        object.__setattr__(self, "b_target", float(b_raw))
        object.__setattr__(self, "a_clamped", a != a_round)
        object.__setattr__(self, "b_clamped", b != b_round)
        warnings = []
        if self.p == 0.5:
            warnings.append("p = 0.5: both halves use the same rank")
        if a != a_round or b != b_round:
            warnings.append(f"ranks clamped into [1, {n}]: a {a_round}->{a}, b {b_round}->{b}")
        object.__setattr__(self, "warnings", tuple(warnings))

    @property
    def q(self) -> float:
        return 1.0 - self.p

    @property
    def is_even(self) -> bool:
        return self.n % 2 == 0

    @property
    def median_rank(self) -> int | None:
        return None if self.is_even else (self.n + 1) // 2

    def strata(self) -> list[StratumSpec]:
        """Ranks measured in one cycle with their multiplicities (counts sum to n)."""
        n = self.n
        if n % 2 == 0:
            out = [StratumSpec(self.a, n // 2), StratumSpec(self.b, n // 2)]
        else:
            half = (n - 1) // 2
            out = [StratumSpec(self.a, half), StratumSpec(self.b, half), StratumSpec((n + 1) // 2, 1)]
        return [s for s in out if s.count > 0]

    def set_ranks(self) -> list[int]:
        """Rank measured in each of the n sets of a cycle, in set order."""
        ranks: list[int] = []
        for s in self.strata():
            ranks.extend([s.rank] * s.count)
        return ranks

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "a": self.a,
            "b": self.b,
            "cycles": self.m_cycles,
            "a_target": self.a_target,
            "b_target": self.b_target,
            "a_clamped": self.a_clamped,
            "b_clamped": self.b_clamped,
        }


def make_design(n: int, p: float, cycles: int = 1) -> PRSSDesign:
    return PRSSDesign(n, p, cycles)


def design_from_descriptor(desc: Mapping) -> PRSSDesign:
    if not isinstance(desc, Mapping) or not {"n", "p"} <= set(desc):
        raise ConfigurationError(f"design descriptor needs 'n' and 'p': {desc!r}")
    extra = set(desc) - {"n", "p", "cycles"}
    if extra:
        raise ConfigurationError(f"unknown design keys {sorted(extra)}")
    try:
        return PRSSDesign(desc["n"], desc["p"], desc.get("cycles", 1))
    except (TypeError, ParameterDomainError) as exc:
        raise ConfigurationError(f"bad design descriptor {desc!r}: {exc}") from exc


def _check_rank(i: int, n: int) -> None:
    if int(n) != n or n < 1:
        raise DomainError(f"set size must be a positive integer, got {n!r}")
    if int(i) != i or not 1 <= i <= n:
        raise DomainError(f"rank must satisfy 1 <= i <= n = {n}, got {i!r}")


def order_statistic_pdf(d: Distribution, i: int, n: int, x):
    """Density of the i-th smallest of n draws from ``d``."""
    _check_rank(i, n)
    x = np.asarray(x, dtype=float)
    F = np.asarray(d.cdf(x), dtype=float)
    f = np.asarray(d.pdf(x), dtype=float)
    log_coef = _log_factorial(n) - _log_factorial(i - 1) - _log_factorial(n - i)
    with np.errstate(all="ignore"):
        body = F ** (i - 1) * (1.0 - F) ** (n - i) * f
    out = np.exp(log_coef) * body
    return out[()] if out.ndim == 0 else out


def order_statistic_cdf(d: Distribution, i: int, n: int, x):
    """P(X_{i:n} <= x) = I_{F(x)}(i, n - i + 1)."""
    _check_rank(i, n)
    out = betainc(i, n - i + 1, np.asarray(d.cdf(x), dtype=float))
    return out[()] if np.ndim(out) == 0 else out


def _log_phi_coef(i: int, n: int) -> float:
    return _log_factorial(2 * n - 1) - _log_factorial(2 * i - 2) - _log_factorial(2 * n - 2 * i)


def _phi(i: int, n: int, u):
    with np.errstate(all="ignore"):
        return np.exp(_log_phi_coef(i, n)) * u ** (2 * i - 2) * (1.0 - u) ** (2 * n - 2 * i)


def beta_phi_pdf(i: int, n: int, u):
    """Beta(2i-1, 2n-2i+1) density, the law of the (2i-1)-th of 2n-1 uniforms.

    Endpoints are allowed: the density is a polynomial on [0, 1].
    """
    _check_rank(i, n)
    u = np.asarray(u, dtype=float)
    if np.any((u < 0) | (u > 1)) or np.any(np.isnan(u)):
        raise DomainError("u must lie in [0, 1]")
    out = _phi(i, n, u)
    return out[()] if out.ndim == 0 else out


def c_constant(i: int, n: int) -> SignedLogValue:
    """C_{i,n} = binom(2i-2, i-1) binom(2n-2i, n-i) / binom(2n-1, n-1)."""
    _check_rank(i, n)
    log_c = _log_binom(2 * i - 2, i - 1) + _log_binom(2 * n - 2 * i, n - i) - _log_binom(2 * n - 1, n - 1)
    return SignedLogValue(1, log_c)


def q_constant(design: PRSSDesign) -> SignedLogValue:
    """Q_{1,n} (even n) or Q_{2,n} (odd n).

    For odd n the trailing factor n((n-1)!)^4 / (((n-1)/2)!^4 (2n-1)!) is
    exactly C_{(n+1)/2,n}, so both cases reduce to n^n times the product
    of C over all n measured ranks.
    """
    n = design.n
    log_q = n * math.log(n)
    if n % 2 == 0:
        log_q += (n // 2) * (c_constant(design.a, n).log_magnitude + c_constant(design.b, n).log_magnitude)
    else:
        half = (n - 1) // 2
        log_q += half * (c_constant(design.a, n).log_magnitude + c_constant(design.b, n).log_magnitude)
        log_q += (
            math.log(n) + 4 * _log_factorial(n - 1)
            - 4 * _log_factorial(half) - _log_factorial(2 * n - 1)
        )
    return SignedLogValue(1, log_q)


def stratum_expectation(
    d: Distribution,
    w: WeightFunction,
    i: int,
    n: int,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
):
    """E[Lambda(B_{2i-1:2n-1})] by adaptive quadrature.

    Returns the :class:`~prss_extropy.quadrature.QuadratureResult`.
    """
    _check_rank(i, n)
    lam = LambdaTransform(d, w)
    log_coef = _log_phi_coef(i, n)

    def integrand(u):
        with np.errstate(all="ignore"):
            return lam(u) * np.exp(log_coef + (2 * i - 2) * np.log(u) + (2 * n - 2 * i) * np.log1p(-u))

    return integrate_unit(integrand, rel_tol, abs_tol)


@dataclass(frozen=True)
class StratumFactor:
    rank: int
    count: int
    expectation: float
    error: float = 0.0

    def to_dict(self) -> dict:
        return {"rank": self.rank, "count": self.count, "expectation": self.expectation, "error": self.error}


@dataclass(frozen=True)
class GWEResult:
    value: SignedLogValue
    method: str
    error_estimate: float
    factors: tuple[StratumFactor, ...]
    design: PRSSDesign
    warnings: tuple[str, ...] = ()
    log_error: float = math.nan

    def __float__(self) -> float:
        return self.value.to_float()

    @property
    def float_value(self) -> float:
        return self.value.to_float()

    def reassemble(self) -> SignedLogValue:
        """-1/2 * Q * prod(factors), rebuilt from the stored per-stratum values."""
        out = SignedLogValue.from_float(-0.5) * q_constant(self.design)
        for f in self.factors:
            out = out * SignedLogValue.from_float(f.expectation) ** f.count
        return out

    def to_dict(self) -> dict:
        return {
            "value": self.value.to_float(),
            "sign": self.value.sign,
            "log_magnitude": self.value.log_magnitude,
            "method": self.method,
            "error_estimate": self.error_estimate,
            "log_error": None if math.isnan(self.log_error) else self.log_error,
            "factors": [f.to_dict() for f in self.factors],
            "design": {"n": self.design.n, "p": self.design.p, "a": self.design.a, "b": self.design.b},
            "warnings": list(self.warnings),
        }


def assemble(
    design: PRSSDesign,
    factors: Sequence[StratumFactor],
    method: str,
    extra_warnings: Sequence[str] = (),
) -> GWEResult:
    """Combine per-stratum expectations into -(Q/2) prod E^count in log space.

    The error estimate is the first-order propagation of the per-stratum
    absolute errors.
    """
    log_q = q_constant(design).log_magnitude
    value = SignedLogValue(-1, log_q - math.log(2.0))
    for f in factors:
        value = value * SignedLogValue.from_float(f.expectation) ** f.count

    error = 0.0
    for k, f in enumerate(factors):
        if f.error == 0.0 or f.count == 0:
            continue
        log_partial = log_q - math.log(2.0) + math.log(f.count) + math.log(f.error)
        zero = False
        for j, g in enumerate(factors):
            power = g.count - 1 if j == k else g.count
            if power == 0:
                continue
            if g.expectation == 0.0:
                zero = True
                break
            log_partial += power * math.log(abs(g.expectation))
        if not zero:
            error += math.exp(log_partial)
    return GWEResult(value, method, error, tuple(factors), design, tuple(design.warnings) + tuple(extra_warnings))


def _quadrature_factors(d, w, design, rel_tol, abs_tol) -> list[StratumFactor]:
    cache: dict[int, tuple[float, float]] = {}
    out = []
    for s in design.strata():
        if s.rank not in cache:
            try:
                res = stratum_expectation(d, w, s.rank, design.n, rel_tol, abs_tol)
            except AccuracyError as exc:
                raise AccuracyError(
                    f"stratum rank {s.rank} of n={design.n} for {d!r}, weight {w.name}: {exc} "
                    "(the weighted integral may diverge)",
                    exc.estimate, exc.error,
                ) from exc
            cache[s.rank] = (res.value, res.abs_error_estimate)
        e, err = cache[s.rank]
        out.append(StratumFactor(s.rank, s.count, e, err))
    return out


def gwe_prss(
    d: Distribution,
    w: WeightFunction,
    design: PRSSDesign,
    method: str = "quadrature",
    *,
    rng=None,
    reps: int = 100_000,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
) -> GWEResult:
    """GWE of a PRSS cycle of n units.

    ``method`` is ``"quadrature"``, ``"closed_form"`` (power, exponential
    and Pareto families with power weights only) or ``"monte_carlo"``
    (needs ``rng``; see :func:`prss_extropy.sampling.mc_gwe_prss`).
    """
    method = method.replace("-", "_")
    if method == "quadrature":
        return assemble(design, _quadrature_factors(d, w, design, rel_tol, abs_tol), "quadrature")
    if method == "closed_form":
        return gwe_prss_closed(d, w, design)
    if method == "monte_carlo":
        from .sampling import RandomSource, mc_gwe_prss

        if rng is None:
            rng = RandomSource(0)
        return mc_gwe_prss(d, w, design, rng, reps)
    raise ConfigurationError(f"unknown method {method!r}; expected one of {METHODS}")


# -- closed forms ---------------------------------------------------------


def _power_weight_exponent(w: WeightFunction) -> float:
    kind = w.descriptor.get("kind")
    if kind == "constant_one":
        return 0.0
    if kind == "power":
        return float(w.descriptor["m"])
    raise UnsupportedFamilyError(f"closed forms need a power weight x^m, got {w.name}")


def gwe_prss_closed(d: Distribution, w: WeightFunction, design: PRSSDesign) -> GWEResult:
    m = _power_weight_exponent(w)
    if d.name == "power":
        return gwe_prss_closed_power(d.params["theta"], m, design)
    if d.name == "exponential":
        return gwe_prss_closed_exponential(d.params["lambda"], m, design)
    if d.name == "pareto":
        return gwe_prss_closed_pareto(d.params["alpha"], m, design)
    raise UnsupportedFamilyError(f"no closed form for family {d.name!r}")


def _check_shape(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ParameterDomainError(f"{name} must be positive, got {value!r}")
    return value


def _check_m(m: float) -> float:
    m = float(m)
    if not (math.isfinite(m) and m >= 0):
        raise ParameterDomainError(f"weight exponent m must be >= 0, got {m!r}")
    return m


def _closed_result(design, log_abs_value, per_rank_log, per_rank_value) -> GWEResult:
    factors = tuple(
        StratumFactor(s.rank, s.count, per_rank_value[s.rank], 0.0) for s in design.strata()
    )
    return GWEResult(SignedLogValue(-1, log_abs_value), "closed_form", 0.0, factors, design, design.warnings)


def gwe_prss_closed_power(theta: float, m: float, design: PRSSDesign) -> GWEResult:
    """Power(theta) with w = x^m: every stratum is a complete beta integral.

    Per stratum of rank r the expectation is
    theta (2n-1)! Gamma((m + 2 r theta - 1)/theta) / ((2r-2)! Gamma((m + (2n+1) theta - 1)/theta)).
    """
    theta, m = _check_shape("theta", theta), _check_m(m)
    n = design.n
    top = (m + (2 * n + 1) * theta - 1.0) / theta
    per_log: dict[int, float] = {}
    for s in design.strata():
        g = (m + 2 * s.rank * theta - 1.0) / theta
        if g <= 0 or top <= 0:
            raise DivergenceError(
                f"power closed form: gamma argument {g:.6g} <= 0 for rank {s.rank} "
                f"(theta={theta}, m={m}); the weighted integral diverges"
            )
        per_log[s.rank] = (
            _log_factorial(2 * n - 1) + math.lgamma(g) - _log_factorial(2 * s.rank - 2) - math.lgamma(top)
        )
    log_q = q_constant(design).log_magnitude
    log_val = log_q - math.log(2.0) + n * math.log(theta)
    log_val += sum(s.count * per_log[s.rank] for s in design.strata())
    per_value = {r: theta * math.exp(v) for r, v in per_log.items()}
    return _closed_result(design, log_val, per_log, per_value)


def gwe_prss_closed_pareto(alpha: float, m: float, design: PRSSDesign) -> GWEResult:
    """Pareto(alpha) on (1, inf) with w = x^m.

    Per stratum of rank r:
    (2n-1)!/(2n-2r)! * Gamma((2n alpha - 2r alpha + 2 alpha - m + 1)/alpha)
    / Gamma((alpha + 2n alpha - m + 1)/alpha), times alpha.
    """
    alpha, m = _check_shape("alpha", alpha), _check_m(m)
    n = design.n
    top = (alpha + 2 * n * alpha - m + 1.0) / alpha
    per_log: dict[int, float] = {}
    for s in design.strata():
        g = (2 * n * alpha - 2 * s.rank * alpha + 2 * alpha - m + 1.0) / alpha
        if g <= 0 or top <= 0:
            raise DivergenceError(
                f"Pareto closed form: gamma argument {g:.6g} <= 0 for rank {s.rank} "
                f"(alpha={alpha}, m={m}); the weighted integral diverges"
            )
        per_log[s.rank] = (
            _log_factorial(2 * n - 1) - _log_factorial(2 * n - 2 * s.rank) + math.lgamma(g) - math.lgamma(top)
        )
    log_q = q_constant(design).log_magnitude
    log_val = log_q - math.log(2.0) + n * math.log(alpha)
    log_val += sum(s.count * per_log[s.rank] for s in design.strata())
    per_value = {r: alpha * math.exp(v) for r, v in per_log.items()}
    return _closed_result(design, log_val, per_log, per_value)


def exponential_order_moment(r: int, size: int, m: float, rel_tol: float = 1e-12) -> float:
    """E[W^m] for W the r-th smallest of ``size`` standard exponentials.

    Integrates x^m psi_{r:size}(x) over (0, inf) after mapping x = t/(1-t).
    """
    _check_rank(r, size)
    m = _check_m(m)
    log_coef = _log_factorial(size) - _log_factorial(r - 1) - _log_factorial(size - r)

    def integrand(t):
        with np.errstate(all="ignore"):
            x = t / (1.0 - t)
            log_psi = log_coef - (size - r + 1) * x
            if r > 1:
                log_psi = log_psi + (r - 1) * np.log(-np.expm1(-x))
            log_xm = m * np.log(x) if m != 0 else 0.0
            val = np.exp(log_psi + log_xm - 2.0 * np.log1p(-t))
        return np.where(np.isfinite(x), val, 0.0)

    return integrate_unit(integrand, rel_tol, 1e-300).value


def gwe_prss_closed_exponential(lam: float, m: float, design: PRSSDesign) -> GWEResult:
    """Exponential(lam) with w = x^m.

    -Q (2n-1)!! / (2^{n+1} n^{n or n-1}) * lam^{-n(m-1)} * prod E[W^m_{2r-1:2n}],
    where (2n-1)!! is the product (2n-2a+1)^k (2n-2b+1)^k with k = n/2
    (even n) or (n-1)/2 (odd n), not the usual double factorial.
    """
    lam, m = _check_shape("lambda", lam), _check_m(m)
    n = design.n
    k = n // 2 if n % 2 == 0 else (n - 1) // 2
    log_dfact = k * (math.log(2 * n - 2 * design.a + 1) + math.log(2 * n - 2 * design.b + 1))
    log_denom = (n + 1) * math.log(2.0) + (n if n % 2 == 0 else n - 1) * math.log(n)

    moments: dict[int, float] = {}
    for s in design.strata():
        if s.rank not in moments:
            moments[s.rank] = exponential_order_moment(2 * s.rank - 1, 2 * n, m)
    log_q = q_constant(design).log_magnitude
    log_val = log_q + log_dfact - log_denom - n * (m - 1.0) * math.log(lam)
    log_val += sum(s.count * math.log(moments[s.rank]) for s in design.strata())

    per_value = {
        r: lam ** (1.0 - m) * (2 * n - 2 * r + 1) / (2 * n) * mom for r, mom in moments.items()
    }
    return _closed_result(design, log_val, None, per_value)


def bound_ratio_rhs(design: PRSSDesign) -> SignedLogValue:
    """Upper bound on J(PRSS) / J(SRS) for a non-negative weight.

    Uses 0^0 = 1 for the (r-1)^{2r-2} and (n-r)^{2n-2r} factors at r = 1
    or r = n.
    """
    n = design.n
    if n < 2:
        raise DomainError("the PRSS/SRS ratio bound needs n >= 2")

    def term(r: int) -> float:
        return 2 * _log_binom(n - 1, r - 1) + _xlogy(2 * r - 2, r - 1) + _xlogy(2 * n - 2 * r, n - r)

    if n % 2 == 0:
        half = n // 2
        log_rhs = 2 * n * math.log(n) - 2 * n * (n - 1) * math.log(n - 1)
        log_rhs += half * (term(design.a) + term(design.b))
    else:
        half = (n - 1) // 2
        log_rhs = (2 * n - 2) * math.log(n) - 2 * (n - 1) ** 2 * math.log(n - 1)
        log_rhs += 2 * _log_factorial(n) - 4 * _log_factorial(half)
        log_rhs += half * (term(design.a) + term(design.b))
    return SignedLogValue(1, log_rhs)
