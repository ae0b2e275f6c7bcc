"""Continuous distributions as pdf/cdf/quantile triples.

All callables are vectorised over numpy arrays and the objects are
immutable, so they can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import ConfigurationError, MonotonicityError, ParameterDomainError

__all__ = [
    "Distribution",
    "Support",
    "TransformedDistribution",
    "distribution_from_descriptor",
    "make_exponential",
    "make_pareto",
    "make_power",
    "make_triangular_pair",
    "make_triangular_symmetric",
    "make_uniform",
    "numeric_inverse",
    "transform",
]

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Support:
    lower: float
    upper: float

    def __post_init__(self) -> None:
        if not self.lower < self.upper:
            raise ParameterDomainError(f"support requires lower < upper, got ({self.lower}, {self.upper})")

    @property
    def bounded_above(self) -> bool:
        return math.isfinite(self.upper)

    @property
    def bounded_below(self) -> bool:
        return math.isfinite(self.lower)


@dataclass(frozen=True, eq=False)
class Distribution:
    """A continuous law given by its density, cdf and quantile function.

    The raw callables only need to be correct on the open support; the
    public methods take care of clipping outside it.
    """

    name: str
    support: Support
    _pdf: ArrayFn = field(repr=False)
    _cdf: ArrayFn = field(repr=False)
    _quantile: ArrayFn = field(repr=False)
    params: Mapping[str, float] = field(default_factory=dict)

    def pdf(self, x):
        # finite endpoints get the one-sided limit, e.g. f(0) = lambda for Exp
        x = np.asarray(x, dtype=float)
        inside = (x >= self.support.lower) & (x <= self.support.upper) & np.isfinite(x)
        with np.errstate(all="ignore"):
            out = np.where(inside, self._pdf(np.where(inside, x, self._interior_point())), 0.0)
        return out[()] if out.ndim == 0 else out

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x > self.support.lower) & (x < self.support.upper)
        with np.errstate(all="ignore"):
            vals = self._cdf(np.where(inside, x, self._interior_point()))
        out = np.where(inside, vals, np.where(x >= self.support.upper, 1.0, 0.0))
        return out[()] if out.ndim == 0 else out

    def sf(self, x):
        return 1.0 - self.cdf(x)

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        with np.errstate(all="ignore"):
            out = np.where(
                u <= 0.0, self.support.lower,
                np.where(u >= 1.0, self.support.upper, self._quantile(np.clip(u, 0.0, 1.0))),
            )
        return out[()] if out.ndim == 0 else out

    def density_quantile(self, u):
        """f(F^{-1}(u))."""
        return self.pdf(self.quantile(u))

    def _interior_point(self) -> float:
        lo, hi = self.support.lower, self.support.upper
        if math.isfinite(lo) and math.isfinite(hi):
            return 0.5 * (lo + hi)
        if math.isfinite(lo):
            return lo + 1.0
        if math.isfinite(hi):
            return hi - 1.0
        return 0.0

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.params.items())
        return f"{self.name}({args})"


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ParameterDomainError(f"{name} must be a positive finite real, got {value!r}")
    return value


def make_power(theta: float) -> Distribution:
    """Power law on (0, 1): f(x) = theta x^(theta-1), F(x) = x^theta."""
    theta = _require_positive("theta", theta)
    return Distribution(
        "power",
        Support(0.0, 1.0),
        lambda x: theta * x ** (theta - 1.0),
        lambda x: x**theta,
        lambda u: u ** (1.0 / theta),
        {"theta": theta},
    )


def make_exponential(lam: float) -> Distribution:
    lam = _require_positive("lambda", lam)
    return Distribution(
        "exponential",
        Support(0.0, math.inf),
        lambda x: lam * np.exp(-lam * x),
        lambda x: -np.expm1(-lam * x),
        lambda u: -np.log1p(-u) / lam,
        {"lambda": lam},
    )


def make_pareto(alpha: float) -> Distribution:
    """Pareto on (1, inf) with F(x) = 1 - x^(-alpha)."""
    alpha = _require_positive("alpha", alpha)
    return Distribution(
        "pareto",
        Support(1.0, math.inf),
        lambda x: alpha * x ** (-alpha - 1.0),
        lambda x: 1.0 - x ** (-alpha),
        lambda u: (1.0 - u) ** (-1.0 / alpha),
        {"alpha": alpha},
    )


def make_uniform(low: float = 0.0, high: float = 1.0) -> Distribution:
    low, high = float(low), float(high)
    if not (math.isfinite(low) and math.isfinite(high) and low < high):
        raise ParameterDomainError(f"uniform requires finite low < high, got ({low}, {high})")
    width = high - low
    return Distribution(
        "uniform",
        Support(low, high),
        lambda x: np.full_like(x, 1.0 / width, dtype=float),
        lambda x: (x - low) / width,
        lambda u: low + width * u,
        {"low": low, "high": high},
    )


def _triangular_up() -> Distribution:
    return Distribution(
        "triangular_up",
        Support(0.0, 1.0),
        lambda x: 2.0 * x,
        lambda x: x * x,
        np.sqrt,
    )


def _triangular_down() -> Distribution:
    return Distribution(
        "triangular_down",
        Support(0.0, 1.0),
        lambda x: 2.0 * (1.0 - x),
        lambda x: 1.0 - (1.0 - x) ** 2,
        lambda u: 1.0 - np.sqrt(1.0 - u),
    )


def make_triangular_pair() -> tuple[Distribution, Distribution]:
    """Densities 2x and 2(1-x) on (0, 1)."""
    return _triangular_up(), _triangular_down()


def make_triangular_symmetric(low: float = -1.0, high: float = 1.0) -> Distribution:
    """Symmetric triangular law on (low, high) with its mode at the midpoint."""
    low, high = float(low), float(high)
    if not (math.isfinite(low) and math.isfinite(high) and low < high):
        raise ParameterDomainError(f"triangular requires finite low < high, got ({low}, {high})")
    mid, half = 0.5 * (low + high), 0.5 * (high - low)

    def pdf(x):
        return (1.0 - np.abs(x - mid) / half) / half

    def cdf(x):
        z = (x - mid) / half
        return np.where(z <= 0, 0.5 * (1.0 + z) ** 2, 1.0 - 0.5 * (1.0 - z) ** 2)

    def quantile(u):
        return mid + half * np.where(
            u <= 0.5, np.sqrt(2.0 * u) - 1.0, 1.0 - np.sqrt(2.0 * (1.0 - u))
        )

    return Distribution(
        "triangular_symmetric", Support(low, high), pdf, cdf, quantile, {"low": low, "high": high}
    )


@dataclass(frozen=True, eq=False, repr=False)
class TransformedDistribution(Distribution):
    """Law of eta(X) for a strictly increasing eta."""

    base: Distribution | None = None
    eta: ArrayFn | None = field(default=None, repr=False)
    eta_prime: ArrayFn | None = field(default=None, repr=False)
    eta_inverse: ArrayFn | None = field(default=None, repr=False)

    def density_quantile(self, u):
        # f_V(eta(x)) = f(x) / eta'(x) at x = F^{-1}(u); no inverse needed
        x = self.base.quantile(u)
        with np.errstate(all="ignore"):
            return self.base.density_quantile(u) / self.eta_prime(x)

    def __repr__(self) -> str:
        return f"transform({self.base!r})"


def numeric_inverse(base: Distribution, eta: ArrayFn, eta_prime: ArrayFn) -> ArrayFn:
    """Inverse of an increasing eta on the support of ``base``.

    Bisects eta(F^{-1}(t)) = y over t in (0, 1), then polishes with two
    Newton steps in x.
    """
    def inverse(y):
        y = np.asarray(y, dtype=float)
        lo, hi = np.zeros(y.shape), np.ones(y.shape)
        with np.errstate(all="ignore"):
            for _ in range(64):
                mid = 0.5 * (lo + hi)
                below = np.asarray(eta(base.quantile(mid)), dtype=float) < y
                lo, hi = np.where(below, mid, lo), np.where(below, hi, mid)
            x = np.asarray(base.quantile(0.5 * (lo + hi)), dtype=float)
            for _ in range(2):
                step = (np.asarray(eta(x), dtype=float) - y) / np.asarray(eta_prime(x), dtype=float)
                x = np.where(np.isfinite(step), x - step, x)
        x = np.clip(x, base.support.lower, base.support.upper)
        return x[()] if x.ndim == 0 else x

    return inverse


def _grid_on_support(d: Distribution, size: int = 101) -> np.ndarray:
    u = np.linspace(0.0, 1.0, size + 2)[1:-1]
    return np.asarray(d.quantile(u), dtype=float)


def transform(
    base: Distribution,
    eta: ArrayFn,
    eta_prime: ArrayFn,
    eta_inverse: ArrayFn,
    *,
    grid_size: int = 101,
) -> TransformedDistribution:
    """Distribution of eta(X).

    eta must be strictly increasing on the support of ``base``; this is
    checked on a quantile grid of ``grid_size`` points.
    """
    x = _grid_on_support(base, grid_size)
    y = np.asarray(eta(x), dtype=float)
    steps = np.diff(y)
    if not np.all(steps > 0):
        k = int(np.argmin(steps > 0))
        raise MonotonicityError(
            f"eta is not strictly increasing on the support grid: eta({x[k]:.6g})={y[k]:.6g} "
            f">= eta({x[k + 1]:.6g})={y[k + 1]:.6g}"
        )

    with np.errstate(all="ignore"):
        lo = float(eta(np.array(base.support.lower)))
        hi = float(eta(np.array(base.support.upper)))

    def pdf(v):
        xv = eta_inverse(v)
        return base.pdf(xv) / eta_prime(xv)

    def cdf(v):
        return base.cdf(eta_inverse(v))

    def quantile(u):
        return eta(base.quantile(u))

    return TransformedDistribution(
        f"transformed_{base.name}",
        Support(lo, hi),
        pdf,
        cdf,
        quantile,
        dict(base.params),
        base=base,
        eta=eta,
        eta_prime=eta_prime,
        eta_inverse=eta_inverse,
    )


_FAMILY_PARAMS = {
    "power": ("theta",),
    "exponential": ("lambda",),
    "pareto": ("alpha",),
    "uniform": ("low", "high"),
    "triangular_up": (),
    "triangular_down": (),
}


def distribution_from_descriptor(desc: Mapping) -> Distribution:
    """Build a distribution from ``{"family": ..., "params": {...}}``."""
    if not isinstance(desc, Mapping) or "family" not in desc:
        raise ConfigurationError(f"distribution descriptor needs a 'family' key: {desc!r}")
    family = desc["family"]
    if family not in _FAMILY_PARAMS:
        raise ConfigurationError(
            f"unknown family {family!r}; expected one of {sorted(_FAMILY_PARAMS)}"
        )
    params = dict(desc.get("params") or {})
    expected = set(_FAMILY_PARAMS[family])
    if family == "uniform":
        params.setdefault("low", 0.0)
        params.setdefault("high", 1.0)
    if set(params) != expected:
        raise ConfigurationError(
            f"family {family!r} takes params {sorted(expected)}, got {sorted(params)}"
        )
    try:
        if family == "power":
            return make_power(params["theta"])
        if family == "exponential":
            return make_exponential(params["lambda"])
        if family == "pareto":
            return make_pareto(params["alpha"])
        if family == "uniform":
            return make_uniform(params["low"], params["high"])
    except (TypeError, ParameterDomainError) as exc:
        raise ConfigurationError(f"bad params for {family!r}: {exc}") from exc
    up, down = make_triangular_pair()
    return up if family == "triangular_up" else down


def descriptor_of(d: Distribution) -> dict:
    return {"family": d.name, "params": dict(d.params)}
