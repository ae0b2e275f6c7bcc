"""Extropy, general weighted extropy and its SRS counterpart.

Every integral is taken in quantile space,

    J^w(X) = -1/2 * int_0^1 w(F^{-1}(u)) f(F^{-1}(u)) du,

so unbounded supports never reach the integrator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import Distribution
from .errors import AccuracyError, DomainError
from .quadrature import DEFAULT_ABS_TOL, DEFAULT_REL_TOL, QuadratureResult, integrate_unit
from .signedlog import SignedLogValue
from .weights import WeightFunction, make_constant_one

__all__ = [
    "LambdaTransform",
    "expected_lambda",
    "extropy",
    "gwe",
    "gwe_srs",
    "lambda_eval",
]


@dataclass(frozen=True)
class LambdaTransform:
    """u -> w(F^{-1}(u)) f(F^{-1}(u))."""

    distribution: Distribution
    weight: WeightFunction

    def __call__(self, u):
        x = self.distribution.quantile(u)
        with np.errstate(all="ignore"):
            return self.weight(x) * self.distribution.density_quantile(u)


def lambda_eval(t: LambdaTransform, u: float) -> float:
    if not 0.0 < u < 1.0:
        raise DomainError(f"u must lie in (0, 1), got {u!r}")
    return float(t(np.asarray(u, dtype=float)))


def expected_lambda(
    d: Distribution,
    w: WeightFunction,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
) -> QuadratureResult:
    """E[Lambda(U)] for U uniform on (0, 1); equals -2 J^w(X)."""
    return integrate_unit(LambdaTransform(d, w), rel_tol, abs_tol)


def extropy(d: Distribution, rel_tol: float = DEFAULT_REL_TOL, abs_tol: float = DEFAULT_ABS_TOL) -> float:
    return gwe(d, make_constant_one(), rel_tol, abs_tol)


def gwe(
    d: Distribution,
    w: WeightFunction,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
) -> float:
    try:
        res = expected_lambda(d, w, rel_tol, abs_tol)
    except AccuracyError as exc:
        raise AccuracyError(
            f"GWE of {d!r} with weight {w.name} did not converge (possibly infinite): {exc}",
            -0.5 * exc.estimate, 0.5 * exc.error,
        ) from exc
    return -0.5 * res.value


def gwe_srs(
    d: Distribution,
    w: WeightFunction,
    n: int,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
) -> SignedLogValue:
    """-1/2 * (E[Lambda(U)])^n for a simple random sample of size n."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    mean_lambda = -2.0 * gwe(d, w, rel_tol, abs_tol)
    return SignedLogValue.from_float(-0.5) * SignedLogValue.from_float(mean_lambda) ** int(n)
