"""Grid-based stochastic order checks and theorem verifiers.

Every relation quantifies over a continuum, so a "yes" here means the
defining inequality held at every point of a finite grid (``grid_size``
is reported so callers can refine).  A "no" always carries a witness
that violates the inequality when re-evaluated.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .distributions import Distribution, make_exponential, numeric_inverse, transform
from .errors import AccuracyError, DomainError
from .extropy import LambdaTransform, gwe
from .prss import PRSSDesign, _phi, gwe_prss, gwe_prss_closed_exponential, make_design
from .weights import WeightFunction, make_weight_power

__all__ = [
    "DeltaAnalysis",
    "OrderCheckReport",
    "Verdict",
    "check_convex",
    "check_disp",
    "check_exponential_characterization",
    "check_hr",
    "check_lr",
    "check_st",
    "check_star",
    "check_superadditive",
    "check_symmetry_characterization",
    "check_transform_orders",
    "delta_analysis",
    "verify_theorem_3_1",
    "verify_theorem_5_1",
    "verify_theorem_5_3",
    "x_grid",
    "u_grid",
]

YES, NO, INCONCLUSIVE = "yes", "no", "inconclusive"

ORDER_TOL = 1e-12
DISP_TOL = 1e-10
TAIL_SF = 1e-6
GWE_SLACK = 1e-8


@dataclass(frozen=True)
class OrderCheckReport:
    relation: str
    holds: str
    witness: tuple[float, ...] | None
    grid_size: int
    detail: str = ""

    def __bool__(self) -> bool:
        return self.holds == YES

    def to_dict(self) -> dict:
        return asdict(self)


def u_grid(size: int = 201) -> np.ndarray:
    """``size`` equally spaced interior points of (0, 1)."""
    return np.linspace(0.0, 1.0, size + 2)[1:-1]


def x_grid(X: Distribution, Y: Distribution | None = None, size: int = 201, tail: float = 1e-4) -> np.ndarray:
    """Sorted points covering the bulk of both supports.

    Points come from quantiles of each law at ``size`` levels spanning
    [tail, 1 - tail], merged and de-duplicated.
    """
    levels = np.linspace(tail, 1.0 - tail, size)
    pts = [np.asarray(X.quantile(levels), dtype=float)]
    if Y is not None:
        pts.append(np.asarray(Y.quantile(levels), dtype=float))
    return np.unique(np.concatenate(pts))


def _first_violation(bad: np.ndarray) -> int | None:
    idx = np.flatnonzero(bad)
    return int(idx[0]) if idx.size else None


def check_st(X: Distribution, Y: Distribution, grid=None) -> OrderCheckReport:
    """X <=st Y: survival of X never exceeds that of Y."""
    x = x_grid(X, Y) if grid is None else np.asarray(grid, dtype=float)
    bad = X.sf(x) > Y.sf(x) + ORDER_TOL
    k = _first_violation(bad)
    if k is None:
        return OrderCheckReport("st", YES, None, x.size)
    return OrderCheckReport("st", NO, (float(x[k]),), x.size,
                            f"sf_X={float(X.sf(x[k])):.6g} > sf_Y={float(Y.sf(x[k])):.6g}")


def check_lr(X: Distribution, Y: Distribution, grid=None) -> OrderCheckReport:
    """X <=lr Y: g(x) f(y) <= f(x) g(y) for x < y (checked on adjacent grid pairs)."""
    x = x_grid(X, Y) if grid is None else np.asarray(grid, dtype=float)
    f, g = np.asarray(X.pdf(x)), np.asarray(Y.pdf(x))
    lhs = g[:-1] * f[1:]
    rhs = f[:-1] * g[1:]
    scale = np.maximum(np.abs(lhs), np.abs(rhs))
    skip = ((f[:-1] == 0) & (g[:-1] == 0)) | ((f[1:] == 0) & (g[1:] == 0))
    bad = (lhs > rhs + ORDER_TOL * np.maximum(scale, 1.0)) & ~skip
    k = _first_violation(bad)
    if k is None:
        return OrderCheckReport("lr", YES, None, x.size)
    return OrderCheckReport("lr", NO, (float(x[k]), float(x[k + 1])), x.size,
                            "g(x) f(y) > f(x) g(y)")


def check_hr(X: Distribution, Y: Distribution, grid=None) -> OrderCheckReport:
    """X <=hr Y: sf_Y / sf_X non-decreasing wherever sf_X > 0."""
    x = x_grid(X, Y) if grid is None else np.asarray(grid, dtype=float)
    x = x[np.asarray(X.sf(x)) > 0]
    Fb, Gb = np.asarray(X.sf(x)), np.asarray(Y.sf(x))
    lhs = Gb[:-1] * Fb[1:]
    rhs = Gb[1:] * Fb[:-1]
    skip = ((Fb[:-1] == 0) & (Gb[:-1] == 0)) | ((Fb[1:] == 0) & (Gb[1:] == 0))
    bad = (lhs > rhs + ORDER_TOL * np.maximum(np.maximum(lhs, rhs), 1.0)) & ~skip
    k = _first_violation(bad)
    if k is None:
        return OrderCheckReport("hr", YES, None, x.size)
    return OrderCheckReport("hr", NO, (float(x[k]), float(x[k + 1])), x.size,
                            "sf_Y/sf_X decreases between the witness points")


def check_disp(X: Distribution, Y: Distribution, grid_u=None) -> OrderCheckReport:
    """X <=disp Y: G^{-1}(u) - F^{-1}(u) non-decreasing in u."""
    u = u_grid() if grid_u is None else np.asarray(grid_u, dtype=float)
    diff = np.asarray(Y.quantile(u)) - np.asarray(X.quantile(u))
    steps = np.diff(diff)
    bad = steps < -DISP_TOL * np.maximum(1.0, np.abs(diff[1:]))
    k = _first_violation(bad)
    if k is None:
        return OrderCheckReport("disp", YES, None, u.size)
    return OrderCheckReport("disp", NO, (float(u[k]), float(u[k + 1])), u.size,
                            "G^-1 - F^-1 decreases between the witness levels")


def _transport(X: Distribution, Y: Distribution) -> Callable[[np.ndarray], np.ndarray]:
    def phi(x):
        with np.errstate(all="ignore"):
            return np.asarray(Y.quantile(X.cdf(x)), dtype=float)

    return phi


def _nonneg_grid(X, Y, grid):
    x = x_grid(X, Y) if grid is None else np.asarray(grid, dtype=float)
    x = x[(x > X.support.lower) & (x < X.support.upper)]
    if np.any(x < 0):
        raise DomainError("transform orders need non-negative supports")
    # G^-1 F(x) loses all precision once F(x) rounds towards 1
    return x[(np.asarray(X.sf(x)) >= TAIL_SF) & np.isfinite(_transport(X, Y)(x))]


def check_convex(X: Distribution, Y: Distribution, grid=None) -> OrderCheckReport:
    """X <=c Y: G^{-1} F convex (slopes of adjacent chords non-decreasing)."""
    x = _nonneg_grid(X, Y, grid)
    y = _transport(X, Y)(x)
    slopes = np.diff(y) / np.diff(x)
    tol = 1e-9 * np.maximum(1.0, np.abs(slopes[1:]))
    bad = np.diff(slopes) < -tol
    k = _first_violation(bad)
    if k is None:
        return OrderCheckReport("convex", YES, None, x.size)
    return OrderCheckReport("convex", NO, (float(x[k]), float(x[k + 1]), float(x[k + 2])), x.size,
                            "chord slopes decrease across the witness triple")


def check_star(X: Distribution, Y: Distribution, grid=None) -> OrderCheckReport:
    """X <=* Y: G^{-1} F(x) / x non-decreasing on x > 0."""
    x = _nonneg_grid(X, Y, grid)
    x = x[x > 0]
    r = _transport(X, Y)(x) / x
    bad = np.diff(r) < -1e-9 * np.maximum(1.0, np.abs(r[1:]))
    k = _first_violation(bad)
    if k is None:
        return OrderCheckReport("star", YES, None, x.size)
    return OrderCheckReport("star", NO, (float(x[k]), float(x[k + 1])), x.size,
                            "G^-1 F(x)/x decreases between the witness points")


def check_superadditive(X: Distribution, Y: Distribution, grid=None, size: int = 60) -> OrderCheckReport:
    """X <=su Y: G^{-1}F(x + y) >= G^{-1}F(x) + G^{-1}F(y) on a triangular grid."""
    x = _nonneg_grid(X, Y, grid)
    if x.size > size:
        x = x[np.linspace(0, x.size - 1, size).round().astype(int)]
    phi = _transport(X, Y)
    xi, yj = np.meshgrid(x, x, indexing="ij")
    mask = np.triu(np.ones_like(xi, dtype=bool)) & (np.asarray(X.sf(xi + yj)) >= TAIL_SF)
    s = xi[mask] + yj[mask]
    lhs = phi(s)
    rhs = phi(xi[mask]) + phi(yj[mask])
    bad = np.isfinite(lhs) & (lhs < rhs - 1e-9 * np.maximum(1.0, np.abs(rhs)))
    k = _first_violation(bad)
    if k is None:
        return OrderCheckReport("superadditive", YES, None, int(mask.sum()))
    return OrderCheckReport("superadditive", NO, (float(xi[mask][k]), float(yj[mask][k])), int(mask.sum()),
                            "phi(x+y) < phi(x) + phi(y)")


def check_transform_orders(X: Distribution, Y: Distribution, grid=None) -> dict[str, OrderCheckReport]:
    return {
        "convex": check_convex(X, Y, grid),
        "star": check_star(X, Y, grid),
        "superadditive": check_superadditive(X, Y, grid),
    }


# -- Delta analysis -------------------------------------------------------


def _runs(u: np.ndarray, mask: np.ndarray) -> list[tuple[float, float]]:
    """Contiguous grid runs where ``mask`` holds, as (first, last) grid values."""
    out = []
    idx = np.flatnonzero(mask)
    if idx.size == 0:
        return out
    breaks = np.flatnonzero(np.diff(idx) > 1)
    starts = np.concatenate([[idx[0]], idx[breaks + 1]])
    ends = np.concatenate([idx[breaks], [idx[-1]]])
    return [(float(u[s]), float(u[e])) for s, e in zip(starts, ends)]


@dataclass(frozen=True)
class DeltaAnalysis:
    """Sign structure of Delta(u) = Lambda_X(u) - Lambda_Y(u) on a grid.

    ``A1``/``A2`` are the runs of grid points with Delta > tol and
    Delta < -tol; ``inf_phi_A1``/``sup_phi_A2`` are keyed by stratum rank.
    """

    grid: np.ndarray = field(repr=False)
    delta: np.ndarray = field(repr=False)
    A1: list[tuple[float, float]]
    A2: list[tuple[float, float]]
    zero_points: int
    inf_phi_A1: dict[int, float]
    sup_phi_A2: dict[int, float]
    condition_holds: bool
    tol: float = ORDER_TOL

    def in_A1(self) -> np.ndarray:
        return self.delta > self.tol

    def in_A2(self) -> np.ndarray:
        return self.delta < -self.tol

    def to_dict(self) -> dict:
        return {
            "A1": self.A1,
            "A2": self.A2,
            "zero_points": self.zero_points,
            "inf_phi_A1": {str(k): v for k, v in self.inf_phi_A1.items()},
            "sup_phi_A2": {str(k): v for k, v in self.sup_phi_A2.items()},
            "condition_holds": self.condition_holds,
            "grid_size": int(self.grid.size),
        }


def delta_analysis(
    X: Distribution,
    wX: WeightFunction,
    Y: Distribution,
    wY: WeightFunction,
    design: PRSSDesign,
    grid_u=None,
    tol: float = ORDER_TOL,
) -> DeltaAnalysis:
    """Partition [0, 1] by the sign of Delta and test inf_{A1} phi >= sup_{A2} phi per stratum.

    phi is the Beta(2r-1, 2n-2r+1) density for each rank r of the design.
    Grid points where Delta is not finite or |Delta| <= tol belong to
    neither set.
    """
    u = np.linspace(0.0, 1.0, 501) if grid_u is None else np.asarray(grid_u, dtype=float)
    if u.size < 2:
        raise DomainError("delta_analysis needs a grid")
    with np.errstate(all="ignore"):
        delta = np.asarray(LambdaTransform(X, wX)(u) - LambdaTransform(Y, wY)(u), dtype=float)
    finite = np.isfinite(delta)
    a1 = finite & (delta > tol)
    a2 = finite & (delta < -tol)

    inf_a1: dict[int, float] = {}
    sup_a2: dict[int, float] = {}
    ok = True
    for rank in sorted({s.rank for s in design.strata()}):
        phi = np.asarray(_phi(rank, design.n, u), dtype=float)
        inf_a1[rank] = float(phi[a1].min()) if a1.any() else math.inf
        sup_a2[rank] = float(phi[a2].max()) if a2.any() else -math.inf
        ok &= inf_a1[rank] >= sup_a2[rank]
    return DeltaAnalysis(
        u, delta, _runs(u, a1), _runs(u, a2), int((finite & ~a1 & ~a2).sum()),
        inf_a1, sup_a2, bool(ok), tol,
    )


# -- verdicts -------------------------------------------------------------


@dataclass
class Verdict:
    theorem: str
    preconditions: dict[str, Any]
    holds: str
    lhs: float | None = None
    rhs: float | None = None
    witness: Any = None
    grid_size: int = 0
    label: str = ""
    details: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "theorem": self.theorem,
            "preconditions": self.preconditions,
            "holds": self.holds,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "grid_size": self.grid_size,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.label:
            out["label"] = self.label
        if self.details:
            out["details"] = self.details
        return out


def _prss_value(d: Distribution, w: WeightFunction, design: PRSSDesign) -> float | None:
    """PRSS GWE, or None when the integral does not converge (hypotheses then fail)."""
    try:
        return gwe_prss(d, w, design).float_value
    except AccuracyError:
        return None


def _support_grid(d: Distribution, size: int = 201) -> np.ndarray:
    return np.asarray(d.quantile(u_grid(size)), dtype=float)


def verify_theorem_5_1(
    X: Distribution,
    Y: Distribution,
    w1: WeightFunction,
    w2: WeightFunction,
    design: PRSSDesign,
    grid_u=None,
) -> Verdict:
    """Dispersive comparison of two PRSS GWEs under weights w1 (for X) and w2 (for Y).

    Part (a): w1 increasing, w1 >= w2 and X <=disp Y give J(X) <= J(Y).
    Part (b): w1 increasing, w1 <= w2 and X >=disp Y give J(X) >= J(Y).
    Both laws must be non-negative with a common finite upper endpoint.
    """
    u = u_grid() if grid_u is None else np.asarray(grid_u, dtype=float)
    pts = np.unique(np.concatenate([_support_grid(X), _support_grid(Y)]))
    w1v, w2v = np.asarray(w1(pts)), np.asarray(w2(pts))
    w1_grid_increasing = bool(np.all(np.diff(w1v) >= -ORDER_TOL))
    disp_xy = check_disp(X, Y, u)
    disp_yx = check_disp(Y, X, u)
    pre = {
        "nonnegative_supports": X.support.lower >= 0 and Y.support.lower >= 0,
        "common_finite_upper_endpoint": X.support.upper == Y.support.upper and math.isfinite(X.support.upper),
        "w1_increasing": bool(w1.increasing and w1_grid_increasing),
        "w1_ge_w2": bool(np.all(w1v >= w2v - ORDER_TOL)),
        "w1_le_w2": bool(np.all(w1v <= w2v + ORDER_TOL)),
        "X_le_disp_Y": disp_xy.holds,
        "X_ge_disp_Y": disp_yx.holds,
    }
    lhs, rhs = _prss_value(X, w1, design), _prss_value(Y, w2, design)
    pre["finite_gwe"] = lhs is not None and rhs is not None
    common = (pre["nonnegative_supports"] and pre["common_finite_upper_endpoint"]
              and pre["w1_increasing"] and pre["finite_gwe"])
    slack = GWE_SLACK * max(1.0, abs(lhs or 0.0), abs(rhs or 0.0))
    if common and pre["w1_ge_w2"] and disp_xy.holds == YES:
        holds, label = (YES if lhs <= rhs + slack else NO), "part (a): J(X) <= J(Y)"
    elif common and pre["w1_le_w2"] and disp_yx.holds == YES:
        holds, label = (YES if lhs >= rhs - slack else NO), "part (b): J(X) >= J(Y)"
    else:
        holds, label = INCONCLUSIVE, "hypotheses not met"
    return Verdict("5.1", pre, holds, lhs, rhs, None, u.size, label)


def verify_theorem_5_3(
    X: Distribution,
    wX: WeightFunction,
    Y: Distribution,
    wY: WeightFunction,
    design: PRSSDesign,
    grid_u=None,
) -> Verdict:
    """If the Delta condition holds and J^{wX}(X) <= J^{wY}(Y), then the PRSS GWEs keep that order."""
    da = delta_analysis(X, wX, Y, wY, design, grid_u)
    try:
        jx, jy = gwe(X, wX), gwe(Y, wY)
    except AccuracyError:
        jx = jy = math.nan
    pre = {
        "delta_condition": da.condition_holds,
        "J_X_le_J_Y": bool(jx <= jy),
        "J_X": jx,
        "J_Y": jy,
        "A1": da.A1,
        "A2": da.A2,
        "inf_phi_A1": {str(k): v for k, v in da.inf_phi_A1.items()},
        "sup_phi_A2": {str(k): v for k, v in da.sup_phi_A2.items()},
    }
    lhs, rhs = _prss_value(X, wX, design), _prss_value(Y, wY, design)
    finite = lhs is not None and rhs is not None
    pre["finite_gwe"] = finite
    slack = GWE_SLACK * max(1.0, abs(lhs or 0.0), abs(rhs or 0.0))
    if finite and da.condition_holds and jx <= jy:
        holds = YES if lhs <= rhs + slack else NO
        label = "J(X_PRSS) <= J(Y_PRSS)"
    else:
        holds, label = INCONCLUSIVE, "hypotheses not met"
    observed = bool(lhs <= rhs + slack) if finite else None
    return Verdict("5.3", pre, holds, lhs, rhs, None, int(da.grid.size), label,
                   {"prss_order_observed": observed})


def verify_theorem_3_1(
    X: Distribution,
    eta: Callable,
    eta_prime: Callable,
    w1: WeightFunction,
    design: PRSSDesign,
    *,
    eta_inverse: Callable | None = None,
    grid_size: int = 201,
) -> Verdict:
    """Monotone-transform comparison: w1(eta(x))/eta'(x) <= (>=) w1(x) gives J(X) <= (>=) J(eta(X)).

    ``eta_inverse`` is only used for the density of eta(X) off the
    quantile path; it is computed numerically when omitted.
    """
    if eta_inverse is None:
        eta_inverse = numeric_inverse(X, eta, eta_prime)
    V = transform(X, eta, eta_prime, eta_inverse)
    x = _support_grid(X, grid_size)
    with np.errstate(all="ignore"):
        ratio = np.asarray(w1(eta(x)), dtype=float) / np.asarray(eta_prime(x), dtype=float)
    base = np.asarray(w1(x), dtype=float)
    tol = 1e-12 * np.maximum(1.0, np.abs(base))
    le = bool(np.all(ratio <= base + tol))
    ge = bool(np.all(ratio >= base - tol))
    eta0 = float(eta(np.array(0.0)))
    ex = np.asarray(eta(x), dtype=float)
    pre = {
        "nonnegative_support": X.support.lower >= 0,
        "eta_increasing": bool(np.all(np.diff(ex) > 0)),
        "eta_zero_at_zero": abs(eta0) <= 1e-12,
        "ratio_le_weight": le,
        "ratio_ge_weight": ge,
    }
    jx, jv = _prss_value(X, w1, design), _prss_value(V, w1, design)
    pre["finite_gwe"] = jx is not None and jv is not None
    slack = GWE_SLACK * max(1.0, abs(jx or 0.0), abs(jv or 0.0))
    witness = None
    if not (pre["nonnegative_support"] and pre["eta_zero_at_zero"] and pre["eta_increasing"]
            and pre["finite_gwe"]):
        holds, label = INCONCLUSIVE, "hypotheses not met"
    elif le and ge:
        holds = YES if abs(jx - jv) <= slack else NO
        label = "equality"
    elif le:
        holds, label = (YES if jx <= jv + slack else NO), "J(X) <= J(eta(X))"
    elif ge:
        holds, label = (YES if jx >= jv - slack else NO), "J(X) >= J(eta(X))"
    else:
        k = int(np.argmax(ratio > base + tol))
        witness = float(x[k])
        holds, label = INCONCLUSIVE, "weight-ratio condition changes sign"
    return Verdict("3.1", pre, holds, jx, jv, witness, int(x.size), label)


def check_symmetry_characterization(
    X: Distribution,
    w_odd: WeightFunction,
    n_odd: int,
    p: float = 0.3,
    tol: float = 1e-7,
    grid_size: int = 201,
) -> Verdict:
    """Sufficiency check: a law symmetric about 0 with an odd weight has zero PRSS GWE for odd n."""
    if not w_odd.odd:
        raise DomainError(f"weight {w_odd.name} is not declared odd")
    if n_odd % 2 == 0:
        raise DomainError(f"n must be odd, got {n_odd}")
    design = make_design(n_odd, p)
    u = u_grid(grid_size)
    fq = np.asarray(X.density_quantile(u), dtype=float)
    fq_rev = np.asarray(X.density_quantile(1.0 - u), dtype=float)
    q_sum = np.asarray(X.quantile(u), dtype=float) + np.asarray(X.quantile(1.0 - u), dtype=float)
    symmetric = bool(np.allclose(fq, fq_rev, rtol=1e-9, atol=1e-12))
    pre = {
        "density_quantile_symmetric": symmetric,
        "centred_at_zero": bool(np.allclose(q_sum, 0.0, atol=1e-9)),
        "weight_odd": True,
        "n_odd": True,
    }
    value = gwe_prss(X, w_odd, design).float_value
    zero = abs(value) <= tol
    if pre["density_quantile_symmetric"] and pre["centred_at_zero"]:
        holds = YES if zero else NO
    else:
        holds = INCONCLUSIVE
    label = "consistent-with-symmetric" if zero else "not-symmetric"
    return Verdict("4.1", pre, holds, value, 0.0, None, int(u.size), label)


def check_exponential_characterization(
    X: Distribution,
    m_grid: Sequence[float] = (0, 1, 2),
    n_grid: Sequence[int] = (1, 2, 3),
    p: float = 0.3,
    rel_tol: float = 1e-6,
) -> Verdict:
    """Compare PRSS GWEs of X against the standard-exponential closed form over (m, n)."""
    if X.support.lower < 0:
        raise DomainError("exponential characterization needs a non-negative law")
    cells = []
    mismatch = None
    for m in m_grid:
        w = make_weight_power(m)
        for n in n_grid:
            design = make_design(n, p)
            got = gwe_prss(X, w, design).float_value
            ref = gwe_prss_closed_exponential(1.0, m, design).float_value
            rel = abs(got - ref) / abs(ref)
            cells.append({"m": m, "n": n, "value": got, "standard_exponential": ref, "rel_diff": rel})
            if rel > rel_tol and mismatch is None:
                mismatch = {"m": m, "n": n}
    consistent = mismatch is None
    return Verdict(
        "4.2",
        {"nonnegative_support": True},
        YES if consistent else NO,
        None,
        None,
        mismatch,
        len(cells),
        "consistent-with-standard-exponential" if consistent else "not-standard-exponential",
        {"cells": cells},
    )


def exponential_lomax_example(lam: float = 1.0):
    """Exp(lam) together with eta(x) = e^x - 1 and its derivative/inverse."""
    return make_exponential(lam), np.expm1, np.exp, np.log1p
