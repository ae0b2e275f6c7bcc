"""Weight functions w(x) with declared shape flags."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import ConfigurationError, ParameterDomainError

__all__ = [
    "WeightFunction",
    "make_constant_one",
    "make_weight_odd_power",
    "make_weight_power",
    "weight_from_descriptor",
]


@dataclass(frozen=True, eq=False)
class WeightFunction:
    """A weight w(x) plus the properties its constructor vouches for.

    Flags are declarations, never inferred at runtime; the test-suite
    checks them on grids.
    """

    func: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    name: str
    non_negative: bool = False
    increasing: bool = False
    odd: bool = False
    descriptor: Mapping = field(default_factory=dict, repr=False)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.asarray(self.func(x), dtype=float)
        if out.shape != x.shape:
            out = np.broadcast_to(out, x.shape).copy()
        return out[()] if out.ndim == 0 else out


def _is_odd_integer(m: float) -> bool:
    return float(m).is_integer() and int(m) % 2 == 1


def make_weight_power(m: float) -> WeightFunction:
    """w(x) = x^m for m >= 0 (non-negative and non-decreasing on x > 0)."""
    m = float(m)
    if not (math.isfinite(m) and m >= 0):
        raise ParameterDomainError(f"power weight needs m >= 0, got {m!r}")
    if m == 0:
        return make_constant_one()
    if m.is_integer():
        k = int(m)
        func = (lambda x: x) if k == 1 else (lambda x: x**k)
    else:
        func = lambda x: x**m  # noqa: E731
    return WeightFunction(
        func,
        f"x^{m:g}",
        non_negative=True,
        increasing=True,
        odd=_is_odd_integer(m),
        descriptor={"kind": "power", "m": m},
    )


def make_constant_one() -> WeightFunction:
    return WeightFunction(
        lambda x: np.ones_like(x, dtype=float),
        "1",
        non_negative=True,
        increasing=True,
        odd=False,
        descriptor={"kind": "constant_one"},
    )


def make_weight_odd_power(m: int) -> WeightFunction:
    """w(x) = x^m for an odd positive integer m; usable on negative supports."""
    if not (isinstance(m, (int, np.integer)) or (isinstance(m, float) and m.is_integer())):
        raise ParameterDomainError(f"odd power weight needs an odd integer, got {m!r}")
    k = int(m)
    if k < 1 or k % 2 == 0:
        raise ParameterDomainError(f"odd power weight needs an odd positive integer, got {m!r}")
    return WeightFunction(
        (lambda x: x) if k == 1 else (lambda x: x**k),
        f"x^{k}",
        non_negative=False,
        increasing=True,
        odd=True,
        descriptor={"kind": "odd_power", "m": k},
    )


def weight_from_descriptor(desc: Mapping) -> WeightFunction:
    if not isinstance(desc, Mapping) or "kind" not in desc:
        raise ConfigurationError(f"weight descriptor needs a 'kind' key: {desc!r}")
    kind = desc["kind"]
    try:
        if kind == "power":
            if set(desc) != {"kind", "m"}:
                raise ConfigurationError(f"power weight takes exactly 'm': {desc!r}")
            return make_weight_power(desc["m"])
        if kind == "constant_one":
            if set(desc) != {"kind"}:
                raise ConfigurationError(f"constant_one weight takes no parameters: {desc!r}")
            return make_constant_one()
        if kind == "odd_power":
            if set(desc) != {"kind", "m"}:
                raise ConfigurationError(f"odd_power weight takes exactly 'm': {desc!r}")
            return make_weight_odd_power(desc["m"])
    except (TypeError, ParameterDomainError) as exc:
        raise ConfigurationError(f"bad weight descriptor {desc!r}: {exc}") from exc
    raise ConfigurationError(f"unknown weight kind {kind!r}; expected power, constant_one or odd_power")
