"""Random variates, PRSS datasets and Monte Carlo stratum expectations.

Ranking is assumed perfect throughout.  Beta(2i-1, 2n-2i+1) variates are
realised as the (2i-1)-th smallest of 2n-1 uniforms.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import TextIO

import numpy as np

from .distributions import Distribution
from .errors import DomainError, MCFailureError
from .extropy import LambdaTransform
from .prss import GWEResult, PRSSDesign, StratumFactor, assemble
from .weights import WeightFunction

__all__ = [
    "PRSSDataset",
    "RandomSource",
    "draw",
    "mc_gwe_prss",
    "mc_stratum_expectation",
    "sample_order_statistic",
    "sample_prss",
]

_CHUNK = 1 << 17


class RandomSource:
    """Seeded, splittable random stream on top of numpy's SeedSequence.

    Children derived with :meth:`child` depend only on the root seed and
    the key, never on how much the parent has been consumed.
    """

    def __init__(self, seed: int = 0, spawn_key: tuple[int, ...] = ()):
        if int(seed) != seed or seed < 0 or seed >= 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
        self.seed = int(seed)
        self.spawn_key = tuple(int(k) for k in spawn_key)
        self._gen = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=self.spawn_key))
        )

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def child(self, *key: int) -> RandomSource:
        return RandomSource(self.seed, self.spawn_key + tuple(key))

    def spawn(self, k: int) -> list[RandomSource]:
        return [self.child(j) for j in range(k)]

    def random(self, size=None):
        return self._gen.random(size)

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed}, spawn_key={self.spawn_key})"


def _as_source(rng) -> RandomSource:
    if isinstance(rng, RandomSource):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RandomSource(int(rng))
    raise TypeError(f"expected a RandomSource or integer seed, got {type(rng).__name__}")


def draw(d: Distribution, rng, count: int) -> np.ndarray:
    """``count`` independent variates by inverse-cdf sampling."""
    if count < 0:
        raise DomainError(f"count must be >= 0, got {count}")
    rng = _as_source(rng)
    if count == 0:
        return np.empty(0)
    return np.asarray(d.quantile(rng.random(count)), dtype=float)


def _check_rank(i: int, n: int) -> None:
    if int(n) != n or n < 1 or int(i) != i or not 1 <= i <= n:
        raise DomainError(f"rank must satisfy 1 <= i <= n, got i={i!r}, n={n!r}")


def sample_order_statistic(d: Distribution, i: int, n: int, rng, size: int | None = None):
    """The i-th smallest of n fresh draws (``size`` independent replicates if given)."""
    _check_rank(i, n)
    rng = _as_source(rng)
    reps = 1 if size is None else int(size)
    u = rng.random((reps, n))
    ui = np.partition(u, i - 1, axis=1)[:, i - 1]
    x = np.asarray(d.quantile(ui), dtype=float)
    return float(x[0]) if size is None else x


@dataclass(frozen=True)
class PRSSDataset:
    """``values[c, s]`` is the unit measured from set s of cycle c; ``set_ranks[s]`` its rank."""

    design: PRSSDesign
    cycles: int
    values: np.ndarray
    set_ranks: tuple[int, ...]

    def stratum_values(self, rank: int) -> np.ndarray:
        cols = [s for s, r in enumerate(self.set_ranks) if r == rank]
        return self.values[:, cols].ravel()

    def rows(self):
        for c in range(self.cycles):
            for s, r in enumerate(self.set_ranks):
                yield c + 1, s + 1, r, float(self.values[c, s])

    def write_csv(self, fh: TextIO) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["cycle", "set_index", "rank", "value"])
        for c, s, r, v in self.rows():
            writer.writerow([c, s, r, format(v, ".17g")])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def sample_prss(d: Distribution, design: PRSSDesign, rng, cycles: int | None = None) -> PRSSDataset:
    """Simulate ``cycles`` (default ``design.m_cycles``) PRSS cycles.

    Each cycle draws n sets of n units; the first sets contribute rank a,
    the next ones rank b and, for odd n, the last set its median.
    """
    rng = _as_source(rng)
    m = design.m_cycles if cycles is None else int(cycles)
    n = design.n
    ranks = tuple(design.set_ranks())
    if m == 0:
        return PRSSDataset(design, 0, np.empty((0, n)), ranks)
    u = np.sort(rng.random((m, n, n)), axis=2)
    picked = np.take_along_axis(u, (np.array(ranks) - 1)[None, :, None], axis=2)[:, :, 0]
    values = np.asarray(d.quantile(picked), dtype=float).reshape(m, n)
    return PRSSDataset(design, m, values, ranks)


def _beta_as_order_statistic(gen: np.random.Generator, i: int, n: int, reps: int) -> np.ndarray:
    k = 2 * i - 2
    out = np.empty(reps)
    for start in range(0, reps, _CHUNK):
        stop = min(start + _CHUNK, reps)
        u = gen.random((stop - start, 2 * n - 1))
        out[start:stop] = np.partition(u, k, axis=1)[:, k]
    return out


def mc_stratum_expectation(
    d: Distribution, w: WeightFunction, i: int, n: int, rng, reps: int
) -> tuple[float, float]:
    """Sample mean and standard error of Lambda(B_{2i-1:2n-1})."""
    _check_rank(i, n)
    if reps < 2:
        raise DomainError(f"reps must be >= 2, got {reps}")
    rng = _as_source(rng)
    b = _beta_as_order_statistic(rng.generator, i, n, int(reps))
    vals = np.asarray(LambdaTransform(d, w)(b), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise MCFailureError(f"non-finite Lambda values for rank {i} of n={n}")
    mean = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(reps))
    return mean, se


def mc_gwe_prss(
    d: Distribution, w: WeightFunction, design: PRSSDesign, rng, reps: int = 100_000
) -> GWEResult:
    """GWE of a PRSS cycle with Monte Carlo stratum expectations.

    Each distinct rank draws from its own child stream, so results do not
    depend on evaluation order.  ``log_error`` on the result is the
    propagated standard deviation of log|value|,
    sqrt(sum (count * se / E)^2); ``error_estimate`` is |value| times it.
    """
    rng = _as_source(rng)
    cache: dict[int, tuple[float, float]] = {}
    factors = []
    for s in design.strata():
        if s.rank not in cache:
            cache[s.rank] = mc_stratum_expectation(d, w, s.rank, design.n, rng.child(s.rank), reps)
        est, se = cache[s.rank]
        if w.non_negative and est <= 0:
            raise MCFailureError(
                f"stratum rank {s.rank} estimate {est:.3g} <= 0 under a non-negative weight; "
                "increase reps"
            )
        factors.append(StratumFactor(s.rank, s.count, est, se))
    result = assemble(design, factors, "monte_carlo")
    var_log = 0.0
    for rank, (est, se) in cache.items():
        count = sum(f.count for f in factors if f.rank == rank)
        if est == 0.0:
            var_log = math.inf
            break
        var_log += (count * se / est) ** 2
    log_error = math.sqrt(var_log)
    abs_error = abs(result.float_value) * log_error if math.isfinite(log_error) else result.error_estimate
    return GWEResult(
        result.value, "monte_carlo", abs_error, result.factors, design, result.warnings, log_error
    )
