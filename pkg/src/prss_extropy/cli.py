"""Command-line front end: ``compute``, ``verify`` and ``sample``.

Exit status: 0 all good, 1 a verification check failed, 2 bad
configuration, 3 a numerical accuracy failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .distributions import (
    distribution_from_descriptor,
    make_exponential,
    make_pareto,
    make_power,
    make_triangular_pair,
    make_triangular_symmetric,
    make_uniform,
)
from .errors import (
    AccuracyError,
    ConfigurationError,
    DivergenceError,
    MCFailureError,
    ParameterDomainError,
    UnsupportedFamilyError,
)
from .extropy import gwe, gwe_srs
from .orders import (
    check_disp,
    check_exponential_characterization,
    check_hr,
    check_lr,
    check_st,
    check_symmetry_characterization,
    check_transform_orders,
    delta_analysis,
    verify_theorem_3_1,
    verify_theorem_5_1,
    verify_theorem_5_3,
)
from .prss import bound_ratio_rhs, gwe_prss, make_design
from .sampling import RandomSource, sample_prss
from .weights import (
    make_constant_one,
    make_weight_odd_power,
    make_weight_power,
    weight_from_descriptor,
)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_ACCURACY = 0, 1, 2, 3

COMMANDS = ("compute", "verify", "sample")
SUITES = ("examples", "bounds", "symmetry", "characterization", "orders", "all")
METHODS = ("quadrature", "closed_form", "monte_carlo")
FORMATS = ("csv", "json")


def _fmt(v: Any) -> Any:
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(v, sort_keys=True)
    return "" if v is None else v


def write_csv(rows: Sequence[Mapping], fh, columns: Sequence[str] | None = None) -> None:
    cols = list(columns) if columns is not None else (list(rows[0]) if rows else [])
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in cols])


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _clean(o):
    """Replace non-finite floats so the JSON stays strict."""
    if isinstance(o, float) and not math.isfinite(o):
        return str(o)
    if isinstance(o, dict):
        return {k: _clean(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_clean(v) for v in o]
    return o


def dump_json(obj, fh) -> None:
    json.dump(_clean(obj), fh, indent=2, sort_keys=True, default=_json_default)
    fh.write("\n")


# -- configuration -------------------------------------------------------


@dataclass
class RunConfig:
    """Everything a run needs; ``to_dict``/``from_dict`` round-trip exactly.

    ``grids`` may hold lists under ``distributions``, ``weights``, ``n``,
    ``p`` and ``methods``; scalar descriptors fill any grid left empty.
    """

    command: str = "compute"
    distribution: dict | None = None
    weight: dict | None = None
    design: dict | None = None
    grids: dict = field(default_factory=dict)
    method: str = "quadrature"
    suite: str = "all"
    seed: int = 0
    reps: int = 100_000
    cycles: int | None = None
    format: str = "csv"
    out: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: Mapping) -> RunConfig:
        if not isinstance(data, Mapping):
            raise ConfigurationError("config must be a JSON object")
        known = set(cls.__dataclass_fields__)
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigurationError(f"config field {unknown[0]!r}: unknown (expected one of {sorted(known)})")
        cfg = cls(**{k: data[k] for k in data})
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, text: str, source: str = "<config>") -> RunConfig:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
        return cls.from_dict(data)

    def validate(self) -> None:
        def bad(name, msg):
            raise ConfigurationError(f"config field {name!r}: {msg}")

        if self.command not in COMMANDS:
            bad("command", f"expected one of {COMMANDS}, got {self.command!r}")
        self.method = str(self.method).replace("-", "_")
        if self.method not in METHODS:
            bad("method", f"expected one of {METHODS}, got {self.method!r}")
        if self.suite not in SUITES:
            bad("suite", f"expected one of {SUITES}, got {self.suite!r}")
        if self.format not in FORMATS:
            bad("format", f"expected one of {FORMATS}, got {self.format!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            bad("seed", f"must be an unsigned 64-bit integer, got {self.seed!r}")
        if isinstance(self.reps, bool) or not isinstance(self.reps, int) or self.reps < 2:
            bad("reps", f"must be an integer >= 2, got {self.reps!r}")
        if self.cycles is not None and (not isinstance(self.cycles, int) or self.cycles < 0):
            bad("cycles", f"must be a non-negative integer, got {self.cycles!r}")
        if not isinstance(self.grids, Mapping):
            bad("grids", "must be an object")
        allowed = {"distributions", "weights", "n", "p", "methods"}
        for key, val in self.grids.items():
            if key not in allowed:
                bad(f"grids.{key}", f"unknown grid (expected one of {sorted(allowed)})")
            if not isinstance(val, list) or not val:
                bad(f"grids.{key}", "must be a non-empty list")
        for k, desc in enumerate(self.grids.get("distributions", [])):
            _field_check(f"grids.distributions[{k}]", distribution_from_descriptor, desc)
        for k, desc in enumerate(self.grids.get("weights", [])):
            _field_check(f"grids.weights[{k}]", weight_from_descriptor, desc)
        for k, m in enumerate(self.grids.get("methods", [])):
            if str(m).replace("-", "_") not in METHODS:
                bad(f"grids.methods[{k}]", f"expected one of {METHODS}, got {m!r}")
        if self.distribution is not None:
            _field_check("distribution", distribution_from_descriptor, self.distribution)
        if self.weight is not None:
            _field_check("weight", weight_from_descriptor, self.weight)
        if self.design is not None:
            from .prss import design_from_descriptor

            _field_check("design", design_from_descriptor, self.design)
        for n in self.grids.get("n", []):
            if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                bad("grids.n", f"entries must be positive integers, got {n!r}")
        for p in self.grids.get("p", []):
            if isinstance(p, bool) or not isinstance(p, (int, float)) or not 0 < p < 1:
                bad("grids.p", f"entries must lie in (0, 1), got {p!r}")
        if self.command == "sample" and self.distribution is None and not self.grids.get("distributions"):
            bad("distribution", "sample needs a distribution")


def _field_check(name: str, build: Callable, desc) -> None:
    try:
        build(desc)
    except (ConfigurationError, ParameterDomainError, TypeError) as exc:
        raise ConfigurationError(f"config field {name!r}: {exc}") from exc


def _parse_kv_descriptor(text: str, head: str) -> dict:
    """``exponential:lambda=2`` -> {"family": "exponential", "params": {"lambda": 2.0}}."""
    text = text.strip()
    if text.startswith("{"):
        try:
            return json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"bad JSON descriptor {text!r}: {exc.msg}") from exc
    name, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, sep, val = item.partition("=")
        if not sep:
            raise ConfigurationError(f"expected key=value in {text!r}, got {item!r}")
        try:
            params[key.strip()] = float(val)
        except ValueError as exc:
            raise ConfigurationError(f"non-numeric value in {text!r}: {val!r}") from exc
    if head == "family":
        return {"family": name, "params": params}
    return {"kind": name, **params}


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"expected comma-separated integers, got {text!r}") from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ConfigurationError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prss-extropy",
        description="General weighted extropy of percentile ranked set samples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON run configuration")
        sp.add_argument("--out", help="output path (default stdout)")
        sp.add_argument("--format", choices=FORMATS)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--method", help="quadrature | closed-form | monte-carlo")
        sp.add_argument("--reps", type=int)
        sp.add_argument("--dist", help="family:key=value,...  e.g. exponential:lambda=1")
        sp.add_argument("--weight", help="kind:key=value  e.g. power:m=1 or constant_one")
        sp.add_argument("--n", help="sample size or comma list")
        sp.add_argument("--p", help="percentile or comma list")

    sp = sub.add_parser("compute", help="tabulate GWE values over a grid")
    common(sp)
    sp.add_argument("--methods", help="comma list of methods to pair row by row")
    sp = sub.add_parser("verify", help="run a verification suite")
    common(sp)
    sp.add_argument("suite", nargs="?", choices=SUITES)
    sp = sub.add_parser("sample", help="simulate a PRSS dataset as CSV")
    common(sp)
    sp.add_argument("--cycles", type=int)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigurationError(f"cannot read config {args.config!r}: {exc}") from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"{args.config}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
        if not isinstance(data, dict):
            raise ConfigurationError(f"{args.config}: config must be a JSON object")
    data["command"] = args.command
    for key in ("out", "format", "seed", "method", "reps"):
        val = getattr(args, key, None)
        if val is not None:
            data[key] = val
    if getattr(args, "suite", None):
        data["suite"] = args.suite
    if getattr(args, "cycles", None) is not None:
        data["cycles"] = args.cycles
    grids = dict(data.get("grids") or {})
    if args.dist:
        data["distribution"] = _parse_kv_descriptor(args.dist, "family")
        grids.pop("distributions", None)
    if args.weight:
        data["weight"] = _parse_kv_descriptor(args.weight, "kind")
        grids.pop("weights", None)
    if args.n:
        ns = _int_list(args.n)
        grids["n"] = ns
    if args.p:
        grids["p"] = _float_list(args.p)
    if getattr(args, "methods", None):
        grids["methods"] = [m.strip() for m in args.methods.split(",") if m.strip()]
    data["grids"] = grids
    return RunConfig.from_dict(data)


# -- compute ---------------------------------------------------------------

COMPUTE_COLUMNS = (
    "family", "params", "weight", "n", "p", "a", "b", "a_clamped", "b_clamped", "method",
    "value", "error_estimate", "rel_diff", "gwe", "gwe_srs", "status", "message",
)


def _compute_grid(cfg: RunConfig):
    dists = cfg.grids.get("distributions") or [cfg.distribution or {"family": "exponential", "params": {"lambda": 1.0}}]
    weights = cfg.grids.get("weights") or [cfg.weight or {"kind": "power", "m": 1.0}]
    ns = cfg.grids.get("n") or [cfg.design["n"] if cfg.design else 1]
    ps = cfg.grids.get("p") or [cfg.design["p"] if cfg.design else 0.3]
    methods = [str(m).replace("-", "_") for m in (cfg.grids.get("methods") or [cfg.method])]
    return dists, weights, ns, ps, methods


def cmd_compute(cfg: RunConfig) -> tuple[int, dict]:
    dists, weights, ns, ps, methods = _compute_grid(cfg)
    rows = []
    accuracy_failure = False
    root = RandomSource(cfg.seed)
    for (di, ddesc), (wi, wdesc), n, p in itertools.product(enumerate(dists), enumerate(weights), ns, ps):
        d = distribution_from_descriptor(ddesc)
        w = weight_from_descriptor(wdesc)
        design = make_design(n, p)
        base = {
            "family": d.name, "params": dict(d.params), "weight": w.name, "n": n, "p": p,
            "a": design.a, "b": design.b, "a_clamped": design.a_clamped, "b_clamped": design.b_clamped,
        }
        try:
            g = gwe(d, w)
            srs = gwe_srs(d, w, n).to_float()
        except AccuracyError:
            g = srs = None
        first = None
        for method in methods:
            row = dict(base, method=method, value=None, error_estimate=None, rel_diff=None,
                       gwe=g, gwe_srs=srs, status="ok", message="; ".join(design.warnings))
            try:
                # one child stream per cell keeps rows independent of grid order
                rng = root.child(di, wi, n, int(round(p * 1e6)))
                res = gwe_prss(d, w, design, method, rng=rng, reps=cfg.reps)
                row["value"] = res.float_value
                row["error_estimate"] = res.error_estimate
                if first is None:
                    first = row["value"]
                elif first != 0:
                    row["rel_diff"] = abs(row["value"] - first) / abs(first)
            except DivergenceError as exc:
                row.update(status="divergent", message=str(exc))
            except UnsupportedFamilyError as exc:
                row.update(status="unsupported", message=str(exc))
            except (AccuracyError, MCFailureError) as exc:
                accuracy_failure = True
                row.update(status="accuracy_error", message=str(exc))
            rows.append(row)
    return (EXIT_ACCURACY if accuracy_failure else EXIT_OK), {"command": "compute", "config": cfg.to_dict(), "rows": rows}


# -- verify ------------------------------------------------------------------


@dataclass
class Check:
    suite: str
    name: str
    status: str  # pass | fail | error
    expected: Any = None
    observed: Any = None
    detail: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


class _Suite:
    def __init__(self, name: str):
        self.name = name
        self.checks: list[Check] = []

    def check(self, name: str, fn: Callable[[], tuple[bool, Any, Any, str]]) -> None:
        try:
            ok, expected, observed, detail = fn()
            status = "pass" if ok else "fail"
        except (AccuracyError, MCFailureError) as exc:
            status, expected, observed, detail = "error", None, None, f"{type(exc).__name__}: {exc}"
        self.checks.append(Check(self.name, name, status, expected, observed, detail))


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def suite_examples(s: _Suite) -> None:
    x1, x2 = make_weight_power(1), make_weight_power(2)
    s.check("exp(1) w=x n=1 equals -1/8", lambda: (
        abs(gwe_prss(make_exponential(1), x1, make_design(1, 0.3), "closed_form").float_value + 0.125) <= 1e-12,
        -0.125, gwe_prss(make_exponential(1), x1, make_design(1, 0.3), "closed_form").float_value, "closed form"))
    s.check("uniform(0,1) w=1 n=2 p=0.3 equals -8/9", lambda: (
        abs(gwe_prss(make_uniform(), make_constant_one(), make_design(2, 0.3)).float_value + 8 / 9) <= 1e-9,
        -8 / 9, gwe_prss(make_uniform(), make_constant_one(), make_design(2, 0.3)).float_value, "quadrature"))

    for label, d in (("power theta=2", make_power(2)), ("exponential lambda=2", make_exponential(2)),
                     ("pareto alpha=3", make_pareto(3))):
        for m, n, p in ((0, 2, 0.3), (1, 3, 0.3), (2, 4, 0.2), (1, 5, 0.25)):
            def run(d=d, m=m, n=n, p=p):
                design = make_design(n, p)
                w = make_weight_power(m)
                cf = gwe_prss(d, w, design, "closed_form").float_value
                qd = gwe_prss(d, w, design).float_value
                return _rel(qd, cf) <= 1e-6, cf, qd, f"rel={_rel(qd, cf):.3g}"
            s.check(f"{label} m={m} n={n} p={p}: closed form matches quadrature", run)

    def lomax(n):
        v = verify_theorem_3_1(make_exponential(1), np.expm1, np.exp, x2, make_design(n, 0.3), eta_inverse=np.log1p)
        ok = v.holds == "yes" and v.preconditions["ratio_ge_weight"]
        return ok, "J(Z) >= J(e^Z - 1)", {"lhs": v.lhs, "rhs": v.rhs}, v.label
    for n in (1, 2, 3):
        s.check(f"exp(1) vs e^Z-1, w=x^2, n={n}: transform comparison", lambda n=n: lomax(n))

    up, down = make_triangular_pair()
    s.check("triangular pair: X not <=disp Y", lambda: (
        check_disp(up, down).holds == "no", "no", check_disp(up, down).holds, ""))
    s.check("triangular pair: J^{x^2}(X) < J^{x}(Y)", lambda: (
        gwe(up, x2) < gwe(down, x1), "<", [gwe(up, x2), gwe(down, x1)], ""))
    for n in (2, 3, 4):
        def a_sets(n=n):
            da = delta_analysis(up, x2, down, x1, make_design(n, 0.3))
            ok = len(da.A1) == 1 and da.A1[0][0] <= da.grid[1] and not da.A2
            return ok, {"A1": "(0,1]", "A2": "{0}"}, {"A1": da.A1, "A2": da.A2}, \
                f"condition_holds={da.condition_holds}"
        s.check(f"triangular pair n={n}: Delta positive on (0,1]", a_sets)

        def prss_order(n=n):
            design = make_design(n, 0.3)
            lhs = gwe_prss(up, x2, design).float_value
            rhs = gwe_prss(down, x1, design).float_value
            return lhs <= rhs, "lhs <= rhs", [lhs, rhs], ""
        s.check(f"triangular pair n={n}: PRSS GWE ordered", prss_order)


def _nonneg_grid_cases():
    for d in (make_power(0.5), make_power(1), make_power(2), make_power(3),
              make_exponential(0.5), make_exponential(1), make_exponential(2),
              make_pareto(2), make_pareto(3), make_pareto(5), make_uniform()):
        for m in (0, 1, 2):
            yield d, make_weight_power(m)


def suite_bounds(s: _Suite) -> None:
    def hand():
        design = make_design(2, 0.3)
        w = make_constant_one()
        ratio = gwe_prss(make_uniform(), w, design).float_value / gwe_srs(make_uniform(), w, 2).to_float()
        rhs = bound_ratio_rhs(design).to_float()
        return abs(ratio - 16 / 9) <= 1e-9 and _rel(rhs, 16.0) <= 1e-12 and ratio <= rhs, [16 / 9, 16.0], [ratio, rhs], ""
    s.check("uniform(0,1) w=1 n=2 p=0.3: ratio 16/9 <= 16", hand)

    for n in (2, 3, 4, 5):
        for p in (0.2, 0.3, 0.4):
            def run(n=n, p=p):
                design = make_design(n, p)
                rhs = bound_ratio_rhs(design).to_float()
                worst, where = -math.inf, None
                for d, w in _nonneg_grid_cases():
                    try:
                        ratio = gwe_prss(d, w, design).float_value / gwe_srs(d, w, n).to_float()
                    except AccuracyError:
                        continue  # divergent cell
                    if ratio > worst:
                        worst, where = ratio, f"{d!r} w={w.name}"
                return worst <= rhs, f"<= {rhs:.6g}", worst, f"max ratio at {where}"
            s.check(f"n={n} p={p}: PRSS/SRS ratio within bound", run)


def suite_symmetry(s: _Suite) -> None:
    for d in (make_uniform(-1, 1), make_triangular_symmetric()):
        for k in (1, 3):
            for n in (1, 3, 5):
                def run(d=d, k=k, n=n):
                    v = check_symmetry_characterization(d, make_weight_odd_power(k), n)
                    return v.holds == "yes", 0.0, v.lhs, v.label
                s.check(f"{d!r} w=x^{k} n={n}: PRSS GWE vanishes", run)

    def asym():
        v = check_symmetry_characterization(make_exponential(1), make_weight_odd_power(1), 3)
        return abs(v.lhs) > 1e-4, "|value| > 1e-4", v.lhs, v.label
    s.check("exp(1) w=x n=3: PRSS GWE nonzero", asym)


def suite_characterization(s: _Suite) -> None:
    def exp1():
        v = check_exponential_characterization(make_exponential(1))
        return v.holds == "yes", "consistent", v.label, ""
    s.check("exp(1) matches the standard exponential", exp1)

    def exp2():
        v = check_exponential_characterization(make_exponential(2))
        cell = next(c for c in v.details["cells"] if c["m"] == 0 and c["n"] == 1)
        return v.holds == "no" and cell["rel_diff"] > 1e-6, "inconsistent at m=0", cell["rel_diff"], v.label
    s.check("exp(2) departs from the standard exponential", exp2)

    def unif():
        v = check_exponential_characterization(make_uniform())
        cell = next(c for c in v.details["cells"] if c["m"] == 1 and c["n"] == 1)
        ok = v.holds == "no" and abs(cell["value"] + 0.25) <= 1e-9
        return ok, -0.25, cell["value"], v.label
    s.check("uniform(0,1) departs from the standard exponential", unif)


def suite_orders(s: _Suite) -> None:
    e1, e2 = make_exponential(1), make_exponential(2)
    up, down = make_triangular_pair()

    def expect(name, fn, want):
        s.check(name, lambda: (fn().holds == want, want, fn().holds, str(fn().witness or "")))

    for rel, fn in (("st", check_st), ("lr", check_lr), ("disp", check_disp), ("hr", check_hr)):
        expect(f"{rel}: X vs X reflexive", lambda fn=fn: fn(e1, e1), "yes")
    expect("st: exp(2) <= exp(1)", lambda: check_st(e2, e1), "yes")
    expect("st: triangular X vs Y fails", lambda: check_st(up, down), "no")
    expect("lr: triangular Y <= X", lambda: check_lr(down, up), "yes")
    expect("lr: exp(2) <= exp(1)", lambda: check_lr(e2, e1), "yes")
    expect("disp: exp(2) <= exp(1)", lambda: check_disp(e2, e1), "yes")
    expect("disp: triangular X vs Y fails", lambda: check_disp(up, down), "no")
    expect("hr: exp(2) <= exp(1)", lambda: check_hr(e2, e1), "yes")
    expect("hr: triangular X vs Y fails", lambda: check_hr(up, down), "no")

    from .distributions import transform
    lomax = transform(e1, np.expm1, np.exp, np.log1p)
    for rel in ("convex", "star", "superadditive"):
        expect(f"{rel}: X vs X reflexive", lambda rel=rel: check_transform_orders(e1, e1)[rel], "yes")
        expect(f"{rel}: exp(1) vs e^Z-1", lambda rel=rel: check_transform_orders(e1, lomax)[rel], "yes")

    x1 = make_weight_power(1)
    design = make_design(2, 0.3)

    def t51():
        v = verify_theorem_5_1(e2, e1, x1, x1, design)
        ok = v.preconditions["X_le_disp_Y"] == "yes" and v.holds in ("yes", "inconclusive") and v.lhs <= v.rhs + 1e-8
        return ok, "disp holds; J(X) <= J(Y)", [v.lhs, v.rhs], f"verdict {v.holds} ({v.label})"
    s.check("exp(2) vs exp(1), w=x, n=2: dispersive comparison", t51)

    def t51_tri():
        v = verify_theorem_5_1(up, down, x1, x1, design)
        return v.holds == "inconclusive", "inconclusive", v.holds, v.label
    s.check("triangular pair: dispersive comparison inconclusive", t51_tri)

    def t53_same():
        v = verify_theorem_5_3(e1, x1, e1, x1, design)
        return v.holds == "yes" and v.lhs == v.rhs, "equality", [v.lhs, v.rhs], v.label
    s.check("X vs X: Delta comparison equality", t53_same)


SUITE_FUNCS = {
    "examples": suite_examples,
    "bounds": suite_bounds,
    "symmetry": suite_symmetry,
    "characterization": suite_characterization,
    "orders": suite_orders,
}


def run_suite(name: str) -> list[Check]:
    names = [k for k in SUITE_FUNCS] if name == "all" else [name]
    checks = []
    for k in names:
        s = _Suite(k)
        SUITE_FUNCS[k](s)
        checks.extend(s.checks)
    return checks


def cmd_verify(cfg: RunConfig) -> tuple[int, dict]:
    checks = run_suite(cfg.suite)
    n_fail = sum(c.status == "fail" for c in checks)
    n_err = sum(c.status == "error" for c in checks)
    code = EXIT_FAIL if n_fail else (EXIT_ACCURACY if n_err else EXIT_OK)
    report = {
        "command": "verify",
        "suite": cfg.suite,
        "summary": {"total": len(checks), "failed": n_fail, "errors": n_err},
        "checks": [c.to_dict() for c in checks],
    }
    return code, report


# -- sample ------------------------------------------------------------------


def cmd_sample(cfg: RunConfig) -> tuple[int, str]:
    ddesc = cfg.distribution or cfg.grids["distributions"][0]
    d = distribution_from_descriptor(ddesc)
    n = cfg.design["n"] if cfg.design else (cfg.grids.get("n") or [None])[0]
    p = cfg.design["p"] if cfg.design else (cfg.grids.get("p") or [None])[0]
    if n is None or p is None:
        raise ConfigurationError("config field 'design': sample needs n and p")
    cycles = cfg.cycles
    if cycles is None:
        cycles = cfg.design.get("cycles", 1) if cfg.design else 1
    design = make_design(n, p)
    ds = sample_prss(d, design, RandomSource(cfg.seed), cycles=cycles)
    return EXIT_OK, ds.to_csv()


# -- entry point ---------------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def render(report: dict, fmt: str) -> str:
    buf = io.StringIO()
    if fmt == "json":
        dump_json(report, buf)
    elif report["command"] == "compute":
        write_csv(report["rows"], buf, COMPUTE_COLUMNS)
    else:
        write_csv(report["checks"], buf, ("suite", "name", "status", "expected", "observed", "detail"))
    return buf.getvalue()


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = config_from_args(args)
        if cfg.command == "sample":
            code, text = cmd_sample(cfg)
        else:
            code, report = (cmd_compute if cfg.command == "compute" else cmd_verify)(cfg)
            text = render(report, cfg.format)
        _emit(text, cfg.out)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ParameterDomainError, TypeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (AccuracyError, MCFailureError) as exc:
        print(f"accuracy failure: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    if cfg.command == "verify":
        s = report["summary"]
        print(f"{cfg.suite}: {s['total'] - s['failed'] - s['errors']}/{s['total']} passed", file=sys.stderr)
        for c in report["checks"]:
            if c["status"] != "pass":
                print(f"  {c['status'].upper()}: [{c['suite']}] {c['name']}  {c['detail']}", file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
