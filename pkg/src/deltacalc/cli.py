"""Command-line front end.

Verbs: simplify, integrate, equiv, check-dirac, probe-kernels, trace.
Human-readable output by default, --json for machine output (floats at 17
significant digits, byte-deterministic), --trace-out for CSV rank traces.
Exit status: 0 success, 1 engine rejection, 2 parse/config error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, DeltaCalcError, ParseError
from .exprlang import parse, parse_expression, render
from .rewrite import (
    CompTerm,
    SmoothTerm,
    check_equivalence,
    kernel_dependence_probe,
    reduce_expr_integral,
    sift_battery,
    simplify,
    standard_battery,
)
from .vfun import (
    RealFunction,
    bump_delta,
    check_dirac,
    kernel_to_json,
    mixture,
    shifted_delta,
    square_delta,
)
from .vintegral import NEG_INF, POS_INF, VirtualBound, convolve, integrate_rank

__all__ = ["main", "run_command", "Config", "KERNELS"]


KERNELS = {
    "bump": bump_delta,
    "square": square_delta,
    "plus": lambda: shifted_delta("+"),
    "minus": lambda: shifted_delta("-"),
    "mix": lambda: mixture(shifted_delta("+"), shifted_delta("-")),
    "conv": lambda: convolve(bump_delta(), bump_delta()),
}

BATTERIES = {
    "standard": standard_battery,
    "sift": sift_battery,
}


@dataclass(frozen=True)
class Config:
    tolerance: float = 1e-9
    probe_min_exp: int = 4
    probe_max_exp: int = 20
    battery: str = "standard"
    scan_window: tuple = (-50.0, 50.0)
    grid_size: int = 4096
    kernel: str = "bump"

    @property
    def schedule(self):
        return tuple(2**k for k in range(self.probe_min_exp,
                                         self.probe_max_exp + 1))

    def make_kernel(self):
        if self.kernel not in KERNELS:
            raise ConfigError(f"unknown kernel {self.kernel!r}; choose from "
                              f"{sorted(KERNELS)}")
        return KERNELS[self.kernel]()

    def make_battery(self, order=None):
        if self.battery not in BATTERIES:
            raise ConfigError(f"unknown battery {self.battery!r}; choose from "
                              f"{sorted(BATTERIES)}")
        fns = BATTERIES[self.battery]()
        if order is not None:
            from .vfun import C_INF
            fns = [f for f in fns if f.smoothness == C_INF or f.smoothness >= order]
        return fns


def _load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    known = {"tolerance", "probe_min_exp", "probe_max_exp", "battery",
             "scan_window", "grid_size", "kernel"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "scan_window" in raw:
        raw["scan_window"] = tuple(float(v) for v in raw["scan_window"])
    return Config(**raw)


def _apply_flags(cfg, args):
    updates = {}
    for key in ("tolerance", "probe_min_exp", "probe_max_exp", "battery",
                "grid_size", "kernel"):
        val = getattr(args, key.replace("-", "_"), None)
        if val is not None:
            updates[key] = val
    cfg = replace(cfg, **updates)
    if cfg.probe_min_exp < 1 or cfg.probe_max_exp <= cfg.probe_min_exp:
        raise ConfigError("probe exponents must satisfy 1 <= min < max")
    return cfg


# ---------------------------------------------------------------------------
# Deterministic JSON (floats at 17 significant digits)
# ---------------------------------------------------------------------------

def _json_text(obj):
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return "%.17g" % obj
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        inner = ",".join(f"{json.dumps(str(k))}:{_json_text(v)}"
                         for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_json_text(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(payload, args, out):
    if args.json:
        out.write(_json_text(payload) + "\n")
    else:
        out.write(payload.get("human", str(payload)) + "\n")


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------

def _cmd_simplify(args, cfg, out):
    expr = parse_expression(args.expression)
    if isinstance(expr, RealFunction):
        raise DeltaCalcError("expression contains no delta term to simplify")
    nf = simplify(expr, window=cfg.scan_window)
    strength = ("strong" if nf.strength == "strong"
                else f"order {nf.strength[1]}")
    payload = nf.to_json()
    payload["human"] = f"{nf.render()}   [{strength}]"
    _emit(payload, args, out)
    return 0


def _integral_human(res):
    if res.kind == "reduced":
        return f"Reduced({res.value:.12g}, err~{res.error_estimate:.3g})"
    if res.kind == "irreducible":
        word = "+" if res.sign > 0 else "-"
        return f"Irreducible(p={res.exponent:.3g}, sign {word})"
    return "Undetermined"


def _cmd_integrate(args, cfg, out):
    expr = parse_expression(args.expression)
    if isinstance(expr, RealFunction):
        expr = SmoothTerm(expr)
    kernel = cfg.make_kernel()
    lo = NEG_INF if args.lower is None else VirtualBound.const(args.lower)
    hi = POS_INF if args.upper is None else VirtualBound.const(args.upper)
    res = reduce_expr_integral(expr, kernel=kernel, lo=lo, hi=hi,
                               schedule=cfg.schedule, tol=cfg.tolerance)
    if args.trace_out:
        _write_trace(args.trace_out, "n,I_n", res.rank_values)
    payload = res.to_json()
    payload["human"] = _integral_human(res)
    _emit(payload, args, out)
    return 0


def _cmd_equiv(args, cfg, out):
    lhs = parse_expression(args.lhs)
    rhs = parse_expression(args.rhs)
    if isinstance(lhs, RealFunction):
        lhs = SmoothTerm(lhs)
    if isinstance(rhs, RealFunction):
        rhs = SmoothTerm(rhs)
    kernel = cfg.make_kernel()
    battery = cfg.make_battery(order=args.order)
    verdict = check_equivalence(lhs, rhs, kernel=kernel, battery=battery,
                                tol=max(cfg.tolerance, 1e-8) * 10,
                                schedule=cfg.schedule)
    payload = verdict.to_json()
    if verdict.variant == "consistent_equivalent":
        human = (f"ConsistentEquivalent over {verdict.battery_size} test "
                 f"functions (max deviation {verdict.max_deviation:.3g})")
    elif verdict.variant == "distinct":
        human = (f"Distinct: witness {verdict.witness} gives "
                 f"{verdict.lhs_value:.6g} vs {verdict.rhs_value:.6g}")
    else:
        human = (f"IrreducibleSide: {verdict.side} does not reduce against "
                 f"{verdict.witness}")
    payload["human"] = human
    _emit(payload, args, out)
    return 0


def _cmd_check_dirac(args, cfg, out):
    kernel = cfg.make_kernel()
    res = check_dirac(kernel, schedule=cfg.schedule)
    payload = res.to_json()
    payload["kernel"] = kernel_to_json(kernel)
    if res.ok:
        payload["human"] = (
            f"{cfg.kernel}: valid Dirac kernel "
            f"(normalization {res.normalization:.12g}, support "
            f"{res.support_class.value})")
    else:
        payload["human"] = f"{cfg.kernel}: NOT a Dirac kernel — {res}"
    _emit(payload, args, out)
    return 0


def _cmd_probe_kernels(args, cfg, out):
    g = parse_expression(args.expression)
    if not isinstance(g, RealFunction):
        raise DeltaCalcError(
            "probe-kernels expects a plain inner function, not a delta "
            "expression")
    names = [s.strip() for s in args.kernels.split(",") if s.strip()]
    for name in names:
        if name not in KERNELS:
            raise ConfigError(f"unknown kernel {name!r}")
    kernels = [KERNELS[name]() for name in names]
    report = kernel_dependence_probe(g, kernels, schedule=cfg.schedule)
    payload = report.to_json()
    flag = "FLAGGED" if report.flagged else "ok"
    lines = [f"{name}: {_integral_human(res)}" for name, res in report.outcomes]
    payload["human"] = f"{report.g_label}: {flag} — {report.reason}\n" + \
        "\n".join("  " + line for line in lines)
    _emit(payload, args, out)
    return 0


def _write_trace(path, header, rows):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for a, b in rows:
            fh.write(f"{a:.17g},{b:.17g}\n")


def _cmd_trace(args, cfg, out):
    expr = parse_expression(args.expression)
    kernel = cfg.make_kernel()
    if args.at_rank is not None:
        # Pointwise samples of the bound integrand at one rank.
        from .rewrite import expr_rank_eval
        n = args.at_rank
        if isinstance(expr, RealFunction):
            ev = lambda x: float(expr(x))
        else:
            ev = lambda x: expr_rank_eval(expr, kernel, n, x)
        lo, hi = args.x_min, args.x_max
        xs = np.linspace(lo, hi, args.points)
        rows = [(float(x), ev(float(x))) for x in xs]
        header = "x,value"
    else:
        if isinstance(expr, RealFunction):
            expr = SmoothTerm(expr)
        res = reduce_expr_integral(expr, kernel=kernel, schedule=cfg.schedule,
                                   tol=cfg.tolerance)
        rows = list(res.rank_values)
        header = "n,I_n"
    if args.trace_out:
        _write_trace(args.trace_out, header, rows)
        payload = {"rows": len(rows), "file": args.trace_out,
                   "human": f"wrote {len(rows)} rows to {args.trace_out}"}
    else:
        body = "\n".join(f"{a:.17g},{b:.17g}" for a, b in rows)
        payload = {"rows": len(rows),
                   "human": header + "\n" + body}
        if not args.json:
            payload["human"] = header + "\n" + body
    _emit(payload, args, out)
    return 0


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------

def _build_parser():
    top = argparse.ArgumentParser(
        prog="deltacalc",
        description="Symbolic-numeric calculus of Dirac delta expressions "
                    "over rank-indexed virtual functions.",
    )
    sub = top.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("--json", action="store_true",
                       help="machine-readable single-object JSON output")
        p.add_argument("--config", help="JSON config file path")
        p.add_argument("--tolerance", type=float)
        p.add_argument("--probe-min-exp", type=int, dest="probe_min_exp")
        p.add_argument("--probe-max-exp", type=int, dest="probe_max_exp")
        p.add_argument("--battery", choices=sorted(BATTERIES))
        p.add_argument("--grid-size", type=int, dest="grid_size")
        p.add_argument("--kernel", choices=sorted(KERNELS))

    p = sub.add_parser("simplify", help="rewrite to normal form")
    p.add_argument("expression")
    common(p)

    p = sub.add_parser("integrate", help="reduce the virtual integral")
    p.add_argument("expression")
    p.add_argument("--lower", type=float, help="finite lower bound")
    p.add_argument("--upper", type=float, help="finite upper bound")
    p.add_argument("--trace-out", dest="trace_out", help="CSV of (n, I_n)")
    common(p)

    p = sub.add_parser("equiv", help="check Dirac equivalence of two expressions")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.add_argument("--order", type=int, help="restrict battery to C^n functions")
    common(p)

    p = sub.add_parser("check-dirac", help="verify the kernel conditions")
    common(p)

    p = sub.add_parser("probe-kernels",
                       help="test a composite for kernel dependence")
    p.add_argument("expression", help="inner function g(x)")
    p.add_argument("--kernels", default="minus,square",
                   help="comma-separated kernel names")
    common(p)

    p = sub.add_parser("trace", help="export rank or pointwise samples")
    p.add_argument("expression")
    p.add_argument("--at-rank", type=int, dest="at_rank",
                   help="sample the rank-n integrand pointwise")
    p.add_argument("--x-min", type=float, default=-2.0, dest="x_min")
    p.add_argument("--x-max", type=float, default=2.0, dest="x_max")
    p.add_argument("--points", type=int, default=401)
    p.add_argument("--trace-out", dest="trace_out", help="CSV output path")
    common(p)

    return top


_DISPATCH = {
    "simplify": _cmd_simplify,
    "integrate": _cmd_integrate,
    "equiv": _cmd_equiv,
    "check-dirac": _cmd_check_dirac,
    "probe-kernels": _cmd_probe_kernels,
    "trace": _cmd_trace,
}


def run_command(argv, out=None, err=None):
    """Parse argv and run one verb; returns the exit status."""
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0

    json_mode = getattr(args, "json", False)

    def fail(status, kind, exc):
        msg = {"error": kind, "message": str(exc)}
        if isinstance(exc, ParseError) and exc.position is not None:
            msg["position"] = exc.position
            msg["expected"] = list(exc.expected or ())
        if json_mode:
            err.write(_json_text(msg) + "\n")
        else:
            err.write(f"error ({kind}): {exc}\n")
        return status

    try:
        cfg = _load_config(args.config) if args.config else Config()
        cfg = _apply_flags(cfg, args)
    except ConfigError as exc:
        return fail(2, "config", exc)

    try:
        return _DISPATCH[args.verb](args, cfg, out)
    except ParseError as exc:
        return fail(2, "parse", exc)
    except ConfigError as exc:
        return fail(2, "config", exc)
    except DeltaCalcError as exc:
        return fail(1, "engine", exc)
    except (ValueError, TypeError) as exc:
        return fail(1, "engine", exc)


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
