"""Symbolic delta-expression layer.

Expressions over delta terms and smooth factors are rewritten to normal
forms sum_i c_i * delta^(k_i)(x - a_i), and every rewrite can be
cross-checked numerically by integrating both sides against a battery of
test functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ExpressionError, RewriteError, SmoothnessError
from .limits import DEFAULT_SCHEDULE
from .roots import certify_hypotheses, find_simple_roots
from .vfun import C_INF, DiracKernel, RealFunction, const_function
from .vintegral import (
    NEG_INF,
    POS_INF,
    VirtualBound,
    _classify_sequence,
    _quad_piece,
    compose,
    convolve,
    integrate_rank,
    reduce_sequence,
)

__all__ = [
    "DeltaTerm",
    "CompTerm",
    "SmoothTerm",
    "ScaleTerm",
    "SumTerm",
    "ProductTerm",
    "ContractionTerm",
    "NormalForm",
    "EquivalenceVerdict",
    "ProbeReport",
    "rewrite_composition",
    "rewrite_product",
    "rewrite_deriv_product",
    "rewrite_convolution",
    "simplify",
    "evaluate_normal_form",
    "reduce_expr_integral",
    "check_equivalence",
    "kernel_dependence_probe",
    "standard_battery",
    "sift_battery",
]

#: Coefficients below this merge to zero during normalization.
COEFF_EPS = 1e-14


# ---------------------------------------------------------------------------
# Expression AST
# ---------------------------------------------------------------------------

class DeltaExpr:
    """Base class for delta-expression nodes."""

    def render(self):
        raise NotImplementedError


@dataclass(frozen=True)
class DeltaTerm(DeltaExpr):
    """delta^(k)(x - a), optionally bound to a specific kernel."""

    order: int = 0
    shift: float = 0.0
    kernel: object = None

    def __post_init__(self):
        if self.order < 0:
            raise ExpressionError("derivative order must be >= 0")

    def render(self):
        inner = "x" if self.shift == 0 else (
            f"x-{self.shift:g}" if self.shift > 0 else f"x+{-self.shift:g}")
        if self.order == 0:
            return f"delta({inner})"
        return f"ddelta({inner},{self.order})"


@dataclass(frozen=True)
class CompTerm(DeltaExpr):
    """delta(g(x)) for a smooth inner function."""

    inner: RealFunction
    kernel: object = None

    def render(self):
        return f"delta({self.inner.label or 'g(x)'})"


@dataclass(frozen=True)
class SmoothTerm(DeltaExpr):
    f: RealFunction

    def render(self):
        return self.f.label or "f(x)"


@dataclass(frozen=True)
class ScaleTerm(DeltaExpr):
    c: float
    expr: DeltaExpr

    def render(self):
        return f"{self.c:g}*({self.expr.render()})"


@dataclass(frozen=True)
class SumTerm(DeltaExpr):
    parts: tuple

    def render(self):
        return " + ".join(p.render() for p in self.parts)


@dataclass(frozen=True)
class ProductTerm(DeltaExpr):
    """Smooth factor times a single delta-bearing term."""

    f: RealFunction
    delta: DeltaExpr

    def __post_init__(self):
        if not isinstance(self.delta, (DeltaTerm, CompTerm)):
            raise ExpressionError(
                "Product requires exactly one delta-bearing factor; products "
                "of two delta terms are only defined inside a contraction "
                "integral"
            )

    def render(self):
        return f"({self.f.label or 'f(x)'})*{self.delta.render()}"


@dataclass(frozen=True)
class ContractionTerm(DeltaExpr):
    """Integral over beta of d1(x - beta) d2(beta - a)."""

    d1: DiracKernel
    d2: DiracKernel
    shift: float = 0.0

    def render(self):
        return f"contract({self.d1.name},{self.d2.name},{self.shift:g})"


ZERO_EXPR = SmoothTerm(const_function(0.0, label="0"))


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------

STRONG = "strong"


def _merge_strength(a, b):
    """Strong beats nothing: mixing with an order-n rewrite downgrades to
    the weaker (larger-n) order."""
    if a == STRONG:
        return b
    if b == STRONG:
        return a
    return ("order", max(a[1], b[1]))


@dataclass(frozen=True)
class NormalForm:
    terms: tuple  # of (c, k, a)
    strength: object = STRONG  # STRONG or ("order", n)
    residual: object = None  # None | "zero" | reason string
    kernel_binding: object = None

    @staticmethod
    def from_terms(terms, strength=STRONG, residual=None, kernel_binding=None):
        merged = {}
        for c, k, a in terms:
            key = (float(a), int(k))
            merged[key] = merged.get(key, 0.0) + float(c)
        out = tuple(
            (c, k, a)
            for (a, k), c in sorted(merged.items())
            if abs(c) >= COEFF_EPS
        )
        if not out and residual is None:
            residual = "zero"
        return NormalForm(out, strength, residual, kernel_binding)

    @property
    def is_zero(self):
        return not self.terms and self.residual == "zero"

    def scaled(self, c):
        return NormalForm.from_terms(
            [(c * t[0], t[1], t[2]) for t in self.terms],
            self.strength, None if self.terms else self.residual,
            self.kernel_binding,
        )

    def render(self):
        if self.is_zero:
            return "0"
        if not self.terms:
            return f"<not reducible: {self.residual}>"
        parts = []
        for c, k, a in self.terms:
            d = "δ" + ("" if k == 0 else "′" * k if k <= 2 else f"^({k})")
            if a == 0:
                arg = "x"
            elif a > 0:
                arg = f"x−{a:g}"
            else:
                arg = f"x+{-a:g}"
            parts.append(f"{c:g}·{d}({arg})")
        text = " + ".join(parts).replace("+ -", "− ")
        if self.residual not in (None, "zero"):
            text += f"  [+ not reducible: {self.residual}]"
        return text

    def to_json(self):
        strength = ("strong" if self.strength == STRONG
                    else {"order": self.strength[1]})
        return {
            "terms": [{"c": c, "k": k, "a": a} for c, k, a in self.terms],
            "strength": strength,
            "residual": self.residual,
        }


# ---------------------------------------------------------------------------
# Rewrite rules
# ---------------------------------------------------------------------------

def rewrite_composition(g, cert=None, window=None):
    """delta(g(x)) -> sum over simple roots of delta(x - a_i) / |g'(a_i)|.

    Requires certified hypotheses; an empty root set under certification
    means the composite is identically null.
    """
    if cert is None:
        window = window or (-50.0, 50.0)
        records = find_simple_roots(g, window=window)
        cert = certify_hypotheses(g, records, window=window)
    if not cert.certified:
        raise RewriteError(
            f"composition-rule hypotheses not certified "
            f"({cert.verdict}): {cert.reason}"
        )
    terms = [(1.0 / abs(rec.g_prime), 0, rec.a) for rec in cert.roots]
    return NormalForm.from_terms(terms, STRONG)


def rewrite_product(f, a):
    """f(x) delta(x - a) -> f(a) delta(x - a)."""
    a = float(a)
    try:
        value = float(f(a))
    except Exception as exc:
        raise RewriteError(f"factor undefined at a={a:g}: {exc}") from exc
    if not math.isfinite(value):
        raise RewriteError(f"factor is not finite at a={a:g}")
    return NormalForm.from_terms([(value, 0, a)], STRONG)


def rewrite_deriv_product(g, n, a):
    """g(x) delta^(n)(x-a): the binomial rule, an order-n equivalence.

    Coefficients: (-1)^n (-1)^i C(n,i) g^{(n-i)}(a) on delta^(i)(x-a).
    """
    n = int(n)
    a = float(a)
    if n == 0:
        return rewrite_product(g, a)
    if isinstance(g, RealFunction) and g.smoothness != C_INF and g.smoothness < n:
        raise SmoothnessError(
            f"factor {g.label!r} is only C^{g.smoothness}, rule needs C^{n}"
        )
    terms = []
    for i in range(n + 1):
        coeff = ((-1.0) ** n) * ((-1.0) ** i) * math.comb(n, i) * g.deriv_value(n - i, a)
        terms.append((coeff, i, a))
    return NormalForm.from_terms(terms, ("order", n))


def rewrite_convolution(d1, d2, a=0.0):
    """Contraction integral of d1(x-b) d2(b-a) -> delta_3(x-a) with
    delta_3 = convolve(d1, d2)."""
    d3 = convolve(d1, d2)
    return NormalForm.from_terms([(1.0, 0, float(a))], STRONG, kernel_binding=d3)


def simplify(expr, window=None):
    """Rewrite an expression AST to its normal form."""
    if isinstance(expr, DeltaTerm):
        return NormalForm.from_terms([(1.0, expr.order, expr.shift)], STRONG,
                                     kernel_binding=expr.kernel)
    if isinstance(expr, CompTerm):
        return rewrite_composition(expr.inner, window=window)
    if isinstance(expr, SmoothTerm):
        value_probe = expr.f(0.0)
        if isinstance(expr.f, RealFunction) and expr.f.label == "0":
            return NormalForm.from_terms([], STRONG)
        if value_probe == 0.0 and expr.f(1.0) == 0.0 and expr.f(-1.3) == 0.0:
            return NormalForm.from_terms([], STRONG)
        return NormalForm((), STRONG,
                          residual=f"smooth summand {expr.f.label or 'f(x)'}")
    if isinstance(expr, ScaleTerm):
        return simplify(expr.expr, window=window).scaled(expr.c)
    if isinstance(expr, SumTerm):
        parts = [simplify(p, window=window) for p in expr.parts]
        strength = STRONG
        residual = None
        terms = []
        for nf in parts:
            terms.extend(nf.terms)
            strength = _merge_strength(strength, nf.strength)
            if nf.residual not in (None, "zero"):
                residual = nf.residual
        return NormalForm.from_terms(terms, strength, residual)
    if isinstance(expr, ProductTerm):
        if isinstance(expr.delta, DeltaTerm):
            if expr.delta.order == 0:
                return rewrite_product(expr.f, expr.delta.shift)
            return rewrite_deriv_product(expr.f, expr.delta.order, expr.delta.shift)
        base = rewrite_composition(expr.delta.inner, window=window)
        terms = [(c * float(expr.f(a)), k, a) for c, k, a in base.terms]
        return NormalForm.from_terms(terms, base.strength,
                                     None if terms else base.residual)
    if isinstance(expr, ContractionTerm):
        return rewrite_convolution(expr.d1, expr.d2, expr.shift)
    raise ExpressionError(f"cannot simplify node {type(expr).__name__}")


def evaluate_normal_form(nf, f):
    """sum_i c_i (-1)^{k_i} f^{(k_i)}(a_i)."""
    total = 0.0
    max_k = max((k for _c, k, _a in nf.terms), default=0)
    if isinstance(f, RealFunction) and f.smoothness != C_INF and f.smoothness < max_k:
        raise SmoothnessError(
            f"test function {f.label!r} is only C^{f.smoothness}; the normal "
            f"form contains a derivative term of order {max_k}"
        )
    for c, k, a in nf.terms:
        total += c * ((-1.0) ** k) * float(f.deriv_value(k, a))
    return total


# ---------------------------------------------------------------------------
# Numeric expression integration (termwise per rank)
# ---------------------------------------------------------------------------

def _term_rank_integral(expr, weight, kernel, n, lo, hi):
    """Per-rank integral of expr * weight over [lo(n), hi(n)], termwise."""
    if isinstance(expr, SumTerm):
        return sum(_term_rank_integral(p, weight, kernel, n, lo, hi)
                   for p in expr.parts)
    if isinstance(expr, ScaleTerm):
        return expr.c * _term_rank_integral(expr.expr, weight, kernel, n, lo, hi)
    if isinstance(expr, ProductTerm):
        if weight is None:
            w = expr.f.fn
        else:
            w = lambda x, f=expr.f.fn, g=weight: f(x) * g(x)
        return _term_rank_integral(expr.delta, w, kernel, n, lo, hi)
    if isinstance(expr, SmoothTerm):
        a, b = lo.bound_at(n), hi.bound_at(n)
        cval = expr.f(0.0)
        if cval == 0.0 and expr.f(0.37) == 0.0 and expr.f(-1.1) == 0.0:
            return 0.0
        if weight is None:
            return _quad_piece(expr.f.fn, a, b)
        return _quad_piece(lambda x: expr.f(x) * weight(x), a, b)
    if isinstance(expr, DeltaTerm):
        kern = expr.kernel if expr.kernel is not None else kernel
        if kern is None:
            raise ExpressionError("delta term evaluated without a kernel binding")
        d = kern.derivative(expr.order) if expr.order else kern
        a, b = lo.bound_at(n), hi.bound_at(n)
        prof = getattr(d, "profile", None)
        if prof is not None:
            plo, phi = d.profile_support
            order = getattr(d, "profile_order", 0)
            ulo = max(plo, n * (a - expr.shift))
            uhi = min(phi, n * (b - expr.shift))
            if uhi <= ulo:
                return 0.0
            if weight is None:
                g = lambda u, n=n: (n**order) * prof(u)
            else:
                g = lambda u, n=n, s=expr.shift, w=weight: (
                    (n**order) * prof(u) * w(s + u / n))
            return _quad_piece(g, ulo, uhi, points=[0.0])
        return integrate_rank(d.translate(expr.shift), lo, hi, n, weight=weight)
    if isinstance(expr, CompTerm):
        kern = expr.kernel if expr.kernel is not None else kernel
        if kern is None:
            raise ExpressionError("delta term evaluated without a kernel binding")
        comp = _composite_cached(expr, kern)
        return integrate_rank(comp, lo, hi, n, weight=weight)
    if isinstance(expr, ContractionTerm):
        d3 = convolve(expr.d1, expr.d2)
        return _term_rank_integral(
            DeltaTerm(0, expr.shift, kernel=d3), weight, kernel, n, lo, hi)
    raise ExpressionError(f"cannot integrate node {type(expr).__name__}")


_COMPOSITE_CACHE = {}


def _composite_cached(expr, kern):
    key = (id(expr.inner), id(kern))
    if key not in _COMPOSITE_CACHE:
        _COMPOSITE_CACHE[key] = compose(kern, expr.inner)
    return _COMPOSITE_CACHE[key]


def expr_rank_eval(expr, kernel, n, x):
    """Pointwise value of the bound integrand at rank n (for traces)."""
    if isinstance(expr, SumTerm):
        return sum(expr_rank_eval(p, kernel, n, x) for p in expr.parts)
    if isinstance(expr, ScaleTerm):
        return expr.c * expr_rank_eval(expr.expr, kernel, n, x)
    if isinstance(expr, ProductTerm):
        return expr.f(x) * expr_rank_eval(expr.delta, kernel, n, x)
    if isinstance(expr, SmoothTerm):
        return float(expr.f(x))
    if isinstance(expr, DeltaTerm):
        kern = expr.kernel if expr.kernel is not None else kernel
        d = kern.derivative(expr.order) if expr.order else kern
        return float(d.rank_eval(n, x - expr.shift))
    if isinstance(expr, CompTerm):
        kern = expr.kernel if expr.kernel is not None else kernel
        return float(kern.rank_eval(n, expr.inner(x)))
    if isinstance(expr, ContractionTerm):
        d3 = convolve(expr.d1, expr.d2)
        return float(d3.rank_eval(n, x - expr.shift))
    raise ExpressionError(f"cannot evaluate node {type(expr).__name__}")


def reduce_expr_integral(expr, weight=None, kernel=None,
                         lo=NEG_INF, hi=POS_INF,
                         schedule=DEFAULT_SCHEDULE, tol=1e-9):
    """Reduce the virtual integral of expr * weight over [lo, hi]."""
    lo = VirtualBound.coerce(lo)
    hi = VirtualBound.coerce(hi)
    if isinstance(weight, RealFunction):
        weight = weight.fn
    schedule = list(schedule)
    # Derivative orders above 2 lose too many digits at very high ranks;
    # cap the schedule by the largest order present.
    max_order = _max_delta_order(expr)
    if max_order >= 1:
        cap = 2 ** max(8, 14 - 2 * max_order)
        schedule = [n for n in schedule if n <= cap] or schedule[:5]
    return reduce_sequence(
        schedule,
        lambda n: _term_rank_integral(expr, weight, kernel, n, lo, hi),
        tol)


def _max_delta_order(expr):
    if isinstance(expr, DeltaTerm):
        return expr.order
    if isinstance(expr, SumTerm):
        return max((_max_delta_order(p) for p in expr.parts), default=0)
    if isinstance(expr, (ScaleTerm,)):
        return _max_delta_order(expr.expr)
    if isinstance(expr, ProductTerm):
        return _max_delta_order(expr.delta)
    return 0


# ---------------------------------------------------------------------------
# Equivalence checking
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceVerdict:
    variant: str  # "distinct" | "consistent_equivalent" | "irreducible_side"
    witness: str = ""
    lhs_value: float | None = None
    rhs_value: float | None = None
    battery_size: int = 0
    max_deviation: float | None = None
    side: str = ""

    @property
    def consistent(self):
        return self.variant == "consistent_equivalent"

    def to_json(self):
        out = {"variant": self.variant}
        if self.variant == "distinct":
            out.update(witness=self.witness, lhs=self.lhs_value,
                       rhs=self.rhs_value)
        elif self.variant == "consistent_equivalent":
            out.update(battery=self.battery_size,
                       max_deviation=self.max_deviation)
        else:
            out.update(side=self.side, witness=self.witness)
        return out


def check_equivalence(lhs, rhs, kernel=None, battery=None, tol=1e-7,
                      order=None, schedule=DEFAULT_SCHEDULE):
    """Decide Dirac equivalence of two expressions against a test battery.

    A finite battery can only ever certify "consistent"; any irreducible
    side or any deviation beyond 10*tol is decisive the other way.
    """
    if battery is None:
        battery = standard_battery(order=order)
    elif order is not None:
        battery = [f for f in battery
                   if f.smoothness == C_INF or f.smoothness >= order]
    if not battery:
        raise ValueError("battery must be nonempty")
    max_dev = 0.0
    for f in battery:
        left = reduce_expr_integral(lhs, weight=f, kernel=kernel,
                                    schedule=schedule, tol=tol)
        if not left.reduced:
            return EquivalenceVerdict("irreducible_side", side="lhs",
                                      witness=f.label)
        right = reduce_expr_integral(rhs, weight=f, kernel=kernel,
                                     schedule=schedule, tol=tol)
        if not right.reduced:
            return EquivalenceVerdict("irreducible_side", side="rhs",
                                      witness=f.label)
        dev = abs(left.value - right.value)
        if dev > 10.0 * tol:
            return EquivalenceVerdict("distinct", witness=f.label,
                                      lhs_value=left.value,
                                      rhs_value=right.value)
        max_dev = max(max_dev, dev)
    return EquivalenceVerdict("consistent_equivalent",
                              battery_size=len(battery), max_deviation=max_dev)


# ---------------------------------------------------------------------------
# Kernel-dependence probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbeReport:
    g_label: str
    outcomes: tuple  # of (kernel name, IntegralResult)
    flagged: bool
    reason: str

    def to_json(self):
        return {
            "g": self.g_label,
            "outcomes": [{"kernel": name, "result": res.to_json()}
                         for name, res in self.outcomes],
            "flagged": self.flagged,
            "reason": self.reason,
        }


def kernel_dependence_probe(g, kernels, schedule=DEFAULT_SCHEDULE, tol=1e-6):
    """Integrate delta_k(g(x)) per kernel and flag kernel-dependent results.

    When outcomes differ (divergent vs zero vs distinct finite values) the
    composite admits no kernel-generic operational rule.
    """
    if len(kernels) < 2:
        raise ValueError("probe needs at least two kernels")
    outcomes = []
    for kern in kernels:
        comp = compose(kern, g)
        res = reduce_sequence(
            list(schedule),
            lambda n: integrate_rank(comp, NEG_INF, POS_INF, n),
            1e-9)
        outcomes.append((getattr(kern, "name", kern.label), res))
    kinds = {res.kind for _n, res in outcomes}
    if kinds != {"reduced"}:
        labels = sorted(f"{name}:{res.kind}" for name, res in outcomes)
        flagged = len({res.kind for _n, res in outcomes}) > 1 or \
            "irreducible" in kinds or "undetermined" in kinds
        if flagged:
            return ProbeReport(
                getattr(g, "label", "g"), tuple(outcomes), True,
                "no generic operational rule: outcomes differ in kind "
                f"({', '.join(labels)})",
            )
    vals = [res.value for _n, res in outcomes]
    if max(vals) - min(vals) > tol:
        return ProbeReport(
            getattr(g, "label", "g"), tuple(outcomes), True,
            "no generic operational rule: reduced values disagree "
            f"(spread {max(vals) - min(vals):.3g})",
        )
    return ProbeReport(getattr(g, "label", "g"), tuple(outcomes), False,
                       "all kernels agree")


# ---------------------------------------------------------------------------
# Test-function batteries
# ---------------------------------------------------------------------------

def _poly(coeffs, label):
    # coeffs: ascending powers
    def mk(cs):
        return lambda x, cs=tuple(cs): float(np.polyval(list(reversed(cs)), x))
    derivs = []
    cs = list(coeffs)
    for _ in range(4):
        cs = [i * c for i, c in enumerate(cs)][1:] or [0.0]
        derivs.append(mk(cs))
    return RealFunction(mk(coeffs), derivs=tuple(derivs), smoothness=C_INF,
                        label=label)


def _trig(kind, w):
    s, c = math.sin, math.cos
    if kind == "sin":
        fns = [lambda x, w=w: s(w * x), lambda x, w=w: w * c(w * x),
               lambda x, w=w: -w * w * s(w * x), lambda x, w=w: -w**3 * c(w * x)]
        label = f"sin({w:g}x)"
    else:
        fns = [lambda x, w=w: c(w * x), lambda x, w=w: -w * s(w * x),
               lambda x, w=w: -w * w * c(w * x), lambda x, w=w: w**3 * s(w * x)]
        label = f"cos({w:g}x)"
    return RealFunction(fns[0], derivs=tuple(fns[1:]), smoothness=C_INF,
                        label=label)


def _exp(sign):
    e = math.exp
    fn = lambda x, s=sign: e(s * x)
    derivs = tuple((lambda x, s=sign, k=k: (s**k) * e(s * x)) for k in (1, 2, 3))
    return RealFunction(fn, derivs=derivs, smoothness=C_INF,
                        label=f"exp({'+' if sign > 0 else '-'}x)")


def _runge(b):
    fn = lambda x, b=b: 1.0 / (1.0 + b * x * x)
    d1 = lambda x, b=b: -2.0 * b * x / (1.0 + b * x * x) ** 2
    d2 = lambda x, b=b: (6.0 * b * b * x * x - 2.0 * b) / (1.0 + b * x * x) ** 3
    return RealFunction(fn, derivs=(d1, d2), smoothness=C_INF,
                        label=f"1/(1+{b:g}x^2)")


def _kink():
    # C0 but not C1 at the origin: exercises strong-mode equivalence.
    fn = lambda x: abs(x) * (1.0 + 0.5 * math.sin(3.0 * x))
    return RealFunction(fn, smoothness=0, label="|x|(1+0.5sin(3x))")


def _atan():
    fn = math.atan
    d1 = lambda x: 1.0 / (1.0 + x * x)
    d2 = lambda x: -2.0 * x / (1.0 + x * x) ** 2
    return RealFunction(fn, derivs=(d1, d2), smoothness=C_INF, label="atan(x)")


def _xcos():
    fn = lambda x: x * math.cos(x)
    d1 = lambda x: math.cos(x) - x * math.sin(x)
    d2 = lambda x: -2.0 * math.sin(x) - x * math.cos(x)
    return RealFunction(fn, derivs=(d1, d2), smoothness=C_INF, label="x*cos(x)")


def _gauss():
    e = math.exp
    fn = lambda x: e(-0.25 * x * x)
    d1 = lambda x: -0.5 * x * e(-0.25 * x * x)
    d2 = lambda x: (0.25 * x * x - 0.5) * e(-0.25 * x * x)
    return RealFunction(fn, derivs=(d1, d2), smoothness=C_INF,
                        label="exp(-x^2/4)")


def standard_battery(order=None):
    """Default 20-function battery: polynomials to degree 4, three trig
    frequencies, exponentials, Runge rationals and one C0-only function."""
    fns = [
        _poly([1.0], "1"),
        _poly([0.0, 1.0], "x"),
        _poly([0.0, 0.0, 1.0], "x^2"),
        _poly([0.0, 0.0, 0.0, 1.0], "x^3"),
        _poly([0.0, 0.0, 0.0, 0.0, 1.0], "x^4"),
        _trig("sin", 1.0), _trig("cos", 1.0),
        _trig("sin", 2.0), _trig("cos", 2.0),
        _trig("sin", 0.5), _trig("cos", 0.5),
        _exp(1.0), _exp(-1.0),
        _runge(1.0), _runge(0.25),
        _kink(),
        _xcos(),
        _atan(),
        _gauss(),
        _poly([2.0, 0.5, 0.0, -0.1], "2+0.5x-0.1x^3"),
    ]
    if order is not None:
        fns = [f for f in fns if f.smoothness == C_INF or f.smoothness >= order]
    return fns


def sift_battery():
    """10 smooth functions used by the sifting acceptance checks."""
    return [
        _poly([1.0], "1"),
        _poly([0.0, 1.0], "x"),
        _poly([5.0, 0.0, 1.0], "x^2+5"),
        _poly([0.0, 0.0, 0.0, 1.0], "x^3"),
        _trig("cos", 1.0),
        _trig("sin", 2.0),
        _exp(-1.0),
        _runge(1.0),
        _xcos(),
        _gauss(),
    ]
