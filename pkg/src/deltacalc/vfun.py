"""Virtual functions and Dirac kernels.

A virtual function is a rank-indexed family of real functions f_n.  The
kernels built here are all of the self-similar form f_n(x) = n * p(n x)
for a fixed unit-rank profile p supported on a bounded interval; that makes
per-rank supports, derivatives and convolutions cheap to manipulate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SmoothnessError
from .limits import DEFAULT_SCHEDULE
from .vnum import NumberClass, VirtualNumber, classify, from_sequence

__all__ = [
    "RealFunction",
    "VirtualFunction",
    "DiracKernel",
    "DiracCertificate",
    "DiracFailure",
    "C_INF",
    "bump_delta",
    "square_delta",
    "shifted_delta",
    "mixture",
    "cauchy_psi",
    "point_altered_delta",
    "eval_at",
    "check_dirac",
    "kernel_to_json",
    "kernel_from_json",
    "BUMP_NORMALIZATION",
]

#: Smoothness marker for infinitely differentiable functions.
C_INF = math.inf

#: Marker for functions that are not even continuous.
DISCONTINUOUS = -1


# ---------------------------------------------------------------------------
# Real functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RealFunction:
    """A real function together with optional analytic derivatives.

    `derivs` lists rules for f', f'', ... in order; `smoothness` is the
    declared class (math.inf for C-infinity, an integer k for C^k, -1 for
    discontinuous).
    """

    fn: object
    derivs: tuple = ()
    smoothness: float = C_INF
    label: str = ""

    def __call__(self, x):
        return self.fn(x)

    def derivative(self, k=1):
        if k == 0:
            return self
        if self.smoothness != C_INF and self.smoothness < k:
            raise SmoothnessError(
                f"{self.label or 'function'} is only C^{self.smoothness}, "
                f"cannot take derivative of order {k}"
            )
        if len(self.derivs) >= k:
            new_smooth = C_INF if self.smoothness == C_INF else self.smoothness - k
            return RealFunction(
                self.derivs[k - 1],
                derivs=self.derivs[k:],
                smoothness=new_smooth,
                label=f"{self.label}^({k})" if self.label else "",
            )
        # Fall back to finite differences on the last analytic derivative.
        base = self if not self.derivs else self.derivative(len(self.derivs))
        out = base
        for _ in range(k - len(self.derivs)):
            out = _fd_derivative(out)
        return out

    def deriv_value(self, k, x):
        return self.derivative(k)(x)


def _fd_derivative(f):
    def d(x, f=f):
        h = 1e-5 * max(1.0, abs(x))
        return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)

    new_smooth = C_INF if f.smoothness == C_INF else max(f.smoothness - 1, 0)
    return RealFunction(d, smoothness=new_smooth, label=f"fd[{f.label}]")


def const_function(c, label=None):
    c = float(c)
    zero = RealFunction(lambda x: 0.0, smoothness=C_INF, label="0")
    return RealFunction(
        lambda x, c=c: c,
        derivs=(zero.fn,),
        smoothness=C_INF,
        label=label if label is not None else f"{c:g}",
    )


# ---------------------------------------------------------------------------
# The normalized bump profile
# ---------------------------------------------------------------------------

def _raw_bump(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        inside = np.abs(x) < 1.0
        w = np.where(inside, 1.0 - x * x, 1.0)
        out = np.where(inside, np.exp(-1.0 / w), 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def _compute_bump_normalization():
    from scipy.integrate import quad

    val, _ = quad(_raw_bump, -1.0, 1.0, epsabs=1e-14, epsrel=1e-14, limit=200)
    return 1.0 / val


#: 1 / integral of exp(-1/(1-x^2)) over (-1, 1); makes the bump unit-mass.
BUMP_NORMALIZATION = _compute_bump_normalization()


def _bump(x):
    return BUMP_NORMALIZATION * _raw_bump(x)


def _bump_d1(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        inside = np.abs(x) < 1.0
        w = np.where(inside, 1.0 - x * x, 1.0)
        out = np.where(inside, _raw_bump(x) * (-2.0 * x) / (w * w), 0.0)
    out = BUMP_NORMALIZATION * out
    if np.ndim(out) == 0:
        return float(out)
    return out


def _bump_d2(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        inside = np.abs(x) < 1.0
        w = np.where(inside, 1.0 - x * x, 1.0)
        term = (-2.0 * x / (w * w)) ** 2 + (-2.0 - 6.0 * x * x) / (w**3)
        out = np.where(inside, _raw_bump(x) * term, 0.0)
    out = BUMP_NORMALIZATION * out
    if np.ndim(out) == 0:
        return float(out)
    return out


_BUMP_PROFILE = RealFunction(
    _bump, derivs=(_bump_d1, _bump_d2), smoothness=C_INF, label="bump"
)


# ---------------------------------------------------------------------------
# Virtual functions
# ---------------------------------------------------------------------------

class VirtualFunction:
    """Rank-indexed family of real functions.

    `support` (optional) maps a rank to the interval outside of which the
    rank function vanishes identically; `deriv_factory` (optional) produces
    the rank-indexed derivative family analytically.
    """

    def __init__(self, rank_eval, support=None, smoothness=C_INF,
                 deriv_factory=None, regions=None, label=""):
        self._rank_eval = rank_eval
        self._support = support
        self.smoothness = smoothness
        self._deriv_factory = deriv_factory
        self.regions = regions
        self.label = label

    def rank_eval(self, n, x):
        return self._rank_eval(n, x)

    def support_interval(self, n):
        if self._support is None:
            return None
        return self._support(n)

    def support_radius(self, n):
        iv = self.support_interval(n)
        if iv is None:
            return None
        return max(abs(iv[0]), abs(iv[1]))

    @property
    def has_support(self):
        return self._support is not None

    def support_radius_sequence(self):
        if self._support is None:
            return None
        return from_sequence(lambda n: self.support_radius(n))

    def derivative(self):
        if self.smoothness != C_INF and self.smoothness < 1:
            raise SmoothnessError(
                f"{self.label or 'virtual function'} is not differentiable"
            )
        if self._deriv_factory is not None:
            return self._deriv_factory()
        return self._fd_rank_derivative()

    def _fd_rank_derivative(self):
        # Step tied to the support so the kernel's internal structure is
        # resolved at every rank.
        def d(n, x, vf=self):
            r = vf.support_radius(n)
            h = (r / 64.0) if r else 1e-6 * max(1.0, abs(x))
            return (vf.rank_eval(n, x + h) - vf.rank_eval(n, x - h)) / (2 * h)

        new_smooth = C_INF if self.smoothness == C_INF else self.smoothness - 1
        return VirtualFunction(
            d, support=self._support, smoothness=new_smooth,
            label=f"d/dx {self.label}",
        )

    def translate(self, b):
        """Shift the argument by the finite real b: x -> x - b."""
        b = float(b)
        support = None
        if self._support is not None:
            support = lambda n, s=self._support, b=b: (s(n)[0] + b, s(n)[1] + b)
        regions = None
        if self.regions is not None:
            def regions(n, a, c, r=self.regions, b=b):
                return [(lo + b, hi + b) for lo, hi in r(n, a - b, c - b)]
        deriv = None
        if self._deriv_factory is not None:
            deriv = lambda vf=self, b=b: vf.derivative().translate(b)
        return VirtualFunction(
            lambda n, x, vf=self, b=b: vf.rank_eval(n, x - b),
            support=support, smoothness=self.smoothness,
            deriv_factory=deriv, regions=regions,
            label=f"{self.label}(x-{b:g})" if self.label else "",
        )

    def eval_at(self, xi):
        """Diagonal evaluation at a virtual number: n -> f_n(xi_n)."""
        return from_sequence(lambda n, vf=self, xi=xi: vf.rank_eval(n, xi.value_at(n)))

    def __repr__(self):
        return f"<VirtualFunction {self.label or 'anonymous'}>"


def eval_at(vf, xi):
    if not isinstance(xi, VirtualNumber):
        xi = VirtualNumber._coerce(xi)
    return vf.eval_at(xi)


# ---------------------------------------------------------------------------
# Dirac kernels (profile-based)
# ---------------------------------------------------------------------------

class DiracKernel(VirtualFunction):
    """Kernel family n * p(n x) for a fixed profile p on [lo, hi]."""

    def __init__(self, profile, profile_support, smoothness, name, params=None):
        self.profile = profile
        self.profile_support = (float(profile_support[0]), float(profile_support[1]))
        self.name = name
        self.params = dict(params or {})
        lo, hi = self.profile_support

        super().__init__(
            lambda n, x, p=profile: n * p(n * x),
            support=lambda n, lo=lo, hi=hi: (lo / n, hi / n),
            smoothness=smoothness,
            label=name,
        )

    def derivative(self, order=1):
        """Rank family of the order-th derivative: n^{k+1} p^{(k)}(n x)."""
        if order == 0:
            return self
        if self.smoothness != C_INF and self.smoothness < order:
            raise SmoothnessError(
                f"kernel {self.name!r} (C^{self.smoothness}) is not "
                f"{order}-times differentiable"
            )
        dp = self.profile.derivative(order)
        lo, hi = self.profile_support
        new_smooth = C_INF if self.smoothness == C_INF else self.smoothness - order
        vf = VirtualFunction(
            lambda n, x, dp=dp, k=order: (n ** (k + 1)) * dp(n * x),
            support=lambda n, lo=lo, hi=hi: (lo / n, hi / n),
            smoothness=new_smooth,
            label=f"{self.name}^({order})",
        )
        vf.profile = dp
        vf.profile_support = self.profile_support
        vf.profile_order = order
        return vf


def bump_delta():
    """Smooth bump kernel: n * p(n x) with p the normalized C-inf bump."""
    return DiracKernel(_BUMP_PROFILE, (-1.0, 1.0), C_INF, "bump")


def square_delta():
    """Square-pulse kernel: n/2 on |x| < 1/n, zero elsewhere."""
    def p(x):
        x = np.asarray(x, dtype=float)
        out = np.where(np.abs(x) < 1.0, 0.5, 0.0)
        if out.ndim == 0:
            return float(out)
        return out

    profile = RealFunction(p, smoothness=DISCONTINUOUS, label="square")
    return DiracKernel(profile, (-1.0, 1.0), DISCONTINUOUS, "square")


def _shift_profile(base, shift):
    fn = lambda x, f=base.fn, s=shift: f(np.asarray(x, dtype=float) - s)
    derivs = tuple(lambda x, d=d, s=shift: d(np.asarray(x, dtype=float) - s)
                   for d in base.derivs)
    return RealFunction(fn, derivs=derivs, smoothness=base.smoothness,
                        label=f"{base.label}(u-{shift:g})")


def shifted_delta(direction="+"):
    """Bump kernel shifted by 2/n: support (1/n, 3/n) for "+", mirrored for "-"."""
    if direction not in ("+", "-"):
        raise ValueError("direction must be '+' or '-'")
    s = 2.0 if direction == "+" else -2.0
    profile = _shift_profile(_BUMP_PROFILE, s)
    support = (s - 1.0, s + 1.0)
    name = "plus" if direction == "+" else "minus"
    return DiracKernel(profile, support, C_INF, name)


def mixture(d1, d2):
    """Pointwise average of two profile kernels; itself a Dirac kernel."""
    for d in (d1, d2):
        if not isinstance(d, DiracKernel):
            raise TypeError("mixture requires profile-based Dirac kernels")
        res = check_dirac(d)
        if isinstance(res, DiracFailure):
            raise ValueError(f"mixture operand {d.name!r} is not a Dirac kernel: {res}")
    p1, p2 = d1.profile, d2.profile
    fn = lambda x: 0.5 * (np.asarray(p1.fn(x)) + np.asarray(p2.fn(x)))
    nder = min(len(p1.derivs), len(p2.derivs))
    derivs = tuple(
        (lambda x, a=p1.derivs[i], b=p2.derivs[i]:
         0.5 * (np.asarray(a(x)) + np.asarray(b(x))))
        for i in range(nder)
    )
    smooth = min(d1.smoothness, d2.smoothness)
    profile = RealFunction(fn, derivs=derivs, smoothness=smooth,
                           label=f"mix[{p1.label},{p2.label}]")
    lo = min(d1.profile_support[0], d2.profile_support[0])
    hi = max(d1.profile_support[1], d2.profile_support[1])
    return DiracKernel(profile, (lo, hi), smooth, "mixture",
                       params={"of": [d1.name, d2.name]})


def cauchy_psi():
    """The Lorentzian family n / (1 + n^2 x^2): sifting-like but nowhere zero."""
    return VirtualFunction(
        lambda n, x: n / (1.0 + (n * x) ** 2),
        support=None,
        smoothness=C_INF,
        label="psi",
    )


def point_altered_delta(at=7.0, value=3.0):
    """Bump family altered at one real point: sifting but not a Dirac kernel.

    Declares the bump's support rule, which the certificate check refutes by
    sampling at the altered point.
    """
    base = bump_delta()

    def ev(n, x, base=base, at=at, value=value):
        if x == at:
            return float(value)
        return base.rank_eval(n, x)

    return VirtualFunction(
        ev,
        support=lambda n: (-1.0 / n, 1.0 / n),
        smoothness=DISCONTINUOUS,
        label=f"bump-altered@{at:g}",
    )


# ---------------------------------------------------------------------------
# Dirac certificate check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DiracCertificate:
    nonnegative: bool
    normalization: float
    normalization_error: float
    support_class: NumberClass
    checked_ranks: tuple

    @property
    def ok(self):
        return True

    def to_json(self):
        return {
            "valid": True,
            "normalization": self.normalization,
            "normalization_error": self.normalization_error,
            "support_class": self.support_class.value,
            "checked_ranks": list(self.checked_ranks),
        }


@dataclass(frozen=True)
class DiracFailure:
    condition: str  # "i" | "ii" | "iii"
    detail: str

    @property
    def ok(self):
        return False

    def __str__(self):
        return f"condition ({self.condition}) violated: {self.detail}"

    def to_json(self):
        return {"valid": False, "condition": self.condition, "detail": self.detail}


def _outside_grid():
    # Fixed sampling grid for the "vanishes outside the support" check;
    # includes every integer in [-10, 10] exactly so single-point
    # modifications at integer abscissae are detected.
    g = np.linspace(-10.0, 10.0, 2001)
    return np.unique(np.concatenate([g, np.arange(-10.0, 11.0)]))


_OUTSIDE_GRID = _outside_grid()


def check_dirac(vf, schedule=DEFAULT_SCHEDULE, tol=1e-6, grid_points=1000):
    """Check the three defining kernel conditions; returns a certificate
    or the first violated condition.

    (i) nonnegativity, sampled on a per-rank grid over the support;
    (ii) full-line integral reduces to 1 within tol;
    (iii) an infinitesimal support radius exists and the function is exactly
    zero at sampled points outside it.
    """
    from .vintegral import reduce_integral

    schedule = list(schedule)

    # (iii) support existence first: without it, (i)'s grid has no bounds.
    if not vf.has_support:
        return DiracFailure("iii", "no vanishing region: function has no "
                                   "declared infinitesimal support")

    # (i) nonnegativity over the support.
    for n in schedule:
        lo, hi = vf.support_interval(n)
        xs = np.linspace(lo, hi, grid_points)
        vals = np.array([vf.rank_eval(n, float(x)) for x in xs])
        if np.min(vals) < -1e-9:
            x_bad = float(xs[int(np.argmin(vals))])
            return DiracFailure(
                "i", f"negative value {np.min(vals):.3g} at x={x_bad:.6g}, rank n={n}"
            )

    # (ii) unit normalization.
    result = reduce_integral(vf, schedule=schedule, tol=min(tol, 1e-8))
    if result.kind != "reduced" or abs(result.value - 1.0) > tol:
        got = result.value if result.kind == "reduced" else result.kind
        return DiracFailure("ii", f"full-line integral is {got}, not 1")

    # (iii) infinitesimal support radius and exact vanishing outside.
    radius_seq = vf.support_radius_sequence()
    cls = classify(radius_seq, schedule=schedule)
    if cls is not NumberClass.INFINITESIMAL:
        return DiracFailure("iii", f"support radius sequence classifies as {cls.value}")
    for n in (schedule[0], schedule[len(schedule) // 2], schedule[-1]):
        r = vf.support_radius(n)
        for x in _OUTSIDE_GRID:
            if abs(x) >= r and vf.rank_eval(n, float(x)) != 0.0:
                return DiracFailure(
                    "iii", f"support/zero check failed at x={float(x):g} "
                           f"(rank n={n}, value {vf.rank_eval(n, float(x)):g})"
                )

    return DiracCertificate(
        nonnegative=True,
        normalization=result.value,
        normalization_error=result.error_estimate,
        support_class=cls,
        checked_ranks=tuple(schedule),
    )


# ---------------------------------------------------------------------------
# Kernel descriptor serialization
# ---------------------------------------------------------------------------

_SUPPORT_RULES = {
    "bump": "(-1/n, 1/n)",
    "square": "(-1/n, 1/n)",
    "plus": "(1/n, 3/n)",
    "minus": "(-3/n, -1/n)",
    "mixture": "(-3/n, 3/n)",
}


def kernel_to_json(kernel):
    smooth = kernel.smoothness
    if smooth == C_INF:
        smooth_text = "C-inf"
    elif smooth < 0:
        smooth_text = "discontinuous"
    else:
        smooth_text = f"C^{smooth}"
    return {
        "name": kernel.name,
        "params": kernel.params,
        "smoothness": smooth_text,
        "support_rule": _SUPPORT_RULES.get(
            kernel.name,
            f"({kernel.profile_support[0]:g}/n, {kernel.profile_support[1]:g}/n)",
        ),
    }


def kernel_from_json(record):
    name = record["name"]
    if name == "bump":
        return bump_delta()
    if name == "square":
        return square_delta()
    if name == "plus":
        return shifted_delta("+")
    if name == "minus":
        return shifted_delta("-")
    if name == "mixture":
        parts = record.get("params", {}).get("of", ["plus", "minus"])
        return mixture(kernel_from_json({"name": parts[0]}),
                       kernel_from_json({"name": parts[1]}))
    raise ValueError(f"unknown kernel descriptor {name!r}")
