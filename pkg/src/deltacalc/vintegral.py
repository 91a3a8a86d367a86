"""The reduced-integral engine.

Virtual integrals are realized per rank (the +/- infinity bounds become
+/- n), the rank sequence I_n is recorded, and the result is either a real
limit ("reduced"), a certified power-law divergence ("irreducible"), or
Undetermined.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import IntegrationWarning, quad
from scipy.interpolate import CubicSpline

from .errors import QuadratureError, SmoothnessError
from .limits import (
    DEFAULT_SCHEDULE,
    SHORT_SCHEDULE,
    extract_limit,
    power_law_exponent,
)
from .vfun import (
    C_INF,
    DiracKernel,
    RealFunction,
    VirtualFunction,
    check_dirac,
)

__all__ = [
    "VirtualBound",
    "IntegralResult",
    "integrate_rank",
    "reduce_integral",
    "sift",
    "sift_derivative",
    "convolve",
    "compose",
]

_QUAD_OPTS = dict(epsabs=1e-12, epsrel=1e-12, limit=200)


# ---------------------------------------------------------------------------
# Bounds
# ---------------------------------------------------------------------------

class VirtualBound:
    """Integration bound realized per rank; +/- infinity maps to +/- n."""

    def __init__(self, fn, kind):
        self._fn = fn
        self.kind = kind

    def bound_at(self, n):
        return float(self._fn(n))

    @classmethod
    def neg_infinity(cls):
        return cls(lambda n: -float(n), "neg_infinity")

    @classmethod
    def pos_infinity(cls):
        return cls(lambda n: float(n), "pos_infinity")

    @classmethod
    def const(cls, r):
        r = float(r)
        if not math.isfinite(r):
            raise ValueError("constant bound must be finite")
        return cls(lambda n: r, "const")

    @classmethod
    def from_sequence(cls, fn):
        return cls(fn, "sequence")

    @classmethod
    def coerce(cls, b):
        if isinstance(b, VirtualBound):
            return b
        if b == math.inf:
            return cls.pos_infinity()
        if b == -math.inf:
            return cls.neg_infinity()
        return cls.const(b)

    def __repr__(self):
        return f"VirtualBound({self.kind})"


NEG_INF = VirtualBound.neg_infinity()
POS_INF = VirtualBound.pos_infinity()


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegralResult:
    kind: str  # "reduced" | "irreducible" | "undetermined"
    value: float | None = None
    error_estimate: float | None = None
    exponent: float | None = None
    sign: float | None = None
    rank_values: tuple = field(default_factory=tuple)

    @property
    def reduced(self):
        return self.kind == "reduced"

    def to_json(self):
        out = {"variant": self.kind,
               "rank_values": [[n, v] for n, v in self.rank_values]}
        if self.kind == "reduced":
            out["value"] = self.value
            out["error"] = self.error_estimate
        elif self.kind == "irreducible":
            out["exponent"] = self.exponent
            out["sign"] = self.sign
        return out


def _reduced(value, err, pairs):
    return IntegralResult("reduced", value=float(value),
                          error_estimate=float(err), rank_values=tuple(pairs))


def _classify_sequence(schedule, values, tol):
    pairs = tuple(zip(schedule, values))
    lim = extract_limit(values, schedule, tol=tol)
    if lim is not None:
        return _reduced(lim[0], lim[1], pairs)
    fit = power_law_exponent(schedule, values)
    if fit is not None:
        p, _r2, sign = fit
        return IntegralResult("irreducible", exponent=p, sign=sign,
                              rank_values=pairs)
    return IntegralResult("undetermined", rank_values=pairs)


def reduce_sequence(schedule, value_fn, tol, min_probes=7):
    """Incrementally evaluate I_n over the schedule with early stopping.

    Once enough probes agree under extrapolation the remaining (costlier,
    higher-rank) quadratures are skipped; divergent-looking prefixes always
    run the full schedule so the power-law certification sees every probe.
    """
    values = []
    for i, n in enumerate(schedule):
        values.append(value_fn(n))
        if i + 1 >= min_probes and i + 1 < len(schedule):
            prefix = schedule[:i + 1]
            lim = extract_limit(values, prefix, tol=tol)
            if lim is not None:
                return _reduced(lim[0], lim[1], tuple(zip(prefix, values)))
    return _classify_sequence(schedule, values, tol)


# ---------------------------------------------------------------------------
# Per-rank quadrature
# ---------------------------------------------------------------------------

def _quad_piece(f, a, b, points=None):
    if b <= a:
        return 0.0
    try:
        with warnings.catch_warnings():
            # Roundoff warnings are routine for near-zero integrands at the
            # requested absolute tolerance; the limit extractor sees the
            # noise anyway.
            warnings.simplefilter("ignore", IntegrationWarning)
            if points:
                pts = sorted(p for p in points if a < p < b)
                val, err = quad(f, a, b, points=pts or None, **_QUAD_OPTS)
            else:
                val, err = quad(f, a, b, **_QUAD_OPTS)
    except Exception as exc:  # scipy raises on various failures
        raise QuadratureError(f"quadrature failed on [{a:g}, {b:g}]: {exc}") from exc
    if not math.isfinite(val):
        raise QuadratureError(f"quadrature diverged on [{a:g}, {b:g}]",
                              diagnostics={"value": val, "error": err})
    return val


def integrate_rank(vf, lo, hi, n, weight=None):
    """Adaptive quadrature of f_n over [lo(n), hi(n)].

    Integration is restricted to the declared support (or nonzero regions)
    when available, and discontinuity edges become mandatory split points.
    """
    lo = VirtualBound.coerce(lo)
    hi = VirtualBound.coerce(hi)
    a, b = lo.bound_at(n), hi.bound_at(n)
    if a > b:
        raise ValueError(f"empty orientation: lower bound {a} > upper bound {b}")

    if weight is None:
        f = lambda x: vf.rank_eval(n, x)
    else:
        f = lambda x: vf.rank_eval(n, x) * weight(x)

    if vf.regions is not None:
        total = 0.0
        for rlo, rhi in vf.regions(n, a, b):
            total += _quad_piece(f, max(a, rlo), min(b, rhi))
        return total

    iv = vf.support_interval(n)
    if iv is not None:
        slo, shi = iv
        a2, b2 = max(a, slo), min(b, shi)
        if a2 >= b2:
            return 0.0
        # Edges of a discontinuous kernel's support must be split points.
        pts = [slo, shi] if vf.smoothness < 0 else None
        return _quad_piece(f, a2, b2, points=pts)

    return _quad_piece(f, a, b)


def reduce_integral(vf, lo=NEG_INF, hi=POS_INF, schedule=DEFAULT_SCHEDULE,
                    tol=1e-9, weight=None):
    """Compute the rank sequence I_n and reduce it to an IntegralResult."""
    schedule = list(schedule)
    return reduce_sequence(
        schedule, lambda n: integrate_rank(vf, lo, hi, n, weight=weight), tol)


# ---------------------------------------------------------------------------
# Sifting
# ---------------------------------------------------------------------------

def _profile_of(d):
    """(profile, support, derivative order) for self-similar kernels."""
    prof = getattr(d, "profile", None)
    if prof is None:
        return None
    order = getattr(d, "profile_order", 0)
    return prof, d.profile_support, order


def sift(d, f, a=0.0, schedule=DEFAULT_SCHEDULE, tol=1e-9):
    """Reduce the integral of d_n(x - a) f(x); equals f(a) for valid inputs.

    For profile kernels the substitution u = n(x - a) is applied first, so
    per-rank values carry no large-magnitude cancellation.
    """
    a = float(a)
    fn = f.fn if isinstance(f, RealFunction) else f
    schedule = list(schedule)
    info = _profile_of(d)
    if info is not None:
        prof, (plo, phi), order = info
        return reduce_sequence(
            schedule,
            lambda n: _quad_piece(
                lambda u, n=n: (n**order) * prof(u) * fn(a + u / n),
                plo, phi, points=[0.0]),
            tol)
    shifted = d.translate(a)
    return reduce_integral(shifted, schedule=schedule, tol=tol, weight=fn)


def sift_derivative(d, k, f, a=0.0, schedule=SHORT_SCHEDULE, tol=1e-9):
    """Reduce the integral of d_n^{(k)}(x - a) f(x) = (-1)^k f^{(k)}(a).

    Requires a k-times differentiable kernel and a k-times differentiable f.
    The default schedule stops at moderate ranks: the integrand magnitude
    grows like n^k and higher ranks lose the O(1) answer to cancellation.
    """
    k = int(k)
    if k < 0:
        raise ValueError("derivative order must be >= 0")
    if d.smoothness != C_INF and d.smoothness < k:
        raise SmoothnessError(
            f"kernel {getattr(d, 'name', d.label)!r} is not {k}-times differentiable"
        )
    if isinstance(f, RealFunction):
        if f.smoothness != C_INF and f.smoothness < k:
            raise SmoothnessError(
                f"test function {f.label!r} is only C^{f.smoothness}, "
                f"needs C^{k} around a={a:g}"
            )
        fn = f.fn
    else:
        fn = f
    a = float(a)
    schedule = list(schedule)

    dk = d.derivative(k) if isinstance(d, DiracKernel) else _iter_derivative(d, k)
    info = _profile_of(dk)
    if info is not None:
        prof, (plo, phi), order = info
        return reduce_sequence(
            schedule,
            lambda n: _quad_piece(
                lambda u, n=n: (n**order) * prof(u) * fn(a + u / n),
                plo, phi, points=[0.0]),
            tol)
    shifted = dk.translate(a)
    return reduce_integral(shifted, schedule=schedule, tol=tol, weight=fn)


def _iter_derivative(vf, k):
    out = vf
    for _ in range(k):
        out = out.derivative()
    return out


# ---------------------------------------------------------------------------
# Convolution (contraction)
# ---------------------------------------------------------------------------

def _profile_convolution(p1, s1, p2, s2, tol=1e-10, start=513, max_points=16385):
    """Tabulate (p1 * p2)(u) on its support and return a clamped spline.

    Sample count doubles until two refinements agree within tol at the
    coarser grid's nodes.
    """
    lo, hi = s1[0] + s2[0], s1[1] + s2[1]

    def conv_at(u):
        t0, t1 = max(s2[0], u - s1[1]), min(s2[1], u - s1[0])
        if t1 <= t0:
            return 0.0
        val, _ = quad(lambda t: p1(u - t) * p2(t), t0, t1,
                      epsabs=1e-13, epsrel=1e-13, limit=100)
        return val

    n_pts = start
    xs = np.linspace(lo, hi, n_pts)
    ys = np.array([conv_at(u) for u in xs])
    while n_pts < max_points:
        n_new = 2 * n_pts - 1
        xs_new = np.linspace(lo, hi, n_new)
        ys_new = np.empty(n_new)
        ys_new[0::2] = ys
        ys_new[1::2] = [conv_at(u) for u in xs_new[1::2]]
        spline_new = CubicSpline(xs_new, ys_new)
        spline_old = CubicSpline(xs, ys)
        probe = np.linspace(lo, hi, 4 * n_pts + 1)
        diff = float(np.max(np.abs(spline_new(probe) - spline_old(probe))))
        xs, ys, n_pts = xs_new, ys_new, n_new
        if diff <= tol:
            break
    spline = CubicSpline(xs, ys, bc_type="natural")

    def prof(u, spline=spline, lo=lo, hi=hi):
        u_arr = np.asarray(u, dtype=float)
        inside = (u_arr > lo) & (u_arr < hi)
        out = np.where(inside, np.maximum(spline(np.clip(u_arr, lo, hi)), 0.0), 0.0)
        if out.ndim == 0:
            return float(out)
        return out

    return prof, (lo, hi)


_CONVOLVE_CACHE = {}


def convolve(d1, d2, tol=1e-10):
    """Contraction of two continuous profile kernels; a Dirac kernel again.

    The rank family is n * (p1 * p2)(n x): convolving n p1(n .) with
    n p2(n .) rescales the unit-rank profile convolution.  The support adds:
    eps_3 = eps_1 + eps_2.
    """
    for d in (d1, d2):
        if not isinstance(d, DiracKernel):
            raise TypeError("convolve requires profile-based Dirac kernels")
        if d.smoothness < 0:
            raise SmoothnessError(
                f"kernel {d.name!r} is discontinuous; contraction requires "
                "continuous kernels"
            )
    key = (id(d1.profile), id(d2.profile))
    if key not in _CONVOLVE_CACHE:
        prof_fn, support = _profile_convolution(
            d1.profile.fn, d1.profile_support, d2.profile.fn, d2.profile_support,
            tol=tol,
        )
        _CONVOLVE_CACHE[key] = (prof_fn, support)
    prof_fn, support = _CONVOLVE_CACHE[key]
    profile = RealFunction(prof_fn, smoothness=1,
                           label=f"conv[{d1.profile.label},{d2.profile.label}]")
    return DiracKernel(profile, support, 1, "convolution",
                       params={"of": [d1.name, d2.name]})


# ---------------------------------------------------------------------------
# Composition d(g(x)) with nonzero-region tracking
# ---------------------------------------------------------------------------

_SCAN_WINDOW = (-60.0, 60.0)


def _composition_seeds(g, window=_SCAN_WINDOW, grid=8193):
    """Points where |g| comes near zero: sign-change roots plus refined
    local minima of |g|.  These seed the per-rank region search, whose
    regions shrink with the rank and escape any fixed grid."""
    from scipy.optimize import brentq, minimize_scalar

    xs = np.linspace(window[0], window[1], grid)
    vals = np.array([g(float(x)) for x in xs])
    seeds = []
    sign = np.sign(vals)
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        seeds.append(float(brentq(g, xs[i], xs[i + 1], xtol=1e-14, rtol=8.9e-16)))
    mags = np.abs(vals)
    scale = float(np.max(mags)) or 1.0
    for i in range(1, grid - 1):
        if mags[i] <= mags[i - 1] and mags[i] <= mags[i + 1] and mags[i] < 0.05 * scale:
            res = minimize_scalar(lambda x: abs(g(float(x))),
                                  bounds=(float(xs[i - 1]), float(xs[i + 1])),
                                  method="bounded")
            if res.fun < 0.5:
                seeds.append(float(res.x))
    return sorted(seeds)


def _bisect_boundary(inside, x_in, x_out, iters=200):
    for _ in range(iters):
        mid = 0.5 * (x_in + x_out)
        if mid == x_in or mid == x_out:
            break
        if inside(mid):
            x_in = mid
        else:
            x_out = mid
    return 0.5 * (x_in + x_out)


def _inside_regions(inside, a, b, seeds, coarse=4096):
    wlo, whi = max(a, _SCAN_WINDOW[0]), min(b, _SCAN_WINDOW[1])
    pts = []
    if wlo < whi:
        pts.extend(np.linspace(wlo, whi, coarse))
    for s in seeds:
        offs = 1e-14 * (1.8 ** np.arange(0, 85))
        local = np.concatenate([[s], s - offs, s + offs])
        pts.extend(local[(local >= a) & (local <= b)])
    if not pts:
        return []
    pts = np.unique(np.asarray(pts, dtype=float))
    flags = [inside(float(x)) for x in pts]

    regions = []
    i = 0
    m = len(pts)
    while i < m:
        if not flags[i]:
            i += 1
            continue
        j = i
        while j + 1 < m and flags[j + 1]:
            j += 1
        left = pts[i] if i == 0 else _bisect_boundary(inside, pts[i], pts[i - 1])
        right = pts[j] if j == m - 1 else _bisect_boundary(inside, pts[j], pts[j + 1])
        if i == 0 and pts[0] > a:
            left = a if inside(a) else _bisect_boundary(inside, pts[0], a)
        if j == m - 1 and pts[-1] < b:
            right = b if inside(b) else _bisect_boundary(inside, pts[-1], b)
        regions.append((float(left), float(right)))
        i = j + 1
    return regions


def compose(d, g, window=_SCAN_WINDOW):
    """The composite virtual function x -> d_n(g(x)).

    The per-rank nonzero set {x : g(x) in supp(d_n)} is located by a coarse
    scan plus geometric probing around the near-zero seeds of g, so the
    integrator never misses the shrinking regions around roots.
    """
    gfn = g.fn if isinstance(g, RealFunction) else g
    if not d.has_support:
        raise ValueError("compose requires a kernel with declared support")
    seeds = _composition_seeds(gfn, window=window)

    def regions(n, a, b, d=d, gfn=gfn, seeds=seeds):
        slo, shi = d.support_interval(n)
        inside = lambda x: slo < gfn(x) < shi
        return _inside_regions(inside, a, b, seeds)

    label_g = g.label if isinstance(g, RealFunction) else "g"
    return VirtualFunction(
        lambda n, x, d=d, gfn=gfn: d.rank_eval(n, gfn(x)),
        support=None,
        smoothness=min(d.smoothness,
                       g.smoothness if isinstance(g, RealFunction) else C_INF),
        regions=regions,
        label=f"{getattr(d, 'name', d.label)}({label_g})",
    )
