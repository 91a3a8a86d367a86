"""Root location and composition-rule hypothesis certification.

Certification is over a finite scan window; tails that keep |g| small all
the way to a window edge are flagged as OutsideScanRisk rather than
silently certified.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .vfun import RealFunction

__all__ = [
    "RootRecord",
    "HypothesisCertificate",
    "find_simple_roots",
    "certify_hypotheses",
    "DEFAULT_WINDOW",
    "DERIV_FLOOR",
]

DEFAULT_WINDOW = (-50.0, 50.0)
DERIV_FLOOR = 1e-8


@dataclass(frozen=True)
class RootRecord:
    a: float
    g_prime: float
    bracket: tuple

    def to_json(self):
        return {"a": self.a, "g_prime": self.g_prime,
                "bracket": [self.bracket[0], self.bracket[1]]}


@dataclass(frozen=True)
class HypothesisCertificate:
    roots: tuple
    r: float | None
    scan_window: tuple
    verdict: str  # "certified" | "violated" | "outside_scan_risk"
    reason: str = ""

    @property
    def certified(self):
        return self.verdict == "certified"

    def to_json(self):
        return {
            "verdict": self.verdict,
            "reason": self.reason,
            "r": self.r,
            "scan_window": list(self.scan_window),
            "roots": [rec.to_json() for rec in self.roots],
        }


def _fn_of(g):
    return g.fn if isinstance(g, RealFunction) else g


def _deriv_of(g):
    if isinstance(g, RealFunction) and (g.derivs or g.smoothness >= 1
                                        or g.smoothness == float("inf")):
        try:
            return g.derivative(1).fn
        except Exception:
            pass

    def fd(x, f=_fn_of(g)):
        h = 1e-6 * max(1.0, abs(x))
        return (f(x + h) - f(x - h)) / (2 * h)

    return fd


def find_simple_roots(g, window=DEFAULT_WINDOW, grid_size=4096):
    """Locate the sign-change roots of g on the window.

    Sign-change scan on the grid, then bisection (brentq) to ~1e-13 and a
    local derivative estimate.  Roots are returned ascending.  Tangencies
    (zero touches without sign change) do not appear here; they surface as
    Violated verdicts in certify_hypotheses.
    """
    if grid_size < 64:
        raise ValueError("grid_size must be >= 64")
    fn = _fn_of(g)
    dfn = _deriv_of(g)
    a, b = float(window[0]), float(window[1])
    xs = np.linspace(a, b, grid_size + 1)
    vals = np.array([fn(float(x)) for x in xs])

    roots = []
    sign = np.sign(vals)
    for i in np.nonzero(sign == 0)[0]:
        roots.append(float(xs[i]))
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        roots.append(float(brentq(fn, float(xs[i]), float(xs[i + 1]),
                                  xtol=1e-14, rtol=8.9e-16)))
    roots = sorted(set(roots))

    records = []
    for root in roots:
        gp = float(dfn(root))
        records.append(RootRecord(a=root, g_prime=gp, bracket=(root, root)))
    return records


def _monotone_on(fn, lo, hi, samples=65):
    xs = np.linspace(lo, hi, samples)
    vals = np.array([fn(float(x)) for x in xs])
    d = np.diff(vals)
    return bool(np.all(d > 0) or np.all(d < 0))


def certify_hypotheses(g, roots, window=DEFAULT_WINDOW, samples=10001,
                       deriv_floor=DERIV_FLOOR):
    """Certify the composition-rule hypotheses over the scan window.

    Shrinks brackets until disjoint and strictly monotone, takes r as half
    the sampled minimum of |g| outside the brackets, and demands r > 0
    strictly.  Axis-asymptotic tails (|g| at a window edge at or below 2r
    and shrinking toward the edge) downgrade to OutsideScanRisk.
    """
    fn = _fn_of(g)
    a, b = float(window[0]), float(window[1])
    locs = [rec.a for rec in roots]

    # Derivative floor: below it the composition coefficient 1/|g'| is
    # numerically meaningless.
    for rec in roots:
        if abs(rec.g_prime) <= deriv_floor:
            return HypothesisCertificate(
                tuple(roots), None, (a, b), "violated",
                f"non-simple root at x={rec.a:.6g}: derivative vanishes",
            )

    # Bracket construction: start from neighbor/edge gaps, then shrink
    # until strictly monotone.
    shrunk = []
    for i, rec in enumerate(roots):
        gaps = [rec.a - a, b - rec.a]
        if i > 0:
            gaps.append(rec.a - locs[i - 1])
        if i + 1 < len(locs):
            gaps.append(locs[i + 1] - rec.a)
        radius = min(0.45 * min(gaps), 1.0)
        while radius > 1e-10 and not _monotone_on(fn, rec.a - radius, rec.a + radius):
            radius *= 0.5
        if radius <= 1e-10:
            return HypothesisCertificate(
                tuple(roots), None, (a, b), "violated",
                f"clustered roots: no monotone bracket around x={rec.a:.6g}",
            )
        shrunk.append(RootRecord(rec.a, rec.g_prime,
                                 (rec.a - radius, rec.a + radius)))

    for r1, r2 in zip(shrunk, shrunk[1:]):
        if r1.bracket[1] >= r2.bracket[0]:
            return HypothesisCertificate(
                tuple(shrunk), None, (a, b), "violated",
                f"brackets around x={r1.a:.6g} and x={r2.a:.6g} overlap",
            )

    # Outer floor r: half the sampled minimum of |g| outside all brackets.
    xs = np.linspace(a, b, samples)
    outside = np.ones(len(xs), dtype=bool)
    for rec in shrunk:
        outside &= ~((xs >= rec.bracket[0]) & (xs <= rec.bracket[1]))
    xs_out = xs[outside]
    mags = np.array([abs(fn(float(x))) for x in xs_out])
    scale = max(float(np.max(mags)), 1.0) if len(mags) else 1.0

    # Refine suspicious dips: a tangency sits between grid points, so the
    # sampled minimum alone can miss a genuine zero touch.
    min_mag = float(np.min(mags)) if len(mags) else 0.0
    refine_threshold = 0.05 * scale
    step = (b - a) / (samples - 1)
    for i in range(1, len(xs_out) - 1):
        near = mags[i] <= mags[i - 1] and mags[i] <= mags[i + 1]
        # Skip spots where masking stitched samples from the two sides of a
        # bracket together: refining across the gap would rediscover the
        # bracketed root itself.
        contiguous = (xs_out[i + 1] - xs_out[i - 1]) < 4.0 * step
        if near and contiguous and mags[i] < refine_threshold:
            res = minimize_scalar(lambda x: abs(fn(float(x))),
                                  bounds=(float(xs_out[i - 1]), float(xs_out[i + 1])),
                                  method="bounded")
            refined = float(res.fun)
            min_mag = min(min_mag, refined)
            if refined <= 1e-10 * scale:
                dfn = _deriv_of(g)
                return HypothesisCertificate(
                    tuple(shrunk), None, (a, b), "violated",
                    f"non-simple root at x={float(res.x):.6g}: "
                    f"|g| touches zero without sign change "
                    f"(derivative {float(dfn(float(res.x))):.3g})",
                )

    r = min_mag / 2.0
    if r <= 0.0:
        return HypothesisCertificate(
            tuple(shrunk), None, (a, b), "violated",
            "|g| reaches zero outside the root brackets",
        )

    # Axis-asymptotic tails.
    width = b - a
    for edge, inward in ((a, a + 0.01 * width), (b, b - 0.01 * width)):
        if abs(fn(edge)) <= 2.0 * r and abs(fn(edge)) < abs(fn(inward)):
            return HypothesisCertificate(
                tuple(shrunk), r, (a, b), "outside_scan_risk",
                f"|g| is small ({abs(fn(edge)):.3g} <= 2r) and shrinking at "
                f"window edge x={edge:g}; behaviour outside the scan window "
                "may depend on the kernel",
            )

    return HypothesisCertificate(tuple(shrunk), r, (a, b), "certified")
