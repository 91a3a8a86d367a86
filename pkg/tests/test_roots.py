import math

from deltacalc.roots import (
    DERIV_FLOOR,
    certify_hypotheses,
    find_simple_roots,
)
from deltacalc.vfun import RealFunction


def _rf(fn, d, label):
    return RealFunction(fn, derivs=(d,), label=label)


QUAD = _rf(lambda x: x * x - 4.0, lambda x: 2.0 * x, "x^2-4")
SIN = _rf(math.sin, math.cos, "sin x")


def test_find_roots_quadratic():
    recs = find_simple_roots(QUAD, window=(-10, 10))
    assert [round(r.a, 12) for r in recs] == [-2.0, 2.0]
    assert abs(recs[0].g_prime + 4.0) < 1e-9
    assert abs(recs[1].g_prime - 4.0) < 1e-9


def test_find_roots_sin_window():
    recs = find_simple_roots(SIN, window=(-1.0, 7.0))
    assert len(recs) == 3
    assert abs(recs[0].a) < 1e-12
    assert abs(recs[1].a - math.pi) < 1e-12
    assert abs(recs[2].a - 2.0 * math.pi) < 1e-12


def test_roots_sorted_ascending():
    recs = find_simple_roots(SIN, window=(-8.0, 8.0))
    locs = [r.a for r in recs]
    assert locs == sorted(locs)


def test_certify_quadratic():
    recs = find_simple_roots(QUAD, window=(-10, 10))
    cert = certify_hypotheses(QUAD, recs, window=(-10, 10))
    assert cert.certified
    assert cert.r is not None and cert.r > 1.0
    for rec in cert.roots:
        lo, hi = rec.bracket
        assert lo < rec.a < hi
    # Brackets disjoint.
    assert cert.roots[0].bracket[1] < cert.roots[1].bracket[0]


def test_certify_sin_restricted_window():
    recs = find_simple_roots(SIN, window=(-1.0, 7.0))
    cert = certify_hypotheses(SIN, recs, window=(-1.0, 7.0))
    assert cert.certified


def test_no_roots_still_certifies():
    g = _rf(lambda x: math.sin(x) + 2.0, math.cos, "sin x + 2")
    recs = find_simple_roots(g)
    assert recs == []
    cert = certify_hypotheses(g, recs)
    assert cert.certified
    assert abs(cert.r - 0.5) < 1e-6  # min |g| = 1, r = half of it


def test_tangency_on_grid_violates():
    g = _rf(lambda x: x * x, lambda x: 2.0 * x, "x^2")
    recs = find_simple_roots(g, window=(-10, 10))
    cert = certify_hypotheses(g, recs, window=(-10, 10))
    assert cert.verdict == "violated"
    assert "non-simple" in cert.reason


def test_tangency_off_grid_violates():
    # The zero touch at x = 0.3 falls between sample points; the dip
    # refinement has to find it.
    g = _rf(lambda x: (x - 0.3) ** 2, lambda x: 2.0 * (x - 0.3), "(x-0.3)^2")
    recs = find_simple_roots(g, window=(-10, 10))
    assert recs == []
    cert = certify_hypotheses(g, recs, window=(-10, 10))
    assert cert.verdict == "violated"
    assert "without sign change" in cert.reason


def test_axis_asymptote_is_scan_risk():
    g = _rf(math.exp, math.exp, "exp(x)")
    cert = certify_hypotheses(g, [], window=(-20.0, 3.0))
    assert cert.verdict == "outside_scan_risk"
    assert not cert.certified


def test_derivative_floor():
    # A sign change with a tiny slope at the crossing: 1/|g'| would be
    # numeric noise, so certification refuses.
    eps = DERIV_FLOOR / 10.0
    g = _rf(lambda x: eps * x, lambda x: eps, "eps*x")
    recs = find_simple_roots(g, window=(-10, 10))
    cert = certify_hypotheses(g, recs, window=(-10, 10))
    assert cert.verdict == "violated"


def test_certificate_json():
    recs = find_simple_roots(QUAD, window=(-10, 10))
    cert = certify_hypotheses(QUAD, recs, window=(-10, 10))
    payload = cert.to_json()
    assert payload["verdict"] == "certified"
    assert len(payload["roots"]) == 2
    assert payload["roots"][0]["a"] == cert.roots[0].a
    assert payload["scan_window"] == [-10.0, 10.0]


def test_opaque_callable_uses_finite_differences():
    recs = find_simple_roots(lambda x: x - 1.25, window=(-5, 5))
    assert len(recs) == 1
    assert abs(recs[0].g_prime - 1.0) < 1e-6
