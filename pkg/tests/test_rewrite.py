import math

import pytest

from deltacalc.errors import ExpressionError, RewriteError, SmoothnessError
from deltacalc.rewrite import (
    STRONG,
    CompTerm,
    DeltaTerm,
    NormalForm,
    ProductTerm,
    ScaleTerm,
    SmoothTerm,
    SumTerm,
    check_equivalence,
    evaluate_normal_form,
    kernel_dependence_probe,
    reduce_expr_integral,
    rewrite_composition,
    rewrite_convolution,
    rewrite_deriv_product,
    rewrite_product,
    sift_battery,
    simplify,
    standard_battery,
)
from deltacalc.roots import certify_hypotheses, find_simple_roots
from deltacalc.vfun import C_INF, RealFunction, const_function


def _rf(fn, *derivs, label="g", smoothness=C_INF):
    return RealFunction(fn, derivs=tuple(derivs), smoothness=smoothness,
                        label=label)


X2M4 = _rf(lambda x: x * x - 4.0, lambda x: 2.0 * x, label="x^2-4")
COS = _rf(math.cos, lambda x: -math.sin(x), lambda x: -math.cos(x),
          label="cos")


# -- normal forms ----------------------------------------------------------

def test_terms_sorted_and_merged():
    nf = NormalForm.from_terms([(1.0, 0, 2.0), (0.5, 1, -1.0),
                                (2.0, 0, 2.0), (0.25, 0, -1.0)])
    assert nf.terms == ((0.25, 0, -1.0), (0.5, 1, -1.0), (3.0, 0, 2.0))


def test_zero_coefficients_drop_to_residual():
    nf = NormalForm.from_terms([(1.0, 0, 0.0), (-1.0, 0, 0.0)])
    assert nf.terms == ()
    assert nf.is_zero


def test_render_uses_delta_glyph():
    nf = NormalForm.from_terms([(0.25, 0, 2.0), (0.25, 0, -2.0)])
    assert nf.render() == "0.25·δ(x+2) + 0.25·δ(x−2)"


def test_render_derivative_orders():
    nf = NormalForm.from_terms([(1.0, 1, 0.0), (2.0, 3, 0.0)])
    text = nf.render()
    assert "δ′(x)" in text and "δ^(3)(x)" in text


def test_json_shape():
    nf = NormalForm.from_terms([(1.5, 2, 0.5)], strength=("order", 2))
    payload = nf.to_json()
    assert payload["terms"] == [{"c": 1.5, "k": 2, "a": 0.5}]
    assert payload["strength"] == {"order": 2}


# -- composition rule ------------------------------------------------------

def test_composition_quadratic():
    nf = rewrite_composition(X2M4)
    assert nf.strength == STRONG
    assert len(nf.terms) == 2
    (c1, k1, a1), (c2, k2, a2) = nf.terms
    assert (k1, k2) == (0, 0)
    assert abs(a1 + 2.0) < 1e-10 and abs(a2 - 2.0) < 1e-10
    assert abs(c1 - 0.25) < 1e-10 and abs(c2 - 0.25) < 1e-10


def test_composition_linear_scaling():
    for a in (-10.0, -2.0, -0.5, 0.5, 2.0, 10.0):
        g = _rf(lambda x, a=a: a * x, lambda x, a=a: a, label=f"{a}x")
        nf = rewrite_composition(g)
        assert len(nf.terms) == 1
        c, k, loc = nf.terms[0]
        assert k == 0 and abs(loc) < 1e-10
        assert abs(c - 1.0 / abs(a)) < 1e-12


def test_composition_vanish():
    g = _rf(lambda x: math.sin(x) + 2.0, math.cos, label="sin x + 2")
    nf = rewrite_composition(g)
    assert nf.is_zero


def test_composition_refuses_uncertified():
    g = _rf(lambda x: x * x, lambda x: 2.0 * x, label="x^2")
    with pytest.raises(RewriteError, match="violated"):
        rewrite_composition(g)


def test_composition_refuses_scan_risk():
    g = _rf(math.exp, math.exp, label="exp(x)")
    cert = certify_hypotheses(g, [], window=(-20.0, 3.0))
    with pytest.raises(RewriteError, match="outside_scan_risk"):
        rewrite_composition(g, cert=cert)


# -- product rules ---------------------------------------------------------

def test_product_rule():
    nf = rewrite_product(COS, 0.0)
    assert nf.terms == ((1.0, 0, 0.0),)


def test_product_zero_coefficient():
    nf = rewrite_product(_rf(lambda x: x, label="x"), 0.0)
    assert nf.is_zero


def test_product_shifted():
    nf = rewrite_product(_rf(lambda x: x * x + 5.0, label="x^2+5"), 2.0)
    assert nf.terms == ((9.0, 0, 2.0),)


def test_product_rejects_undefined_point():
    f = _rf(lambda x: 1.0 / x, label="1/x")
    with pytest.raises(RewriteError):
        rewrite_product(f, 0.0)


def test_deriv_product_order_zero_degenerates():
    g = _rf(lambda x: x * x + 5.0, lambda x: 2.0 * x, label="x^2+5")
    assert rewrite_deriv_product(g, 0, 2.0).terms == \
        rewrite_product(g, 2.0).terms


def test_deriv_product_linear_g():
    g = _rf(lambda x: x, lambda x: 1.0, lambda x: 0.0, label="x")
    nf = rewrite_deriv_product(g, 1, 0.0)
    # x * delta'(x) rewrites to -delta(x); the delta' coefficient g(0)=0
    # drops out.
    assert nf.terms == ((-1.0, 0, 0.0),)
    assert nf.strength == ("order", 1)


def test_deriv_product_constant_g():
    g = const_function(3.0)
    nf = rewrite_deriv_product(g, 2, 0.0)
    assert nf.terms == ((3.0, 2, 0.0),)
    assert nf.strength == ("order", 2)


def test_deriv_product_smoothness_gate():
    kink = _rf(abs, label="|x|", smoothness=0)
    with pytest.raises(SmoothnessError):
        rewrite_deriv_product(kink, 1, 0.0)


def test_strength_merging():
    strong = rewrite_product(COS, 0.0)
    order1 = rewrite_deriv_product(
        _rf(lambda x: x, lambda x: 1.0, lambda x: 0.0, label="x"), 1, 0.0)
    combined = NormalForm.from_terms(
        list(strong.terms) + list(order1.terms),
        strength=("order", 1))
    assert combined.strength == ("order", 1)


# -- convolution rule ------------------------------------------------------

def test_convolution_rule(bump):
    nf = rewrite_convolution(bump, bump, a=1.5)
    assert nf.terms == ((1.0, 0, 1.5),)
    assert nf.kernel_binding is not None
    assert nf.kernel_binding.name == "convolution"


def test_convolution_rule_rejects_square(square, bump):
    with pytest.raises(SmoothnessError):
        rewrite_convolution(square, bump)


# -- evaluation ------------------------------------------------------------

def test_evaluate_normal_form_sifting():
    nf = rewrite_composition(X2M4)
    got = evaluate_normal_form(nf, COS)
    assert abs(got - math.cos(2.0) / 2.0) < 1e-10


def test_evaluate_normal_form_derivative_sign():
    nf = NormalForm.from_terms([(1.0, 1, 0.0)])
    f = _rf(lambda x: x, lambda x: 1.0, label="x")
    assert evaluate_normal_form(nf, f) == -1.0


def test_evaluate_smoothness_rejection():
    nf = NormalForm.from_terms([(1.0, 2, 0.0)])
    kink = _rf(abs, label="|x|", smoothness=0)
    with pytest.raises(SmoothnessError, match="order 2"):
        evaluate_normal_form(nf, kink)


# -- simplify over the AST -------------------------------------------------

def test_simplify_sum_and_scale():
    expr = SumTerm((
        ScaleTerm(2.0, DeltaTerm(0, 1.0)),
        DeltaTerm(0, -1.0),
    ))
    nf = simplify(expr)
    assert nf.terms == ((1.0, 0, -1.0), (2.0, 0, 1.0))


def test_simplify_product_with_composition():
    expr = ProductTerm(COS, CompTerm(X2M4))
    nf = simplify(expr)
    got = sum(c for c, _k, _a in nf.terms)
    assert abs(got - 2.0 * (math.cos(2.0) / 4.0)) < 1e-10


def test_product_term_rejects_double_delta():
    with pytest.raises(ExpressionError):
        ProductTerm(COS, ScaleTerm(1.0, DeltaTerm()))


# -- numeric cross-checks --------------------------------------------------

def test_symbolic_numeric_consistency(bump, square, mix):
    # Every certified composition must integrate (numerically, per kernel)
    # to the symbolic normal-form value.
    nf = rewrite_composition(X2M4)
    for kern in (bump, square, mix):
        for f in standard_battery()[:8]:
            sym = evaluate_normal_form(nf, f)
            res = reduce_expr_integral(CompTerm(X2M4), weight=f, kernel=kern)
            assert res.reduced
            assert abs(sym - res.value) <= 1e-5


def test_check_equivalence_consistent(bump):
    lhs = CompTerm(_rf(lambda x: 2.0 * x, lambda x: 2.0, label="2x"))
    rhs = ScaleTerm(0.5, DeltaTerm())
    verdict = check_equivalence(lhs, rhs, kernel=bump)
    assert verdict.variant == "consistent_equivalent"
    assert verdict.battery_size == 20
    assert verdict.max_deviation <= 1e-6


def test_check_equivalence_distinct(bump):
    verdict = check_equivalence(DeltaTerm(0, 0.0), DeltaTerm(0, 1.0),
                                kernel=bump)
    assert verdict.variant == "distinct"
    assert verdict.witness


def test_check_equivalence_irreducible_side(square):
    lhs = CompTerm(_rf(lambda x: x * x, lambda x: 2.0 * x, label="x^2"))
    rhs = SmoothTerm(const_function(0.0, label="0"))
    verdict = check_equivalence(lhs, rhs, kernel=square)
    assert verdict.variant == "irreducible_side"
    assert verdict.side == "lhs"


def test_order_filter_drops_kink():
    battery = standard_battery(order=1)
    assert all(f.smoothness == C_INF or f.smoothness >= 1 for f in battery)
    assert len(battery) == 19  # the C^0 member is excluded


def test_batteries_sizes():
    assert len(standard_battery()) == 20
    assert len(sift_battery()) == 10


# -- kernel dependence probe -----------------------------------------------

def test_probe_flags_x_squared(minus, square):
    g = _rf(lambda x: x * x, lambda x: 2.0 * x, label="x^2")
    rep = kernel_dependence_probe(g, [minus, square])
    assert rep.flagged
    kinds = {res.kind for _n, res in rep.outcomes}
    assert kinds == {"reduced", "irreducible"}


def test_probe_flags_exp(minus, plus):
    g = _rf(math.exp, math.exp, label="exp(x)")
    rep = kernel_dependence_probe(g, [minus, plus])
    assert rep.flagged


def test_probe_passes_quadratic(bump, square, mix):
    rep = kernel_dependence_probe(X2M4, [bump, square, mix])
    assert not rep.flagged
    for _name, res in rep.outcomes:
        assert abs(res.value - 0.5) < 1e-6


def test_probe_needs_two_kernels(bump):
    with pytest.raises(ValueError):
        kernel_dependence_probe(X2M4, [bump])
