import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltacalc.errors import RankEvaluationError
from deltacalc.vnum import (
    NumberClass,
    VirtualNumber,
    classify,
    eventually_compare,
    from_sequence,
    make_const,
    omega,
    partial,
    shadow,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


def test_omega_and_partial_values():
    w = omega()
    p = partial()
    assert w.value_at(7) == 7.0
    assert p.value_at(8) == 0.125
    prod = w * p
    assert all(prod.value_at(n) == 1.0 for n in (1, 2, 17, 1024))


@given(finite, finite)
@settings(max_examples=60, deadline=None)
def test_arithmetic_is_exact_per_rank(a, b):
    # Per-rank arithmetic must agree exactly with 64-bit float arithmetic.
    va, vb = make_const(a), make_const(b)
    for n in (1, 3, 100):
        assert (va + vb).value_at(n) == a + b
        assert (va - vb).value_at(n) == a - b
        assert (va * vb).value_at(n) == a * b


@given(finite)
@settings(max_examples=40, deadline=None)
def test_negation_antisymmetry(a):
    v = make_const(a)
    assert (-(-v)).value_at(5) == v.value_at(5)
    assert (v + (-v)).value_at(5) == 0.0


def test_division_by_rank_zero_raises():
    num = make_const(1.0)
    den = from_sequence(lambda n: 0.0 if n == 3 else 1.0)
    q = num / den
    assert q.value_at(2) == 1.0
    with pytest.raises(RankEvaluationError):
        q.value_at(3)


def test_classify_partial_is_infinitesimal():
    assert classify(partial()) is NumberClass.INFINITESIMAL


def test_classify_omega_is_infinite():
    assert classify(omega()) is NumberClass.INFINITE


def test_classify_finite_appreciable():
    v = from_sequence(lambda n: 2.0 + 1.0 / n)
    assert classify(v) is NumberClass.FINITE_APPRECIABLE


def test_classify_alternating_is_indeterminate():
    # A power-of-two schedule would see (-1)^n as constant; probe on
    # consecutive ranks instead.
    v = from_sequence(lambda n: (-1.0) ** n)
    assert classify(v, schedule=range(1, 30)) is NumberClass.INDETERMINATE


def test_classify_decaying_oscillation():
    # Magnitudes shrink monotonically, so this never classifies as
    # appreciable or infinite even though the sign flips every rank.
    v = from_sequence(lambda n: ((-1.0) ** n) / n**2)
    cls = classify(v, schedule=range(1, 40))
    assert cls in (NumberClass.INFINITESIMAL, NumberClass.INDETERMINATE)


def test_shadow_const_exact():
    assert shadow(make_const(math.pi)) == math.pi


def test_shadow_extrapolates_1_over_n():
    v = from_sequence(lambda n: math.pi + 1.0 / n)
    s = shadow(v)
    assert s is not None
    assert abs(s - math.pi) < 1e-9


def test_shadow_none_for_divergent():
    assert shadow(omega()) is None


def test_eventually_compare_cutoff():
    # 1/n < 0.1 holds from rank 11 on.
    v = partial()
    verdict = eventually_compare(v, make_const(0.1), "<",
                                 schedule=range(1, 101))
    assert verdict.holds
    assert verdict.cutoff_rank == 11


def test_eventually_compare_fails():
    verdict = eventually_compare(omega(), make_const(5.0), "<",
                                 schedule=range(1, 101))
    assert verdict.variant == "fails"
    assert verdict.cutoff_rank == 5


def test_eventually_compare_undetermined():
    v = from_sequence(lambda n: (-1.0) ** n)
    verdict = eventually_compare(v, make_const(0.0), "<", schedule=range(1, 10))
    assert verdict.variant == "undetermined"


def test_pow_and_abs():
    v = from_sequence(lambda n: -2.0)
    assert abs(v).value_at(4) == 2.0
    assert (v**3).value_at(4) == -8.0


def test_rank_must_be_positive_integer():
    with pytest.raises(ValueError):
        partial().value_at(0)
    with pytest.raises(ValueError):
        partial().value_at(2.5)
