"""Outward-rounding and containment tests for the interval layer.

Reference values come from 200-bit mpmath point arithmetic: every enclosure
produced from exact inputs must contain the corresponding high-precision
result.
"""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primebounds import dyadic
from primebounds.enclosure import Enclosure, eexp, elog, esqrt
from primebounds.errors import InvalidRangeError, SingularInputError


def mp200(fn, *args):
    with mpmath.workprec(200):
        return fn(*[mpmath.mpf(a) for a in args])


small_ints = st.integers(min_value=1, max_value=10**12)
signed_ints = st.integers(min_value=-(10**12), max_value=10**12)


@given(signed_ints, signed_ints, st.integers(min_value=1, max_value=10**6))
def test_field_arithmetic_contains_exact_rationals(a, b, d):
    x = Enclosure.from_value(Fraction(a, d))
    y = Enclosure.from_value(Fraction(b, d))
    assert (x + y).contains(Fraction(a + b, d))
    assert (x - y).contains(Fraction(a - b, d))
    assert (x * y).contains(Fraction(a * b, d * d))
    if b != 0:
        assert (x / y).contains(Fraction(a, b))


@given(small_ints)
def test_log_exp_contain_high_precision_values(n):
    e = elog(Enclosure.from_value(n))
    assert e.contains(mp200(mpmath.log, n))
    back = eexp(e)
    assert back.contains(n)


@given(small_ints)
def test_sqrt_contains_high_precision_values(n):
    e = esqrt(Enclosure.from_value(n))
    assert e.contains(mp200(mpmath.sqrt, n))


@given(st.fractions(min_value=Fraction(-10**6), max_value=Fraction(10**6), max_denominator=10**9))
def test_from_value_contains_fraction_exactly(q):
    e = Enclosure.from_value(q)
    assert e.contains(q)
    assert e.width <= abs(mpmath.mpf(float(q))) * mpmath.mpf(2) ** -100 + mpmath.mpf(2) ** -100


@given(st.integers(min_value=-(1 << 160), max_value=1 << 160),
       st.integers(min_value=0, max_value=1 << 80))
def test_from_dyadic_is_exact(v, b):
    e = Enclosure.from_dyadic(v - b, v + b, dyadic.SCALE_BITS)
    exact_lo = Fraction(v - b, 1 << dyadic.SCALE_BITS)
    exact_hi = Fraction(v + b, 1 << dyadic.SCALE_BITS)
    assert e.contains(exact_lo) and e.contains(exact_hi)
    assert Fraction(*e.lo_rational()) == exact_lo
    assert Fraction(*e.hi_rational()) == exact_hi


def test_float_pair_brackets():
    e = elog(Enclosure.from_value(2))
    lo, hi = e.float_pair()
    assert lo <= 0.6931471805599453 <= hi
    assert hi - lo <= 3 * 2.0**-52


def test_truncated_digits_bracket():
    # 28 decimal digits of a known constant, truncated toward zero
    e = Enclosure.from_truncated_digits("0.2614972128476427837554268386")
    assert e.width == mpmath.mpf("1e-28")
    assert e.certainly_gt(Fraction(26, 100))
    neg = Enclosure.from_truncated_digits("-1.332582275733220881765828776")
    assert neg.contains("-1.3325822757332208817658287760001")
    assert neg.contains("-1.332582275733220881765828776")
    assert not neg.contains("-1.332582275733220881765828777001")


def test_comparisons_are_tri_state():
    a = Enclosure.from_value(1) / Enclosure.from_value(3)
    b = Enclosure.from_value(2) / Enclosure.from_value(3)
    assert a.certainly_lt(b)
    assert not a.certainly_gt(b)
    # an interval of positive width is never certainly ordered against itself
    assert a.width > 0
    assert not a.certainly_lt(a)
    assert not a.certainly_le(a)
    assert a.overlaps(a)


def test_top_is_absorbing():
    t = Enclosure.top()
    assert not t.is_finite()
    assert not t.certainly_lt(Enclosure.from_value(10**100))
    assert not t.certainly_gt(Enclosure.from_value(-(10**100)))
    assert t.contains(0)


def test_division_by_zero_interval_raises():
    z = Enclosure.from_value(1) - Enclosure.from_value(1)
    with pytest.raises(SingularInputError):
        Enclosure.from_value(1) / z


def test_log_of_nonpositive_raises():
    with pytest.raises(InvalidRangeError):
        elog(Enclosure.from_value(0))
    with pytest.raises(InvalidRangeError):
        elog(Enclosure.from_value(-3))


@given(small_ints, small_ints)
@settings(max_examples=60)
def test_compound_expression_contains_point_value(a, b):
    # (log a) * sqrt(b) / (1 + a/b) against 200-bit evaluation
    ea, eb = Enclosure.from_value(a), Enclosure.from_value(b)
    expr = elog(ea) * esqrt(eb) / (Enclosure.from_value(1) + ea / eb)
    with mpmath.workprec(200):
        ref = mpmath.log(a) * mpmath.sqrt(b) / (1 + mpmath.mpf(a) / b)
    assert expr.contains(ref)
