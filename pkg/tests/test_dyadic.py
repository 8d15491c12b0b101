"""Exactness and bracketing tests for the scaled-integer accumulation layer."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primebounds import dyadic
from primebounds.errors import CapacityError


def exact_fraction(values):
    """Reference: exact rational sum of the float64 values."""
    return sum(Fraction(float(v)) for v in values)


positive_floats = st.floats(
    min_value=2.0**-60, max_value=2.0**40, allow_nan=False, allow_infinity=False
)


@given(st.lists(positive_floats, min_size=0, max_size=300))
def test_scaled_sum_is_exact(vals):
    arr = np.array(vals, dtype=np.float64)
    total, budget = dyadic.scaled_sum(arr)
    assert Fraction(total, 1 << dyadic.SCALE_BITS) == exact_fraction(vals)
    assert budget >= 0


@given(st.lists(positive_floats, min_size=2, max_size=120), st.randoms())
def test_scaled_sum_invariant_under_splitting(vals, rng):
    arr = np.array(vals, dtype=np.float64)
    cut = rng.randrange(1, len(vals))
    t0, b0 = dyadic.scaled_sum(arr)
    t1, b1 = dyadic.scaled_sum(arr[:cut])
    t2, b2 = dyadic.scaled_sum(arr[cut:])
    assert (t1 + t2, b1 + b2) == (t0, b0)


@given(positive_floats)
def test_budget_covers_one_ulp_per_term(v):
    _, budget = dyadic.scaled_sum(np.array([v]))
    ulp = Fraction(math.ulp(v))
    assert Fraction(budget, 1 << dyadic.SCALE_BITS) >= ulp


def test_rejects_values_outside_grid():
    with pytest.raises(CapacityError):
        dyadic.scaled_sum(np.array([2.0**-70]))
    with pytest.raises(CapacityError):
        dyadic.scaled_sum(np.array([-1.0]))
    with pytest.raises(CapacityError):
        dyadic.scaled_sum(np.array([np.inf]))


@given(positive_floats)
def test_scaled_from_float_roundtrips(v):
    scaled = dyadic.scaled_from_float(v)
    assert Fraction(scaled, 1 << dyadic.SCALE_BITS) == Fraction(v)


@given(st.integers(min_value=-(1 << 200), max_value=1 << 200))
@settings(max_examples=300)
def test_float_down_up_bracket(scaled):
    exact = Fraction(scaled, 1 << dyadic.SCALE_BITS)
    lo = dyadic.float_down(scaled)
    hi = dyadic.float_up(scaled)
    assert Fraction(lo) <= exact <= Fraction(hi)
    # the bracket is tight: one step inward crosses the exact value
    if Fraction(lo) < exact:
        assert Fraction(np.nextafter(lo, np.inf)) > exact or Fraction(np.nextafter(lo, np.inf)) == exact
    if Fraction(hi) > exact:
        assert Fraction(np.nextafter(hi, -np.inf)) < exact or Fraction(np.nextafter(hi, -np.inf)) == exact


def test_known_sum_log_primes_to_100():
    # 25 primes below 100; exact rational sum of their float64 logs
    primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
              53, 59, 61, 67, 71, 73, 79, 83, 89, 97]
    logs = np.log(np.array(primes, dtype=np.float64))
    total, budget = dyadic.scaled_sum(logs)
    assert Fraction(total, 1 << dyadic.SCALE_BITS) == exact_fraction(logs)
    # theta(100) = 83.72839... ; float64 term error is far below the budget
    assert abs(total / 2.0**dyadic.SCALE_BITS - 83.72839) < 1e-3
