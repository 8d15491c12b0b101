"""Exact accumulation of float64 arrays as scaled integers.

Every normal float64 with |v| >= 2**(53 - SCALE_BITS) is an integer multiple
of 2**-SCALE_BITS, so a sum of such values is represented exactly by a Python
integer carrying the multiple. Integer addition is associative, which is what
makes accumulator results independent of how a range was cut into segments.

Alongside each exact sum we carry an exact per-term budget: for a term with
frexp exponent e (so v in [2**(e-1), 2**e)) the unit is 2**(e-53), which is
ulp(v) except exactly at a binade edge where it is 2*ulp(v). Callers scale the
budget by a per-quantity factor covering the rounding error of the routine
that produced the terms (np.log, division, np.log1p).
"""

from __future__ import annotations

import numpy as np

from .errors import CapacityError

# Unit of the scaled integers: 2**-SCALE_BITS. Covers terms down to 2**-67,
# i.e. 1/p and |log1p(-1/p)| for p beyond 2**63.
SCALE_BITS = 120

_TWO53 = 9007199254740992.0  # 2**53, exact
_LOW32 = np.int64(0xFFFFFFFF)


def scaled_sum(values: np.ndarray) -> tuple[int, int]:
    """Exact sum of positive float64 values at scale 2**-SCALE_BITS.

    Returns (total, budget): ``total * 2**-SCALE_BITS`` equals the exact sum
    of the array entries; ``budget * 2**-SCALE_BITS`` is the exact sum of the
    per-term binade units 2**(e_i - 53) described in the module docstring.

    Entries must be positive, finite and >= 2**(53 - SCALE_BITS). Sums stay
    exact for any array length (intermediate 32-bit splits cap partial sums
    below 2**53, where float64 addition of integers is exact).
    """
    if values.size == 0:
        return 0, 0
    mant, exp = np.frexp(values)
    shift = exp.astype(np.int64) + (SCALE_BITS - 53)
    if not (values > 0.0).all() or int(shift.min()) < 0 or not np.isfinite(values).all():
        raise CapacityError("values must be positive, finite and >= 2**%d" % (53 - SCALE_BITS))
    m = (mant * _TWO53).astype(np.int64)  # exact: mant * 2**53 is an integer
    nbins = int(shift.max()) + 1
    lo_sums = np.bincount(shift, weights=(m & _LOW32).astype(np.float64), minlength=nbins)
    hi_sums = np.bincount(shift, weights=(m >> 32).astype(np.float64), minlength=nbins)
    counts = np.bincount(shift, minlength=nbins)
    total = 0
    budget = 0
    for s in range(nbins):
        c = int(counts[s])
        if c:
            total += (((int(hi_sums[s]) << 32) + int(lo_sums[s])) << s)
            budget += c << s
    return total, budget


def scaled_from_float(v: float) -> int:
    """Exact scaled integer for one float64 value (may be negative)."""
    m, e = np.frexp(v)
    shift = int(e) + (SCALE_BITS - 53)
    if shift < 0:
        raise CapacityError("value below 2**%d" % (53 - SCALE_BITS))
    return int(m * _TWO53) << shift


def float_down(scaled: int) -> float:
    """Largest float64 <= scaled * 2**-SCALE_BITS."""
    f = np.ldexp(np.float64(scaled), -SCALE_BITS)  # conversion rounds, ldexp exact
    if int(np.ldexp(f, SCALE_BITS)) > scaled:
        f = np.nextafter(f, -np.inf)
    return float(f)


def float_up(scaled: int) -> float:
    """Smallest float64 >= scaled * 2**-SCALE_BITS."""
    return -float_down(-scaled)
