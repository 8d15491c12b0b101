"""Outward-rounded interval values.

An Enclosure is a closed interval [lo, hi] certified to contain an exact real
quantity. Endpoints are arbitrary-precision mpmath floats, so an Enclosure is
plain immutable data; arithmetic lifts endpoints into a shared interval
context (directed rounding at a chosen working precision) and wraps the
result. The default working precision is 106 bits, two float64 significands;
re-evaluation at 212 bits is the single retry tier used when a comparison
comes back undecided.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

import mpmath
from mpmath.libmp import from_man_exp

from .errors import InvalidRangeError, SingularInputError

DEFAULT_PREC = 106
RETRY_PREC = 212

Real = Union[int, float, Fraction, str, "Enclosure"]

_CONTEXTS: dict[int, mpmath.ctx_iv.MPIntervalContext] = {}


def ivctx(prec: int = DEFAULT_PREC) -> mpmath.ctx_iv.MPIntervalContext:
    """Shared interval context for the given precision (created once)."""
    ctx = _CONTEXTS.get(prec)
    if ctx is None:
        ctx = mpmath.ctx_iv.MPIntervalContext()
        ctx.prec = prec
        _CONTEXTS[prec] = ctx
    return ctx


def mpf_exact(v: int | float) -> mpmath.mpf:
    """Exact mpf for an int or float of any size (no rounding)."""
    if isinstance(v, int):
        return mpmath.mp.make_mpf(from_man_exp(v, 0))
    return mpmath.mpf(v)  # float conversion is exact


def lift(ctx, v: Real):
    """Convert a value into an interval of ctx enclosing it."""
    if isinstance(v, Enclosure):
        return ctx.mpf([v.lo, v.hi])
    if isinstance(v, int):
        return ctx.mpf(mpf_exact(v))
    if isinstance(v, float):
        return ctx.mpf(v)
    if isinstance(v, str):
        v = Fraction(v)
    if isinstance(v, Fraction):
        return ctx.mpf(mpf_exact(v.numerator)) / ctx.mpf(mpf_exact(v.denominator))
    return ctx.mpf(v)  # mpf and friends


class Enclosure:
    """Closed interval [lo, hi] containing an exact real value."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo = lo if isinstance(lo, mpmath.mpf) else mpf_exact(lo) if isinstance(lo, (int, float)) else mpmath.mpf(lo)
        hi = hi if isinstance(hi, mpmath.mpf) else mpf_exact(hi) if isinstance(hi, (int, float)) else mpmath.mpf(hi)
        if not lo <= hi:
            raise ValueError("enclosure endpoints out of order: %s > %s" % (lo, hi))
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def __setattr__(self, name, value):
        raise AttributeError("Enclosure is immutable")

    @classmethod
    def from_iv(cls, x) -> "Enclosure":
        a, b = x._mpi_
        return cls(mpmath.mp.make_mpf(a), mpmath.mp.make_mpf(b))

    @classmethod
    def from_value(cls, v: Real, prec: int = DEFAULT_PREC) -> "Enclosure":
        return cls.from_iv(lift(ivctx(prec), v))

    @classmethod
    def from_dyadic(cls, lo_scaled: int, hi_scaled: int, scale_bits: int) -> "Enclosure":
        """Exact endpoints lo_scaled * 2**-scale_bits, hi_scaled * 2**-scale_bits."""
        return cls(
            mpmath.mp.make_mpf(from_man_exp(lo_scaled, -scale_bits)),
            mpmath.mp.make_mpf(from_man_exp(hi_scaled, -scale_bits)),
        )

    @classmethod
    def from_truncated_digits(cls, digits: str) -> "Enclosure":
        """Enclosure for a decimal expansion truncated after its last digit.

        "0.26149" means a value in [0.26149, 0.26150]; a leading minus means
        the magnitude was truncated, so "-1.33258" lies in [-1.33259, -1.33258].
        """
        s = digits.strip()
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        mag = Fraction(s)
        n = len(s.split(".")[1]) if "." in s else 0
        step = Fraction(1, 10**n)
        lo, hi = (-(mag + step), -mag) if neg else (mag, mag + step)
        ctx = ivctx(200)
        iv_lo, iv_hi = lift(ctx, lo), lift(ctx, hi)
        return cls(mpmath.mp.make_mpf(iv_lo._mpi_[0]), mpmath.mp.make_mpf(iv_hi._mpi_[1]))

    @classmethod
    def top(cls) -> "Enclosure":
        """The uninformative enclosure (-inf, +inf)."""
        return cls(mpmath.mpf("-inf"), mpmath.mpf("+inf"))

    # -- inspection ---------------------------------------------------------

    @property
    def width(self):
        return self.hi - self.lo

    def mid_float(self) -> float:
        return float((self.lo + self.hi) / 2)

    def float_pair(self) -> tuple[float, float]:
        """Directed float64 endpoints (lo rounded down, hi rounded up)."""
        lo = float(self.lo)
        if mpmath.mpf(lo) > self.lo:
            lo = _next_down(lo)
        hi = float(self.hi)
        if mpmath.mpf(hi) < self.hi:
            hi = _next_up(hi)
        return lo, hi

    def is_finite(self) -> bool:
        return mpmath.isfinite(self.lo) and mpmath.isfinite(self.hi)

    def _rational(self, endpoint) -> tuple[int, int]:
        if not mpmath.isfinite(endpoint):
            raise InvalidRangeError("endpoint is not finite")
        sign, man, exp, _ = endpoint._mpf_
        num = -int(man) if sign else int(man)
        if exp >= 0:
            return num << exp, 1
        return num, 1 << -exp

    def lo_rational(self) -> tuple[int, int]:
        """The lower endpoint as an exact (numerator, denominator) pair."""
        return self._rational(self.lo)

    def hi_rational(self) -> tuple[int, int]:
        """The upper endpoint as an exact (numerator, denominator) pair."""
        return self._rational(self.hi)

    def contains(self, v: Real) -> bool:
        if isinstance(v, Enclosure):
            return self.lo <= v.lo and v.hi <= self.hi
        if isinstance(v, Fraction) or isinstance(v, str):
            x = lift(ivctx(200), v)
            return self.lo <= mpmath.mp.make_mpf(x._mpi_[0]) and mpmath.mp.make_mpf(x._mpi_[1]) <= self.hi
        return self.lo <= v <= self.hi

    def overlaps(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def certainly_lt(self, other: Real) -> bool:
        o = other if isinstance(other, Enclosure) else Enclosure.from_value(other)
        return self.hi < o.lo

    def certainly_gt(self, other: Real) -> bool:
        o = other if isinstance(other, Enclosure) else Enclosure.from_value(other)
        return self.lo > o.hi

    def certainly_le(self, other: Real) -> bool:
        o = other if isinstance(other, Enclosure) else Enclosure.from_value(other)
        return self.hi <= o.lo

    def certainly_ge(self, other: Real) -> bool:
        o = other if isinstance(other, Enclosure) else Enclosure.from_value(other)
        return self.lo >= o.hi

    # -- arithmetic at the default precision --------------------------------

    def _binop(self, other: Real, op, reflected: bool = False):
        ctx = ivctx(DEFAULT_PREC)
        a, b = lift(ctx, self), lift(ctx, other)
        if reflected:
            a, b = b, a
        return Enclosure.from_iv(op(a, b))

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: a - b, reflected=True)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, _checked_div)

    def __rtruediv__(self, other):
        return self._binop(other, _checked_div, reflected=True)

    def __neg__(self):
        return Enclosure(-self.hi, -self.lo)

    def __eq__(self, other):
        return isinstance(other, Enclosure) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return "Enclosure[%s, %s]" % (mpmath.nstr(self.lo, 24), mpmath.nstr(self.hi, 24))


def _next_up(f: float) -> float:
    return math.nextafter(f, math.inf)


def _next_down(f: float) -> float:
    return math.nextafter(f, -math.inf)


def _checked_div(a, b):
    if b.a <= 0 and b.b >= 0:
        raise SingularInputError("division by an interval containing zero")
    return a / b


def elog(x: Real, prec: int = DEFAULT_PREC) -> Enclosure:
    ctx = ivctx(prec)
    v = lift(ctx, x)
    if v.a <= 0:
        raise InvalidRangeError("log requires a strictly positive interval")
    return Enclosure.from_iv(ctx.log(v))


def eexp(x: Real, prec: int = DEFAULT_PREC) -> Enclosure:
    ctx = ivctx(prec)
    return Enclosure.from_iv(ctx.exp(lift(ctx, x)))


def esqrt(x: Real, prec: int = DEFAULT_PREC) -> Enclosure:
    ctx = ivctx(prec)
    v = lift(ctx, x)
    if v.a < 0:
        raise InvalidRangeError("sqrt requires a nonnegative interval")
    return Enclosure.from_iv(ctx.sqrt(v))
