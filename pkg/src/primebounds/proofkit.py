"""Exact side-condition certificates for the bound machinery.

Several bounds in the registry are justified by auxiliary facts that are
cheap to state but easy to get wrong numerically: a polynomial in y = log x
stays positive on a ray, a rational bound is monotone past its threshold, a
zero-counting expression stays below a target, two elementary expressions
cross exactly once near a hinted location.  This module certifies those
facts with exact rational arithmetic (Sturm sequences over Fraction) or
directed interval arithmetic, and returns machine-checkable certificate
objects rather than bare booleans.

Contents:

* ExactPolynomial  -- dense univariate polynomials over Fraction.
* sturm_positive_on_ray -- decide sign of a polynomial on [a, infinity)
  with an exact rational refutation witness on failure.
* monotone_on_ray / shape_on_ray -- reduce monotonicity of a registry bound
  (in the variable x, for x >= a) to ray-positivity of an explicit
  polynomial in y = log x, then certify that polynomial.
* Frozen helper polynomials used by the registry derivations, with exact
  decimal coefficients.
* zero_count_bound -- enclosure of an explicit upper bound for the number
  of zeta zeros with imaginary part in (0, T].
* check_lemma_preconditions -- verify 4.92*sqrt(x0/log x0) <= T.
* dudek_thresholds -- compare two threshold expressions attached to an
  integer parameter m, in log space.
* ElementaryForm / elementary_crossing -- rigorous sign-change bracketing
  for sums of terms c * t^alpha * log(t)^beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

from .bounds import BoundKind, BoundSpec, Verdict
from .enclosure import (
    DEFAULT_PREC,
    RETRY_PREC,
    Enclosure,
    eexp,
    elog,
    ivctx,
    lift,
)
from .errors import (
    InvalidRangeError,
    NoCertificateError,
    NoSignChangeError,
    UnsupportedKindError,
    ZeroPolynomialError,
)

Rational = Union[int, Fraction]


def _as_fraction(v) -> Fraction:
    """Exact conversion of int / Fraction / decimal string to Fraction.

    Floats are rejected: every constant in this module is meant to be the
    printed decimal, not its binary rounding.
    """
    if isinstance(v, float):
        raise InvalidRangeError(
            "float coefficients are ambiguous; pass str, int, or Fraction"
        )
    return Fraction(v)


# ---------------------------------------------------------------------------
# Exact polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExactPolynomial:
    """Univariate polynomial with Fraction coefficients, ascending order.

    coefficients[i] multiplies y**i.  The zero polynomial is not
    representable; constructing one raises ZeroPolynomialError so that
    degree and leading coefficient are always well defined.
    """

    coefficients: Tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(_as_fraction(c) for c in self.coefficients)
        while coeffs and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if not coeffs:
            raise ZeroPolynomialError("the zero polynomial has no degree")
        object.__setattr__(self, "coefficients", coeffs)

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_strings(cls, ascending: Sequence[str]) -> "ExactPolynomial":
        return cls(tuple(Fraction(s) for s in ascending))

    @classmethod
    def monomial(cls, degree: int, coefficient: Rational = 1) -> "ExactPolynomial":
        if degree < 0:
            raise InvalidRangeError("monomial degree must be >= 0")
        c = _as_fraction(coefficient)
        return cls((Fraction(0),) * degree + (c,))

    # -- basic queries ----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1]

    def is_constant(self) -> bool:
        return self.degree == 0

    # -- arithmetic (exact) ------------------------------------------------

    def _coeff(self, i: int) -> Fraction:
        return self.coefficients[i] if i < len(self.coefficients) else Fraction(0)

    def __add__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        n = max(len(self.coefficients), len(other.coefficients))
        return ExactPolynomial(
            tuple(self._coeff(i) + other._coeff(i) for i in range(n))
        )

    def __sub__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        n = max(len(self.coefficients), len(other.coefficients))
        return ExactPolynomial(
            tuple(self._coeff(i) - other._coeff(i) for i in range(n))
        )

    def __mul__(self, other: "ExactPolynomial") -> "ExactPolynomial":
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return ExactPolynomial(tuple(out))

    def scale(self, factor: Rational) -> "ExactPolynomial":
        f = _as_fraction(factor)
        if f == 0:
            raise ZeroPolynomialError("scaling by zero gives the zero polynomial")
        return ExactPolynomial(tuple(c * f for c in self.coefficients))

    def add_constant(self, constant: Rational) -> "ExactPolynomial":
        c = _as_fraction(constant)
        coeffs = list(self.coefficients)
        coeffs[0] += c
        return ExactPolynomial(tuple(coeffs))

    def derivative(self) -> "ExactPolynomial":
        if self.degree == 0:
            raise ZeroPolynomialError("derivative of a constant is zero")
        return ExactPolynomial(
            tuple(i * c for i, c in enumerate(self.coefficients) if i >= 1)
        )

    def primitive(self) -> "ExactPolynomial":
        """Integer-coefficient multiple with content 1 and the same sign."""
        denom_lcm = 1
        for c in self.coefficients:
            denom_lcm = denom_lcm * c.denominator // math.gcd(
                denom_lcm, c.denominator
            )
        ints = [int(c * denom_lcm) for c in self.coefficients]
        g = 0
        for v in ints:
            g = math.gcd(g, abs(v))
        return ExactPolynomial(tuple(Fraction(v, g) for v in ints))

    # -- evaluation ---------------------------------------------------------

    def eval_exact(self, y: Rational) -> Fraction:
        yf = _as_fraction(y)
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * yf + c
        return acc

    def __call__(self, y: Rational) -> Fraction:
        return self.eval_exact(y)

    def eval_enclosure(self, y, prec: int = DEFAULT_PREC) -> Enclosure:
        ctx = ivctx(prec)
        yv = lift(ctx, y)
        acc = ctx.mpf(0)
        for c in reversed(self.coefficients):
            acc = acc * yv + lift(ctx, c)
        return Enclosure.from_iv(acc)

    def coefficient_strings(self) -> Tuple[str, ...]:
        return tuple(str(c) for c in self.coefficients)


def poly_divmod(
    num: ExactPolynomial, den: ExactPolynomial
) -> Tuple[Optional[ExactPolynomial], Optional[ExactPolynomial]]:
    """Exact division: num = q*den + r with deg r < deg den.

    Returns (q, r); either may be None to encode the zero polynomial.
    """
    rem = list(num.coefficients)
    dc = den.coefficients
    dd = den.degree
    if len(rem) - 1 < dd:
        return None, num
    quo = [Fraction(0)] * (len(rem) - dd)
    inv_lead = 1 / den.leading
    for i in range(len(rem) - 1, dd - 1, -1):
        factor = rem[i] * inv_lead
        if factor == 0:
            continue
        quo[i - dd] = factor
        for j in range(dd + 1):
            rem[i - dd + j] -= factor * dc[j]
    while rem and rem[-1] == 0:
        rem.pop()
    q = ExactPolynomial(tuple(quo)) if any(c != 0 for c in quo) else None
    r = ExactPolynomial(tuple(rem)) if rem else None
    return q, r


def poly_gcd(a: ExactPolynomial, b: ExactPolynomial) -> ExactPolynomial:
    """Monic gcd via the Euclidean algorithm with primitive reduction."""
    p, q = a.primitive(), b.primitive()
    while True:
        _, r = poly_divmod(p, q)
        if r is None:
            break
        p, q = q, r.primitive()
    return q.scale(1 / q.leading)


# ---------------------------------------------------------------------------
# Sturm sequences and ray positivity
# ---------------------------------------------------------------------------


def sturm_chain(poly: ExactPolynomial) -> Tuple[ExactPolynomial, ...]:
    """Sturm sequence of poly (valid for counting distinct real roots)."""
    if poly.degree == 0:
        return (poly,)
    chain = [poly.primitive(), poly.derivative().primitive()]
    while chain[-1].degree > 0:
        _, r = poly_divmod(chain[-2], chain[-1])
        if r is None:
            break
        chain.append(r.scale(-1).primitive())
    return tuple(chain)


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def _variations(signs: Sequence[int]) -> int:
    count = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev != 0 and s != prev:
            count += 1
        prev = s
    return count


def _variations_at(chain: Sequence[ExactPolynomial], a: Fraction) -> int:
    return _variations([_sign(p.eval_exact(a)) for p in chain])


def _variations_at_inf(chain: Sequence[ExactPolynomial]) -> int:
    return _variations([_sign(p.leading) for p in chain])


def count_distinct_roots_above(poly: ExactPolynomial, a: Rational) -> int:
    """Number of distinct real roots of poly in the open ray (a, infinity).

    Requires poly(a) != 0 (Sturm's theorem counts roots in half-open
    intervals anchored at non-roots).
    """
    af = _as_fraction(a)
    if poly.eval_exact(af) == 0:
        raise InvalidRangeError("root counting requires a non-root base point")
    chain = sturm_chain(poly)
    return _variations_at(chain, af) - _variations_at_inf(chain)


def count_distinct_roots_between(
    poly: ExactPolynomial, a: Rational, b: Rational
) -> int:
    """Number of distinct real roots of poly in the half-open interval (a, b]."""
    af, bf = _as_fraction(a), _as_fraction(b)
    if poly.eval_exact(af) == 0:
        raise InvalidRangeError("root counting requires a non-root base point")
    chain = sturm_chain(poly)
    return _variations_at(chain, af) - _variations_at(chain, bf)


def root_magnitude_bound(poly: ExactPolynomial) -> Fraction:
    """Cauchy bound: every real root has absolute value below the result."""
    lead = abs(poly.leading)
    biggest = max(abs(c) for c in poly.coefficients[:-1]) if poly.degree else 0
    return Fraction(1) + Fraction(biggest) / lead


def squarefree_decomposition(
    poly: ExactPolynomial,
) -> Tuple[Tuple[int, ExactPolynomial], ...]:
    """Yun's algorithm: poly = lead * prod f_i**i with f_i squarefree, monic."""
    p = poly.scale(1 / poly.leading)
    if p.degree == 0:
        return ()
    g = poly_gcd(p, p.derivative())
    if g.degree == 0:
        return ((1, p),)
    out = []
    w, _ = poly_divmod(p, g)
    y, _ = poly_divmod(p.derivative(), g)
    i = 1
    while w.degree > 0:
        try:
            z = y - w.derivative()
        except ZeroPolynomialError:
            out.append((i, w.scale(1 / w.leading)))
            break
        f = poly_gcd(w, z)
        if f.degree > 0:
            out.append((i, f))
        w, _ = poly_divmod(w, f)
        y, _ = poly_divmod(z, f)
        i += 1
    return tuple(out)


def odd_multiplicity_part(poly: ExactPolynomial) -> Optional[ExactPolynomial]:
    """Monic product of the squarefree factors of odd multiplicity.

    Real roots of the result are exactly the sign-change points of poly.
    Returns None when poly has no odd-multiplicity factor of positive
    degree (then poly never changes sign on the real line).
    """
    factors = [f for (i, f) in squarefree_decomposition(poly) if i % 2 == 1]
    factors = [f for f in factors if f.degree > 0]
    if not factors:
        return None
    acc = factors[0]
    for f in factors[1:]:
        acc = acc * f
    return acc


@dataclass(frozen=True)
class PositivityCertificate:
    """Outcome of a ray-positivity decision for a polynomial in y.

    verdict is one of:
      "positive"    -- poly(y) > 0 for every y >= ray_start
      "nonnegative" -- poly(y) >= 0 for every y >= ray_start, with equality
                       attained somewhere on the ray
      "refuted"     -- witness is a rational point >= ray_start with
                       poly(witness) < 0 (value_at_witness records the
                       exact negative value)

    distinct_roots_beyond counts distinct real roots in (ray_start,
    infinity); root_bound is a rational beyond every real root.
    """

    polynomial: ExactPolynomial
    ray_start: Fraction
    verdict: str
    value_at_start: Fraction
    distinct_roots_beyond: int
    root_bound: Fraction
    witness: Optional[Fraction] = None
    value_at_witness: Optional[Fraction] = None

    def holds(self) -> bool:
        return self.verdict in ("positive", "nonnegative")


def _negative_point_near_sign_change(
    poly: ExactPolynomial,
    odd_part: ExactPolynomial,
    lo: Fraction,
    hi: Fraction,
) -> Tuple[Fraction, Fraction]:
    """Exact rational point in [lo, hi]-ish with poly < 0.

    Preconditions: odd_part has at least one root in (lo, hi], poly(lo) > 0,
    and lo is not a root of odd_part.  Bisects on the odd part (whose roots
    are exactly the sign changes of poly), then samples poly exactly.
    """
    a, b = lo, hi
    for _ in range(200):
        val_b = poly.eval_exact(b)
        if val_b < 0:
            return b, val_b
        mid = (a + b) / 2
        if odd_part.eval_exact(mid) == 0:
            # mid is a sign-change point of poly: probe just past it.
            step = (b - a) / 1024
            while step > 0:
                for probe in (mid + step, mid - step):
                    if probe > lo:
                        val = poly.eval_exact(probe)
                        if val < 0:
                            return probe, val
                step /= 1024
                if step < Fraction(1, 10**80):
                    break
            # Probing failed (multiple roots clustered); shrink toward mid.
            b = mid + (b - a) / 1024
            continue
        if count_distinct_roots_between(odd_part, a, mid) >= 1:
            b = mid
        else:
            a = mid
    raise NoCertificateError("failed to localize a negative sample")


def sturm_positive_on_ray(
    poly: ExactPolynomial, ray_start: Rational
) -> PositivityCertificate:
    """Decide the sign of poly on the ray [ray_start, infinity), exactly.

    No rounding anywhere: the verdict is a theorem about the rational
    coefficients.  When the verdict is "refuted" the certificate carries a
    rational witness with its exact negative value, so the refutation can be
    re-checked independently by plain Fraction arithmetic.
    """
    a = _as_fraction(ray_start)
    work = poly
    value_at_start = work.eval_exact(a)
    attained_zero = False

    if value_at_start < 0:
        bound = max(root_magnitude_bound(work), a + 1)
        return PositivityCertificate(
            polynomial=poly,
            ray_start=a,
            verdict="refuted",
            value_at_start=value_at_start,
            distinct_roots_beyond=count_distinct_roots_above(work, a)
            if value_at_start != 0
            else 0,
            root_bound=bound,
            witness=a,
            value_at_witness=value_at_start,
        )

    if value_at_start == 0:
        # Divide out the root at a; on the open ray the sign of poly equals
        # the sign of the quotient times (y - a)^mult > 0.
        attained_zero = True
        linear = ExactPolynomial((-a, Fraction(1)))
        while work.eval_exact(a) == 0 and work.degree > 0:
            q, r = poly_divmod(work, linear)
            if r is not None or q is None:
                break
            work = q
        if work.eval_exact(a) == 0:
            # poly is a power of (y - a): zero at a, sign of lead beyond.
            work = ExactPolynomial((work.leading,))
        if work.eval_exact(a) < 0:
            # poly is negative immediately to the right of a: probe
            # forward with shrinking steps until the exact value goes
            # strictly negative (guaranteed before the next root).
            step = Fraction(1)
            for _ in range(400):
                probe = a + step
                value = poly.eval_exact(probe)
                if value < 0:
                    return PositivityCertificate(
                        polynomial=poly,
                        ray_start=a,
                        verdict="refuted",
                        value_at_start=value_at_start,
                        distinct_roots_beyond=count_distinct_roots_above(
                            work, a
                        ),
                        root_bound=max(root_magnitude_bound(work), a + 1),
                        witness=probe,
                        value_at_witness=value,
                    )
                step /= 4
            raise NoCertificateError("failed to probe past a boundary root")

    bound = max(root_magnitude_bound(work), a + 1)

    if work.degree == 0:
        if work.leading > 0:
            verdict = "nonnegative" if attained_zero else "positive"
            return PositivityCertificate(
                polynomial=poly,
                ray_start=a,
                verdict=verdict,
                value_at_start=value_at_start,
                distinct_roots_beyond=0,
                root_bound=bound,
            )
        witness = a + 1
        return PositivityCertificate(
            polynomial=poly,
            ray_start=a,
            verdict="refuted",
            value_at_start=value_at_start,
            distinct_roots_beyond=0,
            root_bound=bound,
            witness=witness,
            value_at_witness=poly.eval_exact(witness),
        )

    roots_beyond = count_distinct_roots_above(work, a)
    odd_part = odd_multiplicity_part(work)
    odd_roots_beyond = (
        count_distinct_roots_above(odd_part, a)
        if odd_part is not None and odd_part.eval_exact(a) != 0
        else (0 if odd_part is None else None)
    )

    if odd_roots_beyond is None:
        # a is a root of the odd part but work(a) != 0: impossible, since
        # odd-part roots are roots of work.  Defensive only.
        raise NoCertificateError("inconsistent odd-multiplicity analysis")

    if odd_roots_beyond == 0:
        # No sign change past a, and work(a) > 0: the polynomial stays
        # positive except for possible even-order touches at zero.
        if work.leading < 0:
            # Sign at +infinity would be negative; cannot happen without a
            # sign change, so this branch is unreachable.  Defensive only.
            raise NoCertificateError("sign analysis contradiction")
        if roots_beyond > 0 or attained_zero:
            verdict = "nonnegative"
        else:
            verdict = "positive"
        return PositivityCertificate(
            polynomial=poly,
            ray_start=a,
            verdict=verdict,
            value_at_start=value_at_start,
            distinct_roots_beyond=roots_beyond,
            root_bound=bound,
        )

    # The polynomial changes sign somewhere past a: locate a rational point
    # with a strictly negative exact value.
    hi = bound
    while work.eval_exact(hi) == 0 or odd_part.eval_exact(hi) == 0:
        hi += 1
    if work.eval_exact(hi) < 0:
        return PositivityCertificate(
            polynomial=poly,
            ray_start=a,
            verdict="refuted",
            value_at_start=value_at_start,
            distinct_roots_beyond=roots_beyond,
            root_bound=bound,
            witness=hi,
            value_at_witness=poly.eval_exact(hi),
        )
    witness, _value = _negative_point_near_sign_change(work, odd_part, a, hi)
    return PositivityCertificate(
        polynomial=poly,
        ray_start=a,
        verdict="refuted",
        value_at_start=value_at_start,
        distinct_roots_beyond=roots_beyond,
        root_bound=bound,
        witness=witness,
        value_at_witness=poly.eval_exact(witness),
    )


# ---------------------------------------------------------------------------
# Monotonicity of registry bounds, reduced to ray positivity in y = log x
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonotonicityCertificate:
    """Monotonicity of a registry bound's comparison function for x >= a.

    sense is "increasing" or "decreasing" (the canonical direction for the
    bound's kind).  basis explains how it was certified: "sturm-ray" means
    derivative_numerator is a polynomial in y = log x that is positive on
    [log_ray_start, infinity); "termwise" means every term of the bound is
    individually monotone in the certified sense and no polynomial is
    needed.  For rational-denominator bounds, denominator_certificate
    records positivity of the denominator polynomial (required first)."""

    bound_id: str
    x_start: Fraction
    log_ray_start: Fraction
    sense: str
    basis: str
    certificate: Optional[PositivityCertificate]
    denominator_certificate: Optional[PositivityCertificate] = None

    def holds(self) -> bool:
        if self.denominator_certificate is not None:
            if not self.denominator_certificate.holds():
                return False
        if self.basis == "termwise":
            return True
        return self.certificate is not None and self.certificate.holds()


def rational_denominator_poly(coeffs: Sequence[Fraction]) -> ExactPolynomial:
    """y^m * (denominator of the rational bound) with m = len(coeffs).

    The bound is x / (y - 1 - sum a_i / y^i); clearing y^m gives
    y^m (y - 1) - sum a_i y^(m-i), a polynomial that must be positive for
    the bound to be finite and positive.
    """
    m = len(coeffs)
    poly = ExactPolynomial.monomial(m + 1) - ExactPolynomial.monomial(m)
    for i, a in enumerate(coeffs, start=1):
        if a == 0:
            continue
        poly = poly - ExactPolynomial.monomial(m - i, a)
    return poly


def rational_derivative_numerator(coeffs: Sequence[Fraction]) -> ExactPolynomial:
    """Numerator (up to positive factors) of d/dx of x / (y - 1 - sum a_i/y^i).

    With y = log x the derivative has the sign of
    y^(m+1) (y - 2) - sum a_i (y^(m+1-i) + i y^(m-i)).
    """
    m = len(coeffs)
    poly = ExactPolynomial.monomial(m + 2) - ExactPolynomial.monomial(m + 1, 2)
    for i, a in enumerate(coeffs, start=1):
        if a == 0:
            continue
        poly = poly - ExactPolynomial.monomial(m + 1 - i, a)
        poly = poly - ExactPolynomial.monomial(m - i, i * a)
    return poly


def logpow_derivative_numerator(coeffs: Sequence[Fraction]) -> ExactPolynomial:
    """Sign polynomial for d/dx of sum_j c_j x / y^j  (y = log x).

    Differentiating term j gives c_j (y - j) / y^(j+1); clearing y^(m+1)
    with m = len(coeffs) leaves sum_j c_j y^(m-j) (y - j).
    """
    m = len(coeffs)
    poly = None
    for j, c in enumerate(coeffs, start=1):
        if c == 0:
            continue
        term = ExactPolynomial.monomial(m - j + 1, c) - ExactPolynomial.monomial(
            m - j, j * c
        )
        poly = term if poly is None else poly + term
    if poly is None:
        raise ZeroPolynomialError("all coefficients vanish")
    return poly


def envelope_derivative_numerator(
    c: Fraction, k: int, sign: int
) -> ExactPolynomial:
    """Sign polynomial for d/dx of x + sign * c * x / y^k  (y = log x).

    The derivative has the sign of y^(k+1) + sign*c*y - sign*c*k.
    """
    poly = ExactPolynomial.monomial(k + 1)
    if c != 0:
        poly = poly + ExactPolynomial.monomial(1, sign * c)
        poly = poly - ExactPolynomial.monomial(0, sign * c * k)
    return poly


def recip_sum_derivative_numerator(
    pairs: Sequence[Tuple[Fraction, int]]
) -> ExactPolynomial:
    """Sign polynomial for d/dx of loglog x + B + sum c_i / y^(p_i).

    Scaling d/dy by y^(m+1) with m = max power gives
    y^m - sum p_i c_i y^(m - p_i).
    """
    m = max(p for (_c, p) in pairs) if pairs else 0
    poly = ExactPolynomial.monomial(m)
    for c, p in pairs:
        if c == 0:
            continue
        poly = poly - ExactPolynomial.monomial(m - p, p * c)
    return poly


def logp_sum_derivative_numerator(
    pairs: Sequence[Tuple[Fraction, int]]
) -> ExactPolynomial:
    """Sign polynomial for d/dx of y + E + sum c_i / y^(p_i)."""
    m = max(p for (_c, p) in pairs) if pairs else 0
    poly = ExactPolynomial.monomial(m + 1)
    for c, p in pairs:
        if c == 0:
            continue
        poly = poly - ExactPolynomial.monomial(m - p, p * c)
    return poly


def mertens_decrease_numerator(
    pairs: Sequence[Tuple[Fraction, int]]
) -> ExactPolynomial:
    """Positivity of this polynomial certifies that
    (1/y) * (1 + sum c_i / y^(p_i)) is decreasing in y:
    y^m + sum (p_i + 1) c_i y^(m - p_i) > 0 with m = max power.
    """
    m = max(p for (_c, p) in pairs) if pairs else 0
    poly = ExactPolynomial.monomial(m)
    for c, p in pairs:
        if c == 0:
            continue
        poly = poly + ExactPolynomial.monomial(m - p, (p + 1) * c)
    return poly


def _pairs(coeffs: Sequence[Fraction]) -> Tuple[Tuple[Fraction, int], ...]:
    flat = list(coeffs)
    return tuple(
        (flat[2 * i], int(flat[2 * i + 1])) for i in range(len(flat) // 2)
    )


def canonical_sense(kind: BoundKind) -> str:
    """Monotonicity direction the pair-check machinery relies on."""
    if kind is BoundKind.PRODUCT_MERTENS:
        return "decreasing"
    return "increasing"


def log_ray_start(x_start: Rational, prec: int = DEFAULT_PREC) -> Fraction:
    """Exact rational lower bound on log(x_start)."""
    xs = _as_fraction(x_start)
    if xs <= 1:
        raise InvalidRangeError("ray start must exceed 1")
    return Fraction(*elog(xs, prec).lo_rational())


def monotone_certificate(
    spec: BoundSpec, x_start: Rational, prec: int = DEFAULT_PREC
) -> MonotonicityCertificate:
    """Certify monotonicity of spec's comparison function for x >= x_start.

    Reduces the derivative sign to ray positivity of an explicit polynomial
    in y = log x and certifies that polynomial with exact Sturm analysis on
    [a, infinity) where a is a rational lower bound for log(x_start); since
    the derivative polynomials here are certified on the *larger* ray, the
    conclusion covers all x >= x_start.

    Square-root-shaped lower bounds and the exponential-envelope shape fall
    outside polynomial reach and raise UnsupportedKindError.
    """
    xs = _as_fraction(x_start)
    a = log_ray_start(xs, prec)
    sense = canonical_sense(spec.kind)
    coeffs = spec.coefficients
    sgn = 1 if spec.direction == "upper" else -1

    if spec.kind is BoundKind.PI_RATIONAL:
        den_poly = rational_denominator_poly(coeffs)
        den_cert = sturm_positive_on_ray(den_poly, a)
        if not den_cert.holds():
            return MonotonicityCertificate(
                bound_id=spec.id,
                x_start=xs,
                log_ray_start=a,
                sense=sense,
                basis="sturm-ray",
                certificate=None,
                denominator_certificate=den_cert,
            )
        num_cert = sturm_positive_on_ray(rational_derivative_numerator(coeffs), a)
        return MonotonicityCertificate(
            bound_id=spec.id,
            x_start=xs,
            log_ray_start=a,
            sense=sense,
            basis="sturm-ray",
            certificate=num_cert,
            denominator_certificate=den_cert,
        )

    if spec.kind is BoundKind.PI_LOGPOW:
        poly = logpow_derivative_numerator(coeffs)
    elif spec.kind is BoundKind.THETA_ENVELOPE:
        c, k = coeffs[0], int(coeffs[1])
        poly = envelope_derivative_numerator(c, k, sgn)
    elif spec.kind is BoundKind.GAP:
        c, j = coeffs[0], int(coeffs[1])
        poly = envelope_derivative_numerator(c, j, 1)
    elif spec.kind is BoundKind.SUM_RECIP:
        poly = recip_sum_derivative_numerator(_pairs(coeffs))
    elif spec.kind is BoundKind.SUM_LOGP:
        poly = logp_sum_derivative_numerator(_pairs(coeffs))
    elif spec.kind is BoundKind.PRODUCT_MERTENS:
        poly = mertens_decrease_numerator(_pairs(coeffs))
    elif spec.kind in (BoundKind.THETA_SQRT, BoundKind.PI_LI_SQRT):
        raise UnsupportedKindError(
            "square-root shapes need the termwise rule; use shape_on_ray"
        )
    else:
        raise UnsupportedKindError(
            f"no derivative polynomial for kind {spec.kind.name}"
        )

    cert = sturm_positive_on_ray(poly, a)
    return MonotonicityCertificate(
        bound_id=spec.id,
        x_start=xs,
        log_ray_start=a,
        sense=sense,
        basis="sturm-ray",
        certificate=cert,
    )


def monotone_on_ray(
    spec: BoundSpec, x_start: Rational, prec: int = DEFAULT_PREC
) -> PositivityCertificate:
    """Decisive positivity certificate for monotonicity of spec past x_start.

    For rational-denominator bounds the denominator polynomial is certified
    first and its refutation is returned when it fails (the bound is not
    even well behaved there); otherwise the certificate for the derivative
    numerator decides.
    """
    full = monotone_certificate(spec, x_start, prec)
    if (
        full.denominator_certificate is not None
        and not full.denominator_certificate.holds()
    ):
        return full.denominator_certificate
    return full.certificate


def shape_on_ray(
    spec: BoundSpec, x_start: Rational, prec: int = DEFAULT_PREC
) -> MonotonicityCertificate:
    """Monotonicity certificate covering every kind the pair check supports.

    Square-root upper envelopes with nonnegative coefficients are monotone
    termwise: each summand c * x^p * y^q / pi^w with c, p > 0 and q >= 0 is
    increasing in x, as is the leading x or li(x) term.  Everything else
    defers to monotone_certificate.
    """
    if spec.kind in (BoundKind.THETA_SQRT, BoundKind.PI_LI_SQRT):
        xs = _as_fraction(x_start)
        a = log_ray_start(xs, prec)
        if spec.direction != "upper":
            raise UnsupportedKindError(
                "square-root lower bounds have no termwise certificate"
            )
        flat = list(spec.coefficients)
        quads = [tuple(flat[4 * i : 4 * i + 4]) for i in range(len(flat) // 4)]
        for c, p, q, _w in quads:
            if c < 0 or p <= 0 or q < 0:
                raise UnsupportedKindError(
                    "termwise rule needs c >= 0, p > 0, q >= 0 in every term"
                )
        if xs < 1:
            raise InvalidRangeError("termwise rule applies for x >= 1")
        return MonotonicityCertificate(
            bound_id=spec.id,
            x_start=xs,
            log_ray_start=a,
            sense="increasing",
            basis="termwise",
            certificate=None,
        )
    return monotone_certificate(spec, x_start, prec)


# ---------------------------------------------------------------------------
# Frozen auxiliary polynomials (exact decimal coefficients)
# ---------------------------------------------------------------------------

# Degree-11 polynomial (in y = log x) whose positivity past log(10**15),
# after adding DERIVATIVE_MARGIN, witnesses that a degree-6 rational
# upper bound dominates a shifted variant at large heights.  Ascending
# coefficients; the constant term is zero.
DERIVATIVE_GAP_POLY = ExactPolynomial.from_strings(
    [
        "0",
        "-1241825.47125",
        "-246389.1037096875",
        "-47509.2738384375",
        "-21029165.2496875",
        "-4248412.96105",
        "-865668.98286875",
        "-189106.352125",
        "-45007.842875",
        "-13858.278375",
        "-38212.4575",
        "1119.6775",
    ]
)

# Constant added to DERIVATIVE_GAP_POLY before certifying positivity.
DERIVATIVE_MARGIN = Fraction("9460001.25")

# Degree-11 polynomial whose nonnegativity for y >= 12.2714 closes the
# same derivation at moderate heights.  Ascending coefficients.
MODERATE_RANGE_POLY = ExactPolynomial.from_strings(
    [
        "-21022225",
        "-4247796.175",
        "-868400.71675625",
        "-183890.7415",
        "-45874.13675",
        "-13920.74325",
        "-38220.7675",
        "1118.8525",
        "-0.195",
        "0.75",
        "-0.75",
        "0.15",
    ]
)

# Degree-10 polynomial, positive on the whole real line, that controls the
# matching lower-bound derivation past log(5 * 10**9).  Ascending.
LOWER_RANGE_POLY = ExactPolynomial.from_strings(
    [
        "5290262",
        "-347857",
        "-158992",
        "-34521",
        "11749355",
        "3145306",
        "697310",
        "151211",
        "37131",
        "11393",
        "28930",
    ]
)

# Degree-6 remainder in the exact identity
#   (y^7 R(y)) * (y^6 S(y)) = y^14 - GROWTH_IDENTITY_POLY(y)
# where S is the denominator of the rational lower bound thm3.8.lower and
# R collects the reciprocal-power coefficients of prop3.11.lower.  All
# coefficients are positive, which shows R*S < y^14 termwise for y > 0.
GROWTH_IDENTITY_POLY = ExactPolynomial.from_strings(
    [
        "17172756.64125",
        "4750787.6325",
        "1091195.634375",
        "252925.911",
        "63112.7025",
        "19843.008375",
        "11137.2625",
    ]
)


def _growth_identity_poly_from_registry() -> ExactPolynomial:
    """Reconstruct GROWTH_IDENTITY_POLY from the registry coefficients."""
    from .bounds import lookup

    rational = lookup("thm3.8.lower")
    series = lookup("prop3.11.lower")
    s_poly = rational_denominator_poly(rational.coefficients)
    m = len(series.coefficients)
    r_poly = None
    for j, c in enumerate(series.coefficients, start=1):
        term = ExactPolynomial.monomial(m - j, c)
        r_poly = term if r_poly is None else r_poly + term
    product = r_poly * s_poly
    return ExactPolynomial.monomial(14) - product


def growth_identity_holds() -> bool:
    """Exact check of the algebraic identity behind GROWTH_IDENTITY_POLY."""
    derived = _growth_identity_poly_from_registry()
    return derived.coefficients == GROWTH_IDENTITY_POLY.coefficients


# ---------------------------------------------------------------------------
# Zero-count bound and lemma preconditions
# ---------------------------------------------------------------------------

_E_LOWER = Fraction("2.718281828459045235360287471")


def zero_count_bound(T, prec: int = DEFAULT_PREC) -> Enclosure:
    """Enclosure of the explicit zero-count majorant

        T/(2 pi) * log(T/(2 pi e)) + 7/8
          + 0.112 log T + 0.278 log log T + 2.51 + 0.2/T,

    an upper bound for the number of zeta zeros with imaginary part in
    (0, T], valid for T >= e.
    """
    ctx = ivctx(prec)
    tv = lift(ctx, T)
    if not tv.b >= lift(ctx, _E_LOWER).a:
        raise InvalidRangeError("zero_count_bound requires T >= e")
    two_pi = 2 * ctx.pi
    log_t = ctx.log(tv)
    main = tv / two_pi * (log_t - ctx.log(two_pi) - 1)
    tail = (
        lift(ctx, Fraction(7, 8))
        + lift(ctx, Fraction(112, 1000)) * log_t
        + lift(ctx, Fraction(278, 1000)) * ctx.log(log_t)
        + lift(ctx, Fraction(251, 100))
        + lift(ctx, Fraction(1, 5)) / tv
    )
    return Enclosure.from_iv(main + tail)


def check_lemma_preconditions(
    x0, T, prec: int = DEFAULT_PREC
) -> Verdict:
    """Verdict on the precondition  4.92 * sqrt(x0 / log x0) <= T.

    Pass when the inequality is certain, Fail when its negation is certain,
    Indeterminate when the enclosures still overlap after one retry at
    higher precision.
    """
    for p in (prec, RETRY_PREC):
        ctx = ivctx(p)
        xv = lift(ctx, x0)
        if not xv.a > 1:
            raise InvalidRangeError("x0 must exceed 1")
        tv = lift(ctx, T)
        lhs = lift(ctx, Fraction(123, 25)) * ctx.sqrt(xv / ctx.log(xv))
        if lhs.b <= tv.a:
            return Verdict.Pass
        if lhs.a > tv.b:
            return Verdict.Fail
    return Verdict.Indeterminate


# ---------------------------------------------------------------------------
# Threshold comparison in log space
# ---------------------------------------------------------------------------


def _bracket_u(c: Fraction, prec: int) -> Tuple[Fraction, Fraction]:
    """Rational bracket for the root u > 4 of  u - 4 log u = c  (c > 4).

    The left side is increasing for u > 4, so the root is simple; a float
    Newton seed is verified and tightened with interval arithmetic.
    """
    cf = float(c)
    u = max(cf + 4.0 * math.log(max(cf, 2.0)), 8.0)
    for _ in range(60):
        u_next = cf + 4.0 * math.log(u)
        if abs(u_next - u) < 1e-12 * u:
            u = u_next
            break
        u = u_next

    ctx = ivctx(prec)
    cv = lift(ctx, c)

    def sign_at(point: Fraction) -> int:
        val = lift(ctx, point) - 4 * ctx.log(lift(ctx, point)) - cv
        if val.a > 0:
            return 1
        if val.b < 0:
            return -1
        return 0

    delta = Fraction(str(max(abs(u), 1.0))) / 10**9
    lo = Fraction(str(u)) - delta
    hi = Fraction(str(u)) + delta
    for _ in range(120):
        if lo > 4 and sign_at(lo) < 0 and sign_at(hi) > 0:
            break
        delta *= 8
        lo = Fraction(str(u)) - delta
        hi = Fraction(str(u)) + delta
    else:
        raise NoSignChangeError("failed to bracket the threshold root")

    for _ in range(140):
        if hi - lo <= Fraction(1, 10**25):
            break
        mid = (lo + hi) / 2
        s = sign_at(mid)
        if s < 0:
            lo = mid
        elif s > 0:
            hi = mid
        else:
            break
    return lo, hi


def _enclosure_from_rationals(
    lo: Fraction, hi: Fraction, prec: int = 200
) -> Enclosure:
    ctx = ivctx(prec)
    iv = ctx.mpf([lift(ctx, lo).a, lift(ctx, hi).b])
    return Enclosure.from_iv(iv)


@dataclass(frozen=True)
class ThresholdComparison:
    """Result of comparing two m-indexed thresholds in log space.

    n0_log is an enclosure of log of the largest integer n with
    198.2 n / log(n)**4 <= m**5; n1_log encloses the log of
    exp(1000 * exp(19.807) / m).  verdict is Pass when n1_log is certainly
    below n0_log (the required ordering), Fail when certainly above,
    Indeterminate otherwise.  Iterates as (n0_log, n1_log, verdict).
    """

    m: int
    n0_log: Enclosure
    n1_log: Enclosure
    verdict: Verdict

    def __iter__(self):
        return iter((self.n0_log, self.n1_log, self.verdict))


def dudek_thresholds(m: int, prec: int = DEFAULT_PREC) -> ThresholdComparison:
    """Compare the two threshold expressions attached to the integer m.

    Let n0(m) = max{ n integer : 198.2 n / log(n)^4 <= m^5 } and
    n1(m) = exp(1000 * exp(19.807) / m).  In log space, log n0 is within
    1/n0 of the root u of  u - 4 log u = log(m^5 / 19.82 / 10), and the
    comparison n1 <= n0 is decided rigorously on enclosures.
    """
    if not isinstance(m, int) or m < 1000:
        raise InvalidRangeError("m must be an integer >= 1000")

    verdict = Verdict.Indeterminate
    floor_enc = exp_enc = None
    for p in (prec, RETRY_PREC):
        ctx = ivctx(p)
        # c = log(m^5 * 10 / 1982), exact rational inside the log.
        c_enc = elog(Fraction(10 * m**5, 1982), p)
        # Interval-safe: bracket using the outward rational endpoints.
        lo_lo, _ = _bracket_u(Fraction(*c_enc.lo_rational()), p)
        _, hi_hi = _bracket_u(Fraction(*c_enc.hi_rational()), p)
        # n0 is the floor, so log n0 lies in [u - 1/n0, u]; 1/n0 < 1e-50
        # for every admissible m (n0 > 10^50 once m >= 1000).
        floor_enc = _enclosure_from_rationals(
            lo_lo - Fraction(1, 10**50), hi_hi, max(p, 200)
        )
        scale = lift(ctx, Fraction(1000, m))
        exp_iv = scale * ctx.exp(lift(ctx, Fraction(19807, 1000)))
        exp_enc = Enclosure.from_iv(exp_iv)
        ctx2 = ivctx(max(p, 200))
        if lift(ctx2, exp_enc).b < lift(ctx2, floor_enc).a:
            verdict = Verdict.Pass
            break
        if lift(ctx2, exp_enc).a > lift(ctx2, floor_enc).b:
            verdict = Verdict.Fail
            break
    return ThresholdComparison(
        m=m, n0_log=floor_enc, n1_log=exp_enc, verdict=verdict
    )


# ---------------------------------------------------------------------------
# Elementary crossing search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ElementaryForm:
    """Finite sum of terms  c * t**alpha * log(t)**beta  for t > 1.

    terms is a tuple of (c, alpha, beta) with c and alpha rational and
    beta a (possibly negative) integer; log t > 0 on the domain, so
    negative log powers are well defined.
    """

    terms: Tuple[Tuple[Fraction, Fraction, int], ...]

    def __post_init__(self):
        cleaned = []
        for c, alpha, beta in self.terms:
            cf = _as_fraction(c)
            af = _as_fraction(alpha)
            bi = int(beta)
            if cf != 0:
                cleaned.append((cf, af, bi))
        if not cleaned:
            raise InvalidRangeError("a form needs at least one nonzero term")
        object.__setattr__(self, "terms", tuple(cleaned))

    @classmethod
    def of(cls, *terms) -> "ElementaryForm":
        return cls(tuple((Fraction(str(c)) if isinstance(c, float) else Fraction(c),
                          Fraction(a), int(b)) for (c, a, b) in terms))

    def value(self, t, prec: int = DEFAULT_PREC) -> Enclosure:
        ctx = ivctx(prec)
        tv = lift(ctx, t)
        if not tv.a > 1:
            raise InvalidRangeError("forms are evaluated for t > 1")
        log_t = ctx.log(tv)
        acc = ctx.mpf(0)
        for c, alpha, beta in self.terms:
            term = lift(ctx, c)
            if alpha != 0:
                term = term * ctx.exp(lift(ctx, alpha) * log_t)
            if beta:
                term = term * log_t**beta
            acc = acc + term
        return Enclosure.from_iv(acc)


def _difference_sign(
    lhs: ElementaryForm, rhs: ElementaryForm, t: Fraction, prec: int
) -> int:
    for p in (prec, RETRY_PREC):
        ctx = ivctx(p)
        val = lift(ctx, lhs.value(t, p)) - lift(ctx, rhs.value(t, p))
        if val.a > 0:
            return 1
        if val.b < 0:
            return -1
    return 0


def elementary_crossing(
    lhs: ElementaryForm,
    rhs: ElementaryForm,
    hint,
    prec: int = DEFAULT_PREC,
    max_doublings: int = 64,
    bisections: int = 90,
) -> Enclosure:
    """Bracket a sign change of lhs - rhs near the hinted location.

    Walks geometrically away from the hint in both directions until the
    difference has certain opposite signs, then bisects keeping certified
    signs at both ends.  Returns an enclosure [a, b] with
    sign(lhs - rhs)(a) != sign(lhs - rhs)(b), both certain; the final width
    is driven below 1 when possible so integer thresholds are pinned.
    Raises NoSignChangeError when no certain sign change is found.
    """
    base = _as_fraction(hint) if not isinstance(hint, float) else Fraction(str(hint))
    if base <= 1:
        raise InvalidRangeError("hint must exceed 1")

    s_base = _difference_sign(lhs, rhs, base, prec)
    anchor, anchor_sign = base, s_base
    if anchor_sign == 0:
        for nudge in (Fraction(65, 64), Fraction(63, 64), Fraction(9, 8)):
            candidate = base * nudge
            if candidate <= 1:
                continue
            s = _difference_sign(lhs, rhs, candidate, prec)
            if s != 0:
                anchor, anchor_sign = candidate, s
                break
        else:
            raise NoSignChangeError("difference is indeterminate near the hint")

    lo = hi = None
    up = down = anchor
    for _ in range(max_doublings):
        up = up * 2
        if _difference_sign(lhs, rhs, up, prec) == -anchor_sign:
            lo, hi = anchor, up
            break
        down = down / 2
        if down > 1 and _difference_sign(lhs, rhs, down, prec) == -anchor_sign:
            lo, hi = down, anchor
            break
    if lo is None:
        raise NoSignChangeError("no certain sign change within the search range")

    sign_lo = _difference_sign(lhs, rhs, lo, prec)
    for _ in range(bisections):
        if hi - lo <= Fraction(1, 2):
            break
        if hi < 4 * lo:
            mid = (lo + hi) / 2
        else:
            mid = Fraction(str(math.sqrt(float(lo) * float(hi))))
            if not lo < mid < hi:
                mid = (lo + hi) / 2
        s = _difference_sign(lhs, rhs, mid, prec)
        if s == 0:
            for nudge in (
                mid + (hi - lo) / 37,
                mid - (hi - lo) / 37,
                mid + (hi - lo) / 11,
            ):
                if lo < nudge < hi:
                    s = _difference_sign(lhs, rhs, nudge, prec)
                    if s != 0:
                        mid = nudge
                        break
            else:
                break
        if s == sign_lo:
            lo = mid
        else:
            hi = mid
    return _enclosure_from_rationals(lo, hi)


def crossing_integer_threshold(
    lhs: ElementaryForm,
    rhs: ElementaryForm,
    hint,
    prec: int = DEFAULT_PREC,
) -> int:
    """Smallest integer strictly above the bracketed sign change.

    Requires the final bracket to avoid straddling an integer; when an
    integer lies inside the bracket the location is still ambiguous and
    NoCertificateError is raised.
    """
    enc = elementary_crossing(lhs, rhs, hint, prec)
    lo = Fraction(*enc.lo_rational())
    hi = Fraction(*enc.hi_rational())
    if math.floor(lo) != math.floor(hi):
        raise NoCertificateError(
            "an integer lies inside the crossing bracket; tighten the search"
        )
    return math.floor(hi) + 1
