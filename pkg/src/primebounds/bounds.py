"""Typed registry of explicit prime-counting inequalities.

Each entry describes one side of one published inequality: an id, a kind
fixing the algebraic shape of the right-hand side, exact rational
coefficients, the claimed validity threshold, a provenance status, and a
human-readable anchor naming the statement inside the source collection.

Kind shapes (L is log x throughout; s is +1 for upper entries, -1 for lower):

THETA_ENVELOPE      theta(x) vs x + s*c*x/L**k              coeffs (c, k)
THETA_ENVELOPE_EXP  theta(x) vs x + s*sqrt(c/(pi*sqrt(R)))*x*L**(1/4)
                    * exp(-sqrt(L/R))                       coeffs (c, R)
THETA_SQRT          theta(x) vs x + s*sum c_i*x**p_i*L**q_i/pi**w_i
                                            coeffs (c, p, q, w) quadruples
PI_LI_SQRT          pi(x) vs li(x) + s*sum c_i*x**p_i*L**q_i/pi**w_i
PI_RATIONAL         pi(x) vs x/(L - 1 - a1/L - a2/L**2 - ...)
                    signed a_i as printed                   coeffs (a1..)
PI_LOGPOW           pi(x) vs sum_j c_j*x/L**j, j = 1..len   coeffs (c1..)
SUM_RECIP           sum 1/p vs log L + B + sum c_i/L**p_i   signed pairs
SUM_LOGP            sum log p/p vs L + E + sum c_i/L**p_i   signed pairs
PRODUCT_MERTENS     prod (1-1/p) vs exp(-gamma)/L * (1 + sum c_i/L**p_i)
GAP                 a prime exists in (x, x*(1 + c/L**j)]   coeffs (c, j)

Magnitude-style kinds (the first four) store nonnegative coefficients and
take their sign from the direction; series-style kinds store coefficients
with the signs they are printed with.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Optional

from . import analytic
from .enclosure import DEFAULT_PREC, RETRY_PREC, Enclosure, eexp, ivctx, lift
from .errors import (
    DenominatorNonpositiveError,
    InvalidRangeError,
    MismatchedStateError,
    UnknownBoundError,
    UnsupportedKindError,
)
from .sieve import AccumulatorState


class BoundKind(enum.Enum):
    THETA_ENVELOPE = "THETA_ENVELOPE"
    THETA_ENVELOPE_EXP = "THETA_ENVELOPE_EXP"
    THETA_SQRT = "THETA_SQRT"
    PI_LI_SQRT = "PI_LI_SQRT"
    PI_RATIONAL = "PI_RATIONAL"
    PI_LOGPOW = "PI_LOGPOW"
    SUM_RECIP = "SUM_RECIP"
    SUM_LOGP = "SUM_LOGP"
    PRODUCT_MERTENS = "PRODUCT_MERTENS"
    GAP = "GAP"


class Verdict(enum.Enum):
    Pass = "Pass"
    Fail = "Fail"
    Indeterminate = "Indeterminate"


VALID_STATUSES = ("verified_here", "claimed_paper", "claimed_external")


@dataclass(frozen=True)
class BoundSpec:
    id: str
    kind: BoundKind
    direction: str  # "upper" | "lower" | "two_sided" (templates only)
    coefficients: tuple[Fraction, ...]
    threshold_x0: int
    status: str
    anchor: str

    def __post_init__(self):
        if self.direction not in ("upper", "lower", "two_sided"):
            raise InvalidRangeError("bad direction %r" % self.direction)
        if self.status not in VALID_STATUSES:
            raise InvalidRangeError("bad status %r" % self.status)
        if self.threshold_x0 < 2:
            raise InvalidRangeError("threshold_x0 must be at least 2")
        if self.kind is BoundKind.PI_RATIONAL and len(self.coefficients) > 6:
            raise InvalidRangeError("rational denominators take at most 6 terms")
        if any(isinstance(c, float) for c in self.coefficients):
            raise InvalidRangeError("coefficients must be exact rationals, not floats")
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))


def _F(v) -> Fraction:
    return Fraction(str(v)) if isinstance(v, float) else Fraction(v)


def _entry(id, kind, direction, coeffs, x0, status, anchor):
    return BoundSpec(id, kind, direction, tuple(_F(c) for c in coeffs), x0, status, anchor)


def _two_sided(base_id, kind, coeffs_mag, x0, status, anchor, lower_x0=None, negate=True):
    """Expand a symmetric claim into .lower and .upper entries.

    Series-style kinds get their lower coefficients negated (the printed
    form carries the sign); magnitude-style kinds keep positive magnitudes.
    """
    mag = tuple(_F(c) for c in coeffs_mag)
    if negate:
        low = tuple(-c if i % 2 == 0 else c for i, c in enumerate(mag))
    else:
        low = mag
    return [
        _entry(base_id + ".lower", kind, "lower", low, lower_x0 or x0, status, anchor),
        _entry(base_id + ".upper", kind, "upper", mag, x0, status, anchor),
    ]


def _build_registry() -> dict[str, BoundSpec]:
    entries: list[BoundSpec] = []
    add = entries.append

    # -- theta envelopes, c*x/log^k x ------------------------------------
    dusart_env = [
        ("lem2.3.k1", Fraction(1, 1000), 1, 908_994_923),
        ("lem2.3.k2a", Fraction(1, 5), 2, 3_594_641),
        ("lem2.3.k2b", Fraction(1, 100), 2, 7_713_133_853),
        ("lem2.3.k3a", Fraction(1), 3, 89_967_803),
        ("lem2.3.k3b", Fraction(1, 2), 3, 767_135_587),
        ("lem2.3.k4", Fraction(1513, 10), 4, 2),
    ]
    for bid, eta, k, x0 in dusart_env:
        entries.extend(
            _two_sided(bid, BoundKind.THETA_ENVELOPE, (eta, k), x0,
                       "claimed_external", "Lemma 2.3 (Dusart)", negate=False)
        )
    add(_entry("thm2.4.lower", BoundKind.THETA_ENVELOPE, "lower",
               (Fraction(3, 20), 3), 19_035_709_163, "claimed_paper", "Theorem 2.4"))
    add(_entry("thm2.4.upper", BoundKind.THETA_ENVELOPE, "upper",
               (Fraction(3, 20), 3), 2, "claimed_paper", "Theorem 2.4"))
    add(_entry("rem2.4.lower", BoundKind.THETA_ENVELOPE, "lower",
               (Fraction(7, 20), 3), 1_332_492_593, "claimed_paper", "Remark after Theorem 2.4"))
    entries.extend(
        _two_sided("prop2.5", BoundKind.THETA_ENVELOPE, (Fraction(100), 4),
                   70_111, "claimed_paper", "Proposition 2.5", negate=False)
    )
    entries.extend(
        _two_sided("eq4.5", BoundKind.THETA_ENVELOPE, (Fraction(43, 1000), 3),
                   235_385_266_837_019_986, "claimed_paper", "Equation 4.5", negate=False)
    )
    entries.extend(
        _two_sided("eq4.6", BoundKind.THETA_ENVELOPE, (Fraction(9907, 100), 4),
                   72_004_899_338, "claimed_paper", "Equation 4.6", negate=False)
    )
    add(_entry("buethe.theta.upper", BoundKind.THETA_ENVELOPE, "upper",
               (Fraction(0), 1), 2, "claimed_external", "Buethe theta bound"))

    # -- exponential envelope ---------------------------------------------
    entries.extend(
        _two_sided("eq2.12", BoundKind.THETA_ENVELOPE_EXP,
                   (Fraction(8), Fraction(569693, 100000)), 3,
                   "claimed_external", "Equation 2.12 (Dusart)", negate=False)
    )

    # -- square-root shaped theta and pi bounds ---------------------------
    entries.extend(
        _two_sided("eq2.6", BoundKind.THETA_SQRT,
                   (Fraction(1, 8), Fraction(1, 2), 2, 1), 599,
                   "claimed_external", "Equation 2.6 (Schoenfeld, Buethe)", negate=False)
    )
    add(_entry("buethe.theta.sqrt.lower", BoundKind.THETA_SQRT, "lower",
               (Fraction(39, 20), Fraction(1, 2), 0, 0), 1_423,
               "claimed_external", "Buethe square-root theta bound"))
    add(_entry("eq2.14.lower", BoundKind.THETA_SQRT, "lower",
               (Fraction(181, 100), Fraction(1, 2), 0, 0,
                Fraction(4, 5), Fraction(1, 4), 0, 0,
                Fraction(103883, 50000), Fraction(1, 3), 0, 0),
               783_674, "claimed_external", "Equation 2.14 (Buethe)"))
    entries.extend(
        _two_sided("eq3.1", BoundKind.PI_LI_SQRT,
                   (Fraction(1, 8), Fraction(1, 2), 1, 1), 2_657,
                   "claimed_external", "Equation 3.1 (Schoenfeld, Buethe)", negate=False)
    )
    add(_entry("buethe.pi.li.upper", BoundKind.PI_LI_SQRT, "upper",
               (), 2, "claimed_external", "Buethe li comparison"))

    # -- rational pi bounds -----------------------------------------------
    add(_entry("thm3.2.upper", BoundKind.PI_RATIONAL, "upper",
               (1, _F("3.15"), _F("12.85"), _F("71.3"), _F("463.2275"), 4585),
               49, "claimed_paper", "Theorem 3.2"))
    cor33 = [
        ("cor3.3.a.upper", (1, _F("3.15"), _F("12.85"), _F("71.3"), _F("540.59")), 32),
        ("cor3.3.b.upper", (1, _F("3.15"), _F("12.85"), _F("80.43"), 0), 22),
        ("cor3.3.c.upper", (1, _F("3.15"), _F("14.21"), 0, 0), 14),
        ("cor3.3.d.upper", (1, _F("3.69"), 0, 0, 0), 10_031_975_087),
        ("cor3.3.e.upper", (_F("1.15"), 0, 0, 0, 0), 38_284_442_297),
    ]
    for bid, coeffs, x0 in cor33:
        add(_entry(bid, BoundKind.PI_RATIONAL, "upper", coeffs, x0,
                   "claimed_paper", "Corollary 3.3"))
    add(_entry("cor3.4.upper", BoundKind.PI_RATIONAL, "upper",
               (1, _F("3.35"), _F("12.65"), _F("71.7"), _F("466.1275"), _F("3489.8225")),
               45, "claimed_paper", "Corollary 3.4"))
    add(_entry("prop3.5.upper", BoundKind.PI_RATIONAL, "upper",
               (1, 3, 113), 41, "claimed_paper", "Proposition 3.5"))
    add(_entry("thm3.8.lower", BoundKind.PI_RATIONAL, "lower",
               (1, _F("2.85"), _F("13.15"), _F("70.7"), _F("458.7275"), _F("3428.7225")),
               19_033_744_403, "claimed_paper", "Theorem 3.8"))
    cor39 = [
        ("cor3.9.a.lower", (1, _F("2.85"), _F("13.15"), _F("70.7"), _F("458.7275")), 11_532_441_449),
        ("cor3.9.b.lower", (1, _F("2.85"), _F("13.15"), _F("70.7"), 0), 7_822_207_951),
        ("cor3.9.c.lower", (1, _F("2.85"), _F("13.15"), 0, 0), 1_331_532_233),
        ("cor3.9.d.lower", (1, _F("2.85"), 0, 0, 0), 38_099_531),
        ("cor3.9.e.lower", (1, 0, 0, 0, 0), 468_049),
    ]
    for bid, coeffs, x0 in cor39:
        add(_entry(bid, BoundKind.PI_RATIONAL, "lower", coeffs, x0,
                   "claimed_paper", "Corollary 3.9"))
    add(_entry("prop3.10.lower", BoundKind.PI_RATIONAL, "lower",
               (1, 3, -87), 19_423, "claimed_paper", "Proposition 3.10"))

    # -- log-power pi bounds ----------------------------------------------
    add(_entry("prop3.6.upper", BoundKind.PI_LOGPOW, "upper",
               (1, 1, 2, _F("6.15"), _F("24.15"), _F("120.75"), _F("724.5"), 6601),
               2, "claimed_paper", "Proposition 3.6"))
    add(_entry("rem3.6.upper", BoundKind.PI_LOGPOW, "upper",
               (1, 1, 2, 6, 133), 2, "claimed_paper", "Remark after Proposition 3.6"))
    add(_entry("cor3.7.upper", BoundKind.PI_LOGPOW, "upper",
               (1, 1, _F("2.3")), 27_777_762_891, "claimed_paper", "Corollary 3.7"))
    add(_entry("prop3.11.lower", BoundKind.PI_LOGPOW, "lower",
               (1, 1, 2, _F("5.85"), _F("23.85"), _F("119.25"), _F("715.5"), _F("5008.5")),
               19_027_490_297, "claimed_paper", "Proposition 3.11"))

    # -- prime gaps ---------------------------------------------------------
    add(_entry("thm4.1.gap3", BoundKind.GAP, "upper",
               (Fraction(87, 1000), 3), 6_034_256, "claimed_paper", "Theorem 4.1"))
    add(_entry("thm4.1.gap4", BoundKind.GAP, "upper",
               (Fraction(1982, 10), 4), 2, "claimed_paper", "Theorem 4.1"))
    add(_entry("eq4.2.gap", BoundKind.GAP, "upper",
               (Fraction(1, 5000), 2), 468_991_632, "claimed_external", "Equation 4.2 (Dusart)"))
    add(_entry("eq4.3.gap", BoundKind.GAP, "upper",
               (Fraction(1), 3), 89_693, "claimed_external", "Equation 4.3 (Dusart)"))

    # -- running prime sums -------------------------------------------------
    r1, r2 = sum_bound_from_eta(3, Fraction(3, 20), "recip")
    entries.extend(
        _two_sided("prop5.1", BoundKind.SUM_RECIP, (r1[0], r1[1], r2[0], r2[1]),
                   46_909_074, "claimed_paper", "Proposition 5.1", lower_x0=2)
    )
    entries.extend(
        _two_sided("eq5.5", BoundKind.SUM_RECIP, (Fraction(1, 5), 3),
                   2_278_383, "claimed_external", "Equation 5.5 (Dusart)")
    )
    l1, l2 = sum_bound_from_eta(3, Fraction(3, 20), "logp")
    entries.extend(
        _two_sided("prop5.4", BoundKind.SUM_LOGP, (l1[0], l1[1], l2[0], l2[1]),
                   30_972_320, "claimed_paper", "Proposition 5.4", lower_x0=2)
    )

    # -- the Mertens product --------------------------------------------------
    entries.extend(
        _two_sided("eq6.1", BoundKind.PRODUCT_MERTENS, (Fraction(1, 2), 2),
                   2, "claimed_external", "Equation 6.1 (Rosser, Schoenfeld)",
                   lower_x0=285)
    )
    add(_entry("prop6.1.lower", BoundKind.PRODUCT_MERTENS, "lower",
               (Fraction(-1, 20), 3, Fraction(-3, 16), 4), 46_909_038,
               "claimed_paper", "Proposition 6.1"))
    add(_entry("prop6.1.upper", BoundKind.PRODUCT_MERTENS, "upper",
               (Fraction(7, 100), 3), 2, "claimed_paper", "Proposition 6.1"))

    reg = {}
    for spec in entries:
        if spec.id in reg:
            raise InvalidRangeError("duplicate registry id %s" % spec.id)
        reg[spec.id] = spec
    return reg


def sum_bound_from_eta(k: int, eta, template: str) -> tuple[tuple[Fraction, int], tuple[Fraction, int]]:
    """Coefficient pairs ((c1, power1), (c2, power2)) for the running-sum
    envelopes derived from a theta envelope eta/log^k.

    recip: eta/(k log^k x) + (k+2) eta/((k+1) log^(k+1) x)
    logp:  eta/((k-1) log^(k-1) x) + eta/log^k x
    """
    eta = _F(eta)
    if eta <= 0:
        raise InvalidRangeError("eta must be positive")
    if template == "recip":
        if k < 1:
            raise InvalidRangeError("recip template needs k >= 1")
        return (eta / k, k), ((k + 2) * eta / (k + 1), k + 1)
    if template == "logp":
        if k < 2:
            raise InvalidRangeError("logp template needs k >= 2")
        return (eta / (k - 1), k - 1), (eta, k)
    raise InvalidRangeError("unknown template %r" % template)


_REGISTRY = _build_registry()


def registry_list() -> tuple[BoundSpec, ...]:
    """Every registered one-sided bound, in a stable order."""
    return tuple(_REGISTRY[k] for k in sorted(_REGISTRY))


def lookup(bound_id: str) -> BoundSpec:
    spec = _REGISTRY.get(bound_id)
    if spec is None:
        raise UnknownBoundError("no bound with id %r" % bound_id)
    return spec


def ids_matching(prefix: str) -> list[str]:
    """Registry ids equal to the prefix or extending it at a dot."""
    out = [k for k in sorted(_REGISTRY) if k == prefix or k.startswith(prefix + ".")]
    if not out:
        raise UnknownBoundError("no bounds match %r" % prefix)
    return out


def _sign(direction: str) -> int:
    return 1 if direction == "upper" else -1


def _power(ctx, base, expo: Fraction):
    if expo.denominator == 1:
        return base ** int(expo)
    return ctx.exp(lift(ctx, expo) * ctx.log(base))


def eval_bound(spec: BoundSpec, x, prec: int = DEFAULT_PREC) -> Enclosure:
    """Enclosure of the bound's right-hand side at x (x > 1)."""
    ctx = ivctx(prec)
    xv = lift(ctx, x)
    if xv.a <= 1:
        raise InvalidRangeError("bounds evaluate for x > 1 only")
    L = ctx.log(xv)
    s = _sign(spec.direction)
    c = spec.coefficients
    kind = spec.kind

    if kind is BoundKind.THETA_ENVELOPE:
        mag, k = c[0], int(c[1])
        return Enclosure.from_iv(xv + s * lift(ctx, mag) * xv / L**k)

    if kind is BoundKind.THETA_ENVELOPE_EXP:
        cc, rr = lift(ctx, c[0]), lift(ctx, c[1])
        pref = ctx.sqrt(cc / (ctx.pi * ctx.sqrt(rr)))
        body = pref * xv * ctx.sqrt(ctx.sqrt(L)) * ctx.exp(-ctx.sqrt(L / rr))
        return Enclosure.from_iv(xv + s * body)

    if kind in (BoundKind.THETA_SQRT, BoundKind.PI_LI_SQRT):
        total = ctx.mpf(0)
        for i in range(0, len(c), 4):
            ci, pi_x, qi, wi = c[i], c[i + 1], int(c[i + 2]), int(c[i + 3])
            term = lift(ctx, ci) * _power(ctx, xv, pi_x) * L**qi
            if wi:
                term = term / ctx.pi**wi
            total += term
        if kind is BoundKind.THETA_SQRT:
            return Enclosure.from_iv(xv + s * total)
        base = lift(ctx, analytic.li(x, prec))
        return Enclosure.from_iv(base + s * total)

    if kind is BoundKind.PI_RATIONAL:
        den = L - 1
        for i, ai in enumerate(c, start=1):
            if ai:
                den -= lift(ctx, ai) / L**i
        if not den.a > 0:
            raise DenominatorNonpositiveError(
                "denominator of %s not certainly positive at x=%s" % (spec.id, x)
            )
        return Enclosure.from_iv(xv / den)

    if kind is BoundKind.PI_LOGPOW:
        total = ctx.mpf(0)
        for j, cj in enumerate(c, start=1):
            total += lift(ctx, cj) * xv / L**j
        return Enclosure.from_iv(total)

    if kind is BoundKind.SUM_RECIP:
        _, b_const, _ = analytic.constants(28)
        total = ctx.log(L) + lift(ctx, b_const)
        for i in range(0, len(c), 2):
            total += lift(ctx, c[i]) / L ** int(c[i + 1])
        return Enclosure.from_iv(total)

    if kind is BoundKind.SUM_LOGP:
        _, _, e_const = analytic.constants(28)
        total = L + lift(ctx, e_const)
        for i in range(0, len(c), 2):
            total += lift(ctx, c[i]) / L ** int(c[i + 1])
        return Enclosure.from_iv(total)

    if kind is BoundKind.PRODUCT_MERTENS:
        body = ctx.mpf(1)
        for i in range(0, len(c), 2):
            body += lift(ctx, c[i]) / L ** int(c[i + 1])
        return Enclosure.from_iv(ctx.exp(-ctx.euler) / L * body)

    if kind is BoundKind.GAP:
        cc, j = c[0], int(c[1])
        return Enclosure.from_iv(xv * (1 + lift(ctx, cc) / L**j))

    raise UnsupportedKindError("cannot evaluate kind %s" % kind)


def exact_side(spec: BoundSpec, state: AccumulatorState, prec: int = DEFAULT_PREC) -> Enclosure:
    """The exact-quantity enclosure the bound compares against."""
    kind = spec.kind
    if kind in (BoundKind.THETA_ENVELOPE, BoundKind.THETA_ENVELOPE_EXP, BoundKind.THETA_SQRT):
        return state.theta
    if kind in (BoundKind.PI_LI_SQRT, BoundKind.PI_RATIONAL, BoundKind.PI_LOGPOW):
        return Enclosure.from_value(state.pi)
    if kind is BoundKind.SUM_RECIP:
        return state.sum_recip
    if kind is BoundKind.SUM_LOGP:
        return state.sum_logp
    if kind is BoundKind.PRODUCT_MERTENS:
        return eexp(state.sum_log1m, prec)
    raise UnsupportedKindError("kind %s has no pointwise exact side" % kind)


def compare_bound(spec: BoundSpec, x: int, exact: AccumulatorState) -> Verdict:
    """Verdict of the bound at one point against exact accumulator data.

    Pass requires the exact side's enclosure to sit strictly on the claimed
    side of the bound enclosure; overlapping enclosures yield Indeterminate
    (after one retry at doubled working precision). A rational bound whose
    denominator is not positive fails as an upper bound and holds trivially
    as a lower bound.
    """
    if exact.x != x:
        raise MismatchedStateError("state is at %d, not %d" % (exact.x, x))
    if spec.kind is BoundKind.GAP:
        raise UnsupportedKindError("gap bounds are verified over ranges, not points")
    for prec in (DEFAULT_PREC, RETRY_PREC):
        lhs = exact_side(spec, exact, prec)
        try:
            rhs = eval_bound(spec, x, prec)
        except DenominatorNonpositiveError:
            return Verdict.Fail if spec.direction == "upper" else Verdict.Pass
        if spec.direction == "upper":
            if lhs.certainly_lt(rhs):
                return Verdict.Pass
            if lhs.certainly_gt(rhs):
                return Verdict.Fail
        else:
            if lhs.certainly_gt(rhs):
                return Verdict.Pass
            if lhs.certainly_lt(rhs):
                return Verdict.Fail
    return Verdict.Indeterminate


def promote(spec: BoundSpec) -> BoundSpec:
    """Copy of the given bound with status verified_here (set by the verifier)."""
    return replace(spec, status="verified_here")
