"""Tests for exact polynomial certificates and closed-form proof arithmetic.

The Sturm machinery is tested against an independent oracle: polynomials
are *constructed* from known rational roots with known multiplicities, so
the expected verdict on any ray can be derived by elementary reasoning
about the designed roots, with no polynomial algebra at all.
"""

import math
import random
import time
from fractions import Fraction

import pytest

from primebounds import proofkit as pk
from primebounds.bounds import Verdict, lookup
from primebounds.enclosure import DEFAULT_PREC, Enclosure, eexp, ivctx, lift
from primebounds.errors import (
    InvalidRangeError,
    NoCertificateError,
    NoSignChangeError,
    UnsupportedKindError,
    ZeroPolynomialError,
)

P = pk.ExactPolynomial
F = Fraction


def poly_from_roots(lead, root_mults):
    """Product lead * prod (y - r)^m, built by repeated multiplication."""
    acc = P((F(lead),))
    for r, m in root_mults:
        linear = P((-F(r), F(1)))
        for _ in range(m):
            acc = acc * linear
    return acc


# ---------------------------------------------------------------------------
# ExactPolynomial basics
# ---------------------------------------------------------------------------


class TestExactPolynomial:
    def test_trailing_zeros_stripped(self):
        p = P((F(1), F(2), F(0), F(0)))
        assert p.degree == 1
        assert p.coefficients == (F(1), F(2))

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ZeroPolynomialError):
            P((F(0), F(0)))

    def test_float_coefficients_rejected(self):
        with pytest.raises(InvalidRangeError):
            P((0.1, 1))

    def test_subtraction_to_zero_rejected(self):
        p = P((F(1), F(2)))
        with pytest.raises(ZeroPolynomialError):
            p - p

    def test_product_difference_of_squares(self):
        p = P((-F(1), F(1))) * P((F(1), F(1)))
        assert p.coefficients == (F(-1), F(0), F(1))

    def test_derivative(self):
        p = P((F(5), F(3), F(0), F(2)))  # 2y^3 + 3y + 5
        assert p.derivative().coefficients == (F(3), F(0), F(6))
        with pytest.raises(ZeroPolynomialError):
            P((F(7),)).derivative()

    def test_eval_exact_horner(self):
        p = P((F(1), F(-2), F(1)))  # (y-1)^2
        assert p.eval_exact(F(3, 2)) == F(1, 4)
        assert p(1) == 0

    def test_add_constant(self):
        p = P((F(1), F(1)))
        assert p.add_constant(F(1, 2)).coefficients == (F(3, 2), F(1))

    def test_primitive_preserves_sign_and_roots(self):
        p = P((F(1, 3), F(-2, 3))).primitive()
        assert p.coefficients == (F(1), F(-2))
        q = P((F(-4), F(8))).primitive()
        assert q.coefficients == (F(-1), F(2))

    def test_eval_enclosure_contains_exact(self):
        p = P((F("0.1"), F("-2.7"), F(3)))
        exact = p.eval_exact(F(7, 3))
        enc = p.eval_enclosure(F(7, 3))
        assert enc.contains(exact)

    def test_monomial(self):
        m = P.monomial(3, F(5))
        assert m.coefficients == (F(0), F(0), F(0), F(5))
        with pytest.raises(InvalidRangeError):
            P.monomial(-1)


class TestDivisionAndGcd:
    def test_divmod_identity(self):
        rng = random.Random(20260815)
        for _ in range(50):
            num = P(
                tuple(
                    F(rng.randint(-9, 9), rng.randint(1, 4))
                    for _ in range(rng.randint(1, 7))
                )
                + (F(rng.randint(1, 5)),)
            )
            den = P(
                tuple(
                    F(rng.randint(-9, 9), rng.randint(1, 4))
                    for _ in range(rng.randint(0, 3))
                )
                + (F(rng.randint(1, 5)),)
            )
            q, r = pk.poly_divmod(num, den)
            recomposed = den * q + r if q and r else (den * q if q else r)
            assert recomposed.coefficients == num.coefficients
            if r is not None:
                assert r.degree < den.degree

    def test_gcd_of_shared_factor(self):
        a = poly_from_roots(2, [(1, 1), (2, 1)])
        b = poly_from_roots(-3, [(1, 1), (3, 1)])
        g = pk.poly_gcd(a, b)
        assert g.coefficients == (F(-1), F(1))  # monic y - 1

    def test_gcd_coprime_is_one(self):
        a = poly_from_roots(1, [(1, 1)])
        b = poly_from_roots(1, [(2, 1)])
        assert pk.poly_gcd(a, b).coefficients == (F(1),)


class TestSquarefree:
    def test_decomposition_multiplicities(self):
        p = poly_from_roots(3, [(1, 2), (-2, 1)])
        decomp = dict(pk.squarefree_decomposition(p))
        assert decomp[1].coefficients == (F(2), F(1))  # y + 2
        assert decomp[2].coefficients == (F(-1), F(1))  # y - 1

    def test_pure_power(self):
        p = poly_from_roots(1, [(1, 3)])
        decomp = dict(pk.squarefree_decomposition(p))
        assert list(decomp) == [3]
        assert decomp[3].coefficients == (F(-1), F(1))

    def test_odd_part_drops_even_factors(self):
        p = poly_from_roots(1, [(1, 2), (-2, 1)])
        odd = pk.odd_multiplicity_part(p)
        assert odd.coefficients == (F(2), F(1))

    def test_odd_part_none_for_perfect_square(self):
        p = poly_from_roots(5, [(1, 2), (4, 2)])
        assert pk.odd_multiplicity_part(p) is None


# ---------------------------------------------------------------------------
# Root counting
# ---------------------------------------------------------------------------


class TestRootCounting:
    def test_counts_above(self):
        p = poly_from_roots(1, [(1, 1), (2, 1), (3, 1)])
        assert pk.count_distinct_roots_above(p, 0) == 3
        assert pk.count_distinct_roots_above(p, F(3, 2)) == 2
        assert pk.count_distinct_roots_above(p, 10) == 0

    def test_counts_between(self):
        p = poly_from_roots(1, [(1, 1), (2, 1), (3, 1)])
        assert pk.count_distinct_roots_between(p, F(3, 2), F(5, 2)) == 1
        assert pk.count_distinct_roots_between(p, 0, 3) == 3

    def test_multiplicity_collapses_to_distinct(self):
        p = poly_from_roots(1, [(2, 3)])
        assert pk.count_distinct_roots_above(p, 0) == 1

    def test_base_point_root_rejected(self):
        p = poly_from_roots(1, [(1, 1)])
        with pytest.raises(InvalidRangeError):
            pk.count_distinct_roots_above(p, 1)

    def test_no_real_roots(self):
        p = P((F(1), F(0), F(1)))  # y^2 + 1
        assert pk.count_distinct_roots_above(p, -100) == 0

    def test_root_magnitude_bound(self):
        p = poly_from_roots(1, [(7, 1), (-11, 1)])
        b = pk.root_magnitude_bound(p)
        assert b > 11


# ---------------------------------------------------------------------------
# Ray positivity: designed-root oracle
# ---------------------------------------------------------------------------


def expected_verdict(lead, root_mults, a):
    """Verdict derived from the designed roots, no polynomial algebra.

    Sign of the polynomial just right of y is lead * prod over roots r > y
    of (-1)^(mult of r); every designed polynomial here has positive lead
    once normalized below, so we reason directly.
    """
    a = F(a)

    def sign_just_right_of(y):
        s = 1 if lead > 0 else -1
        for r, m in root_mults:
            if r > y and m % 2 == 1:
                s = -s
        return s

    value_at_a_sign = sign_just_right_of(a) if all(r != a for r, _ in root_mults) else 0
    odd_beyond = [r for r, m in root_mults if r > a and m % 2 == 1]
    any_beyond = [r for r, m in root_mults if r > a]
    touches_a = any(r == a for r, _ in root_mults)

    if value_at_a_sign < 0:
        return "refuted"
    if odd_beyond:
        return "refuted"
    # no sign changes past a; polynomial keeps the sign it has just right
    # of a (which equals the sign at +infinity = sign of lead)
    if lead < 0:
        return "refuted"
    if touches_a or any_beyond:
        return "nonnegative"
    return "positive"


class TestSturmOracle:
    def test_thousand_designed_polynomials(self):
        rng = random.Random(1251)
        root_pool = [
            F(-3),
            F(-1),
            F(0),
            F(1, 2),
            F(1),
            F(2),
            F(5, 2),
            F(3),
            F(7),
            F(21, 4),
        ]
        ray_pool = [F(-4), F(-1), F(0), F(1, 2), F(1), F(2), F(5, 2), F(4), F(8)]
        checked = 0
        for _ in range(1000):
            n_roots = rng.randint(0, 4)
            roots = rng.sample(root_pool, n_roots)
            mults = [rng.randint(1, 2) for _ in roots]
            if sum(mults) > 8:
                mults = [1] * n_roots
            lead = rng.choice([-3, -1, 1, 2, 5])
            root_mults = list(zip(roots, mults))
            poly = poly_from_roots(lead, root_mults)
            a = rng.choice(ray_pool)
            cert = pk.sturm_positive_on_ray(poly, a)
            want = expected_verdict(lead, root_mults, a)
            assert cert.verdict == want, (lead, root_mults, a, cert.verdict, want)
            if cert.verdict == "refuted":
                # certificate invariant: the witness re-evaluates <= 0
                assert cert.witness >= a
                assert poly.eval_exact(cert.witness) <= 0
                if poly.eval_exact(cert.witness) == 0:
                    # only acceptable when the ray start itself is a root
                    assert cert.witness == a
            checked += 1
        assert checked == 1000

    def test_refutation_witness_strictly_negative_generic(self):
        # positive at ray start, dips negative past an odd root pair
        poly = poly_from_roots(1, [(2, 1), (3, 1), (5, 1)])
        cert = pk.sturm_positive_on_ray(poly, 0)
        assert cert.verdict == "refuted"
        assert poly.eval_exact(cert.witness) < 0

    def test_even_touch_is_nonnegative(self):
        poly = poly_from_roots(2, [(4, 2)])
        cert = pk.sturm_positive_on_ray(poly, 0)
        assert cert.verdict == "nonnegative"
        assert cert.distinct_roots_beyond == 1

    def test_root_exactly_at_ray_start(self):
        poly = poly_from_roots(1, [(1, 1), (2, 2)])
        cert = pk.sturm_positive_on_ray(poly, 1)
        assert cert.verdict == "nonnegative"
        down = poly_from_roots(-1, [(1, 1)])
        cert2 = pk.sturm_positive_on_ray(down, 1)
        assert cert2.verdict == "refuted"
        assert down.eval_exact(cert2.witness) < 0

    def test_constant_polynomials(self):
        assert pk.sturm_positive_on_ray(P((F(3),)), 0).verdict == "positive"
        assert pk.sturm_positive_on_ray(P((F(-3),)), 0).verdict == "refuted"


class TestSturmSpecExamples:
    def test_square_plus_one_positive(self):
        cert = pk.sturm_positive_on_ray(P((F(1), F(0), F(1))), 0)
        assert cert.verdict == "positive"
        assert cert.distinct_roots_beyond == 0

    def test_linear_root_inside_ray_refuted(self):
        poly = P((F(-35), F(1)))
        cert = pk.sturm_positive_on_ray(poly, F("34.525"))
        assert cert.verdict == "refuted"
        assert cert.witness >= F("34.525")
        assert poly.eval_exact(cert.witness) < 0

    def test_moderate_range_poly_holds_on_ray(self):
        cert = pk.sturm_positive_on_ray(pk.MODERATE_RANGE_POLY, F("12.2714"))
        # certified strictly positive, which implies the claimed >= 0
        assert cert.holds()
        assert cert.verdict == "positive"

    def test_moderate_range_poly_root_just_below_ray(self):
        # the sole real root sits in (12.2713, 12.2714): nudging the ray
        # start below it flips the verdict
        cert = pk.sturm_positive_on_ray(pk.MODERATE_RANGE_POLY, F("12.2713"))
        assert cert.verdict == "refuted"


class TestFrozenCertificates:
    def test_derivative_gap_poly_with_margin(self):
        poly = pk.DERIVATIVE_GAP_POLY.add_constant(pk.DERIVATIVE_MARGIN)
        start = time.monotonic()
        cert = pk.sturm_positive_on_ray(poly, F("34.53"))
        elapsed = time.monotonic() - start
        assert cert.verdict == "positive"
        # the certified ray starts below log(10^15) = 34.5387...
        assert F("34.53") < F("34.5387")
        assert elapsed < 1.0

    def test_derivative_gap_poly_bare_ray_fails(self):
        # without the additive margin the polynomial dips negative just
        # past 34.525 (largest real root near 34.52505), so the bare
        # claim on [34.525, inf) is refutable
        cert = pk.sturm_positive_on_ray(pk.DERIVATIVE_GAP_POLY, F("34.525"))
        assert cert.verdict == "refuted"
        assert pk.DERIVATIVE_GAP_POLY.eval_exact(cert.witness) < 0

    def test_lower_range_poly_positive_everywhere_relevant(self):
        start = time.monotonic()
        cert = pk.sturm_positive_on_ray(pk.LOWER_RANGE_POLY, F(22))
        elapsed = time.monotonic() - start
        assert cert.verdict == "positive"
        # 22 < log(5e9) = 22.33..., so the certified ray covers the claim
        assert 22 < math.log(5 * 10**9)
        assert elapsed < 1.0
        # in fact there are no real roots at all
        assert pk.count_distinct_roots_above(pk.LOWER_RANGE_POLY, F(-10**6)) == 0

    def test_moderate_range_poly_timing(self):
        start = time.monotonic()
        cert = pk.sturm_positive_on_ray(pk.MODERATE_RANGE_POLY, F("12.2714"))
        elapsed = time.monotonic() - start
        assert cert.holds()
        assert elapsed < 1.0

    def test_growth_identity_exact(self):
        assert pk.growth_identity_holds()

    def test_growth_identity_poly_all_positive(self):
        # positivity of every coefficient is what makes the identity
        # useful: it shows the two threshold polynomials multiply to
        # strictly less than y^14 for y > 0
        assert all(c > 0 for c in pk.GROWTH_IDENTITY_POLY.coefficients)
        assert pk.GROWTH_IDENTITY_POLY.degree == 6


# ---------------------------------------------------------------------------
# Monotonicity certificates
# ---------------------------------------------------------------------------


class TestMonotoneOnRay:
    def test_rational_lower_increasing_from_91(self):
        cert = pk.monotone_on_ray(lookup("thm3.8.lower"), 91)
        assert cert.verdict == "positive"

    def test_rational_upper_increasing_from_67(self):
        cert = pk.monotone_on_ray(lookup("cor3.3.a.upper"), 67)
        assert cert.verdict == "positive"

    def test_rational_upper_refuted_at_denominator(self):
        cert = pk.monotone_on_ray(lookup("thm3.2.upper"), 2)
        assert cert.verdict == "refuted"
        # the refutation is the denominator's: same polynomial
        den = pk.rational_denominator_poly(lookup("thm3.2.upper").coefficients)
        assert cert.polynomial.coefficients == den.coefficients

    def test_rational_upper_valley_past_pole(self):
        # at 49 the denominator is already positive but the bound still
        # decreases toward its local minimum near e^4.59, so the
        # numerator certificate is the refuted one
        cert = pk.monotone_on_ray(lookup("thm3.2.upper"), 49)
        assert cert.verdict == "refuted"
        num = pk.rational_derivative_numerator(lookup("thm3.2.upper").coefficients)
        assert cert.polynomial.coefficients == num.coefficients
        # past the valley the same bound is certified increasing
        cert_past = pk.monotone_on_ray(lookup("thm3.2.upper"), 100)
        assert cert_past.verdict == "positive"

    def test_logpow_upper(self):
        assert pk.monotone_on_ray(lookup("prop3.6.upper"), 10**9).verdict == "positive"
        assert pk.monotone_on_ray(lookup("prop3.6.upper"), 2).verdict == "refuted"

    def test_theta_envelope_directions(self):
        assert pk.monotone_on_ray(lookup("thm2.4.lower"), 2).verdict == "positive"
        assert pk.monotone_on_ray(lookup("thm2.4.upper"), 2).verdict == "refuted"
        assert pk.monotone_on_ray(lookup("thm2.4.upper"), 3).verdict == "positive"

    def test_gap_window_increasing(self):
        cert = pk.monotone_on_ray(lookup("thm4.1.gap3"), 6034256)
        assert cert.verdict == "positive"

    def test_running_sum_bounds(self):
        assert pk.monotone_on_ray(lookup("prop5.1.upper"), 46909074).verdict == "positive"
        assert pk.monotone_on_ray(lookup("prop5.1.lower"), 2).verdict == "positive"
        assert pk.monotone_on_ray(lookup("prop5.4.upper"), 30972320).verdict == "positive"
        assert pk.monotone_on_ray(lookup("prop5.4.lower"), 3).verdict == "positive"

    def test_product_sense_is_decreasing(self):
        full = pk.monotone_certificate(lookup("eq6.1.upper"), 2)
        assert full.sense == "decreasing"
        assert full.holds()
        assert pk.monotone_on_ray(lookup("eq6.1.lower"), 285).verdict == "positive"
        assert pk.monotone_on_ray(lookup("eq6.1.lower"), 2).verdict == "refuted"

    def test_certificate_ray_covers_log_of_start(self):
        full = pk.monotone_certificate(lookup("prop3.10.lower"), 19423)
        assert full.log_ray_start <= F(str(math.log(19423)))
        assert full.sense == "increasing"
        assert full.holds()

    def test_sqrt_kinds_unsupported_in_polynomial_route(self):
        with pytest.raises(UnsupportedKindError):
            pk.monotone_on_ray(lookup("eq3.1.upper"), 2657)
        with pytest.raises(UnsupportedKindError):
            pk.monotone_on_ray(lookup("eq2.12.upper"), 10**9)

    def test_shape_on_ray_termwise_for_sqrt_upper(self):
        cert = pk.shape_on_ray(lookup("eq3.1.upper"), 2657)
        assert cert.basis == "termwise"
        assert cert.sense == "increasing"
        assert cert.holds()
        li_cert = pk.shape_on_ray(lookup("buethe.pi.li.upper"), 2)
        assert li_cert.holds()

    def test_shape_on_ray_rejects_sqrt_lower(self):
        with pytest.raises(UnsupportedKindError):
            pk.shape_on_ray(lookup("eq2.14.lower"), 783674)

    def test_shape_on_ray_delegates_polynomial_kinds(self):
        cert = pk.shape_on_ray(lookup("thm3.8.lower"), 91)
        assert cert.basis == "sturm-ray"
        assert cert.holds()


# ---------------------------------------------------------------------------
# Zero-count bound and preconditions
# ---------------------------------------------------------------------------

T0 = 4_768_099_715_087


class TestZeroCountBound:
    def test_value_at_reference_height(self):
        enc = pk.zero_count_bound(T0)
        assert float(enc.hi) <= 2e13
        assert float(enc.lo) > 1.9e13

    def test_value_at_e_matches_closed_form(self):
        # at T = e the expression collapses to
        # -e*log(2*pi)/(2*pi) + 7/8 + 0.112 + 2.51 + 0.2/e
        ctx = ivctx(300)
        e = ctx.exp(1)
        oracle = (
            -e * ctx.log(2 * ctx.pi) / (2 * ctx.pi)
            + lift(ctx, F(7, 8))
            + lift(ctx, F("0.112"))
            + lift(ctx, F("2.51"))
            + lift(ctx, F("0.2")) / e
        )
        oracle_enc = Enclosure.from_iv(oracle)
        result = pk.zero_count_bound(eexp(1, 300))
        # both enclose the same real number, so they must overlap
        assert float(result.lo) <= float(oracle_enc.hi)
        assert float(oracle_enc.lo) <= float(result.hi)
        assert float(result.width) < 1e-10

    def test_monotone_in_T(self):
        low = pk.zero_count_bound(10**3)
        high = pk.zero_count_bound(10**6)
        assert low.certainly_lt(high.lo)

    def test_domain_rejection(self):
        with pytest.raises(InvalidRangeError):
            pk.zero_count_bound(2)


class TestLemmaPreconditions:
    def test_reference_pair_passes(self):
        assert pk.check_lemma_preconditions(55 * 10**24, T0) is Verdict.Pass

    def test_oversized_x0_fails(self):
        assert pk.check_lemma_preconditions(10**30, T0) is Verdict.Fail

    def test_tiny_x0_passes_for_large_T(self):
        assert pk.check_lemma_preconditions(3, 10**12) is Verdict.Pass

    def test_domain_rejection(self):
        with pytest.raises(InvalidRangeError):
            pk.check_lemma_preconditions(1, T0)

    def test_overlap_is_indeterminate(self):
        # feed the check its own fuzzy output as the target: the enclosures
        # then necessarily overlap at every retry precision
        ctx = ivctx(DEFAULT_PREC)
        xv = lift(ctx, 10**8)
        lhs = lift(ctx, F(123, 25)) * ctx.sqrt(xv / ctx.log(xv))
        target = Enclosure.from_iv(lhs)
        assert pk.check_lemma_preconditions(10**8, target) is Verdict.Indeterminate


class TestDudekThresholds:
    def test_reference_m_passes_with_printed_digits(self):
        n0_log, n1_log, verdict = pk.dudek_thresholds(3_239_773_013)
        assert verdict is Verdict.Pass
        assert float(n0_log.lo) >= math.log(4.18498732e53)
        assert float(n1_log.hi) <= math.log(4.1849871e53)

    def test_original_parameter_passes_with_larger_margin(self):
        ref = pk.dudek_thresholds(3_239_773_013)
        orig = pk.dudek_thresholds(4_971_170_000)
        assert orig.verdict is Verdict.Pass
        margin_ref = float(ref.n0_log.lo) - float(ref.n1_log.hi)
        margin_orig = float(orig.n0_log.lo) - float(orig.n1_log.hi)
        assert margin_orig > margin_ref

    def test_domain_rejection(self):
        with pytest.raises(InvalidRangeError):
            pk.dudek_thresholds(999)
        with pytest.raises(InvalidRangeError):
            pk.dudek_thresholds(10**6 + 0.5)

    def test_result_unpacks_as_triple(self):
        result = pk.dudek_thresholds(1000)
        a, b, v = result
        assert a is result.n0_log and b is result.n1_log and v is result.verdict


# ---------------------------------------------------------------------------
# Elementary crossing search
# ---------------------------------------------------------------------------


class TestElementaryCrossing:
    def test_sqrt_versus_cubed_log(self):
        lhs = pk.ElementaryForm.of((F("0.15"), F(1, 2), 0))
        rhs = pk.ElementaryForm.of((F("1.95"), 0, 3))
        enc = pk.elementary_crossing(lhs, rhs, 3 * 10**10)
        assert float(enc.hi) <= 34_485_879_392
        assert float(enc.lo) >= 34_485_879_391
        assert pk.crossing_integer_threshold(lhs, rhs, 3 * 10**10) == 34_485_879_392

    def test_mixed_powers_crossing(self):
        lhs = pk.ElementaryForm.of((1, F(1, 5), 0), (2, F(1, 13), 1))
        rhs = pk.ElementaryForm.of((1, F(1, 3), 0))
        enc = pk.elementary_crossing(lhs, rhs, 10**6)
        assert float(enc.hi) <= 783_674
        assert pk.crossing_integer_threshold(lhs, rhs, 10**6) == 783_674

    def test_ratio_form_with_negative_log_power(self):
        lhs = pk.ElementaryForm.of((F("0.15"), 1, -3))
        rhs = pk.ElementaryForm.of(
            (F("1.81"), F(1, 2), 0),
            (F("0.8"), F(1, 4), 0),
            (F("2.07766"), F(1, 3), 0),
        )
        assert (
            pk.crossing_integer_threshold(lhs, rhs, 3 * 10**10) == 29_946_085_320
        )

    def test_identical_forms_have_no_crossing(self):
        form = pk.ElementaryForm.of((1, 1, 0))
        with pytest.raises(NoSignChangeError):
            pk.elementary_crossing(form, form, 100)

    def test_disjoint_forms_have_no_crossing(self):
        lhs = pk.ElementaryForm.of((2, 1, 0))
        rhs = pk.ElementaryForm.of((1, 1, 0))
        with pytest.raises(NoSignChangeError):
            pk.elementary_crossing(lhs, rhs, 100)

    def test_bracket_endpoints_have_opposite_certain_signs(self):
        lhs = pk.ElementaryForm.of((1, F(1, 3), 0))  # cube root of t
        rhs = pk.ElementaryForm.of((1, 0, 1))  # log t
        enc = pk.elementary_crossing(lhs, rhs, 50)
        lo = F(*enc.lo_rational())
        hi = F(*enc.hi_rational())
        s_lo = pk._difference_sign(lhs, rhs, lo, DEFAULT_PREC)
        s_hi = pk._difference_sign(lhs, rhs, hi, DEFAULT_PREC)
        assert s_lo != 0 and s_hi != 0 and s_lo == -s_hi

    def test_hint_domain_rejection(self):
        form = pk.ElementaryForm.of((1, 1, 0))
        other = pk.ElementaryForm.of((1, 0, 1))
        with pytest.raises(InvalidRangeError):
            pk.elementary_crossing(form, other, 1)

    def test_empty_form_rejected(self):
        with pytest.raises(InvalidRangeError):
            pk.ElementaryForm.of((0, 1, 0))

    def test_form_value_encloses_closed_form(self):
        # 2 * t^(1/2) * log(t) at t = e^2 equals 4e
        form = pk.ElementaryForm.of((2, F(1, 2), 1))
        t = eexp(2, 300)
        val = form.value(t)
        ctx = ivctx(300)
        target = 4 * ctx.exp(1)
        assert float(val.lo) <= float(Enclosure.from_iv(target).hi)
        assert float(Enclosure.from_iv(target).lo) <= float(val.hi)
