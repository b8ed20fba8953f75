"""Tests for the continued-fraction / pole-residue pipeline."""

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavity_schwarz import rational
from cavity_schwarz.rational import (
    DegeneratePole,
    PadeCoefficients,
    PolynomialW,
    cfrac_rational,
    check_pole_brackets,
    cot_rule,
    ml_cot_terms,
    ml_tan_terms,
    pade_cot_coefficients,
    poly_long_division,
    poly_roots_aberth,
    residues,
    tan_rule,
)


def P(*coeffs):
    return PolynomialW(tuple(Fraction(c) for c in coeffs))


# --- continued-fraction recurrence -------------------------------------------

def test_cot_rule_depth_2_exact():
    # hand expansion: A2 = 5*(3-w) - w*1 = 15-6w, B2 = 5*3 - w = 15-w
    b0, a_seq, b_seq = cot_rule()
    A, B = cfrac_rational(b0, a_seq, b_seq, depth=2)
    assert A.coefficients == (Fraction(15), Fraction(-6))
    assert B.coefficients == (Fraction(15), Fraction(-1))


def test_cot_rule_depth_4_exact():
    # two more recurrence steps by hand:
    # A3 = 7(15-6w) - w(3-w) = 105-45w+w^2, B3 = 7(15-w) - 3w = 105-10w
    # A4 = 9*A3 - w*A2 = 945-420w+15w^2, B4 = 9*B3 - w*B2 = 945-105w+w^2
    b0, a_seq, b_seq = cot_rule()
    A, B = cfrac_rational(b0, a_seq, b_seq, depth=4)
    assert A.coefficients == (Fraction(945), Fraction(-420), Fraction(15))
    assert B.coefficients == (Fraction(945), Fraction(-105), Fraction(1))


def test_tan_rule_depth_2_is_3w_over_3_minus_w():
    b0, a_seq, b_seq = tan_rule()
    A, B = cfrac_rational(b0, a_seq, b_seq, depth=2)
    assert A.coefficients == (Fraction(0), Fraction(3))
    assert B.coefficients == (Fraction(3), Fraction(-1))
    # series oracle: the depth-2 truncation error at w=0.01 is w^3/45,
    # far above 1e-10, so the tight value check needs depth 4
    w = 0.01
    z = 0.1
    val2 = float(A(Fraction(1, 100))) / float(B(Fraction(1, 100)))
    exact = z * math.tan(z)
    assert abs(val2 - exact) == pytest.approx(w**3 / 45, rel=1e-2)


def test_tan_rule_depth_4_value():
    b0, a_seq, b_seq = tan_rule()
    A, B = cfrac_rational(b0, a_seq, b_seq, depth=4)
    z = 0.1
    w = Fraction(1, 100)
    val = float(A(w)) / float(B(w))
    assert abs(val - z * math.tan(z)) < 1e-10


def test_cfrac_depth_validation():
    b0, a_seq, b_seq = cot_rule()
    with pytest.raises(ValueError):
        cfrac_rational(b0, a_seq, b_seq, depth=1)


# --- long division ------------------------------------------------------------

def test_long_division_n2_pipeline():
    q, r = poly_long_division(P(945, -420, 15), P(945, -105, 1))
    assert q.coefficients == (Fraction(15),)
    assert r.coefficients == (Fraction(-13230), Fraction(1155))


def test_long_division_self():
    p = P(945, -105, 1)
    q, r = poly_long_division(p, p)
    assert q.coefficients == (Fraction(1),)
    assert r.is_zero


def test_long_division_n1_pipeline():
    q, r = poly_long_division(P(15, -6), P(15, -1))
    assert q.coefficients == (Fraction(6),)
    assert r.coefficients == (Fraction(-75),)


@given(
    nc=st.lists(st.integers(-50, 50), min_size=3, max_size=6),
    dc=st.lists(st.integers(-50, 50), min_size=2, max_size=3),
)
def test_long_division_reconstructs(nc, dc):
    if nc[-1] == 0 or dc[-1] == 0 or len(nc) < len(dc):
        return
    numer, denom = P(*nc), P(*dc)
    q, r = poly_long_division(numer, denom)
    back = q * denom + r
    assert back.coefficients == numer.coefficients
    assert r.is_zero or r.degree < denom.degree


# --- root finding --------------------------------------------------------------

def test_aberth_quadratic():
    # quadratic formula oracle for w^2 - 105w + 945
    disc = math.sqrt(105.0**2 - 4 * 945.0)
    lo, hi = (105.0 - disc) / 2, (105.0 + disc) / 2
    roots = poly_roots_aberth(PolynomialW((945, -105, 1), 128))
    assert len(roots) == 2
    assert float(mpmath.re(roots[0])) == pytest.approx(lo, rel=1e-12)
    assert float(mpmath.re(roots[1])) == pytest.approx(hi, rel=1e-12)
    assert abs(float(mpmath.im(roots[0]))) < 1e-20


def test_aberth_linear():
    roots = poly_roots_aberth(P(15, -1))
    assert float(mpmath.re(roots[0])) == pytest.approx(15.0, rel=1e-14)


def test_aberth_b8_all_real_positive_distinct():
    # sign-change oracle: count roots of B8 (the N=4 denominator) by
    # scanning for sign flips, then check Aberth lands inside each bracket
    b0, a_seq, b_seq = cot_rule()
    _, B8 = cfrac_rational(b0, a_seq, b_seq, depth=8)
    assert B8.degree == 4

    grid = [i * 0.5 for i in range(1, 2401)]
    vals = [float(B8(Fraction(x).limit_denominator(10**6))) for x in grid]
    brackets = []
    for x0, x1, v0, v1 in zip(grid, grid[1:], vals, vals[1:]):
        if v0 == 0.0:
            brackets.append((x0, x0))
        elif v0 * v1 < 0:
            brackets.append((x0, x1))
    assert len(brackets) == 4

    roots = sorted(float(mpmath.re(r)) for r in poly_roots_aberth(B8.with_precision(160)))
    for root, (lo, hi) in zip(roots, brackets):
        assert lo <= root <= hi
        assert root > 0


def test_aberth_rejects_constant():
    with pytest.raises(ValueError):
        poly_roots_aberth(P(3))


# --- residues -------------------------------------------------------------------

def test_residue_n2_first_pole():
    disc = math.sqrt(105.0**2 - 4 * 945.0)
    pole = (105.0 - disc) / 2
    out = residues(P(-13230, 1155), P(945, -105, 1), [pole])
    # direct formula oracle: (1155*pole - 13230) / (2*pole - 105)
    expect = (1155 * pole - 13230) / (2 * pole - 105)
    assert out[0] == pytest.approx(expect, rel=1e-12)
    assert out[0] == pytest.approx(20.54, abs=0.01)


def test_residue_n1():
    out = residues(P(-75), P(15, -1), [15.0])
    assert out[0] == pytest.approx(75.0, rel=1e-14)


def test_residue_zero_remainder():
    out = residues(P(0), P(945, -105, 1), [9.94, 95.06])
    assert out == [0.0, 0.0]


def test_residue_degenerate_pole():
    # (w-5)^2 has derivative zero at the repeated root
    with pytest.raises(DegeneratePole):
        residues(P(1), P(25, -10, 1), [5.0])


# --- full decomposition -----------------------------------------------------------

# printed reference values: (c0, (a_i...), (b_i...)) per N
TABLE_3SIG = {
    1: (6.00, (75.0,), (15.0,)),
    2: (15.0, (20.5, 1130.0), (9.94, 95.1)),
    3: (28.0, (19.7, 109.0, 7310.0), (9.87, 42.0, 326.0)),
    4: (45.0, (19.7, 80.3, 403.0, 30200.0), (9.87, 39.6, 106.0, 835.0)),
}


def match_3sig(value, printed):
    # printed values carry 3 significant digits: allow half a unit in the last
    return abs(value - printed) <= 0.5 * 10 ** (math.floor(math.log10(abs(printed))) - 2)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_pade_cot_table_values(n):
    c = pade_cot_coefficients(n)
    c0, a_ref, b_ref = TABLE_3SIG[n]
    assert match_3sig(c.c0, c0)
    for got, ref in zip(c.a, a_ref):
        assert match_3sig(got, ref)
    for got, ref in zip(c.b, b_ref):
        assert match_3sig(got, ref)


def test_pade_value_at_w1_n2():
    # A4/B4 at w=1 is (945-420+15)/(945-105+1) = 540/841 exactly
    c = pade_cot_coefficients(2)
    assert c.evaluate(1.0) == pytest.approx(540.0 / 841.0, rel=1e-12)
    assert abs(c.evaluate(1.0) - math.cos(1.0) / math.sin(1.0)) < 1e-5


def test_pade_value_at_cutoff():
    # w -> 0 limit of z*cot(z) is 1; N=1 gives 6 + 75/(0-15) = 1 exactly
    c = pade_cot_coefficients(1)
    assert c.evaluate(0.0) == pytest.approx(1.0, rel=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4, 6, 8, 12, 16])
def test_pade_reconstruction_matches_rational(n):
    # pole/residue form must agree with the A/B rational it came from
    import random

    b0, a_seq, b_seq = cot_rule()
    A, B = cfrac_rational(b0, a_seq, b_seq, depth=2 * n)
    c = pade_cot_coefficients(n)
    rng = random.Random(1234)
    for _ in range(20):
        w = rng.uniform(1e-6, c.b[0] / 2)
        wf = Fraction(w).limit_denominator(10**9)
        direct = float(A(wf)) / float(B(wf))
        assert c.evaluate(w) == pytest.approx(direct, rel=1e-8)


@pytest.mark.parametrize("n", [4, 8, 16])
def test_pade_accuracy_against_cot(n):
    # |z| <= N/2 accuracy window, spot checks
    c = pade_cot_coefficients(n)
    for z in (1.0, 2.0, n / 4.0):
        if z >= n / 2:
            continue
        approx = c.evaluate(z * z)
        exact = z / math.tan(z)
        assert abs(approx - exact) < 1e-10


def test_pade_error_monotone_in_n():
    # exact-rational evaluation at w=1; double arithmetic bottoms out at
    # ~1e-16 long before N=8's true error, so compare at extended precision
    b0, a_seq, b_seq = cot_rule()
    errs = []
    with mpmath.workprec(300):
        exact = mpmath.cot(1)
        for n in (2, 4, 8):
            A, B = cfrac_rational(b0, a_seq, b_seq, depth=2 * n)
            val = A(Fraction(1)) / B(Fraction(1))
            errs.append(abs(mpmath.mpf(val.numerator) / val.denominator - exact))
    assert errs[0] > errs[1] > errs[2]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 64, 128])
def test_pade_poles_real_positive_increasing(n):
    c = pade_cot_coefficients(n)
    assert len(c.b) == n
    assert all(x > 0 for x in c.b)
    assert all(y > x for x, y in zip(c.b, c.b[1:]))
    check_pole_brackets(c)


def test_pole_convergence_toward_pi_multiples():
    # for fixed i, sqrt(b_i) approaches (i+1)*pi monotonically in N
    sweeps = {n: pade_cot_coefficients(n) for n in (4, 8, 16, 32, 64)}
    for i in range(6):
        errs = [
            abs(math.sqrt(sweeps[n].b[i]) - (i + 1) * math.pi)
            for n in (4, 8, 16, 32, 64)
            if len(sweeps[n].b) > i
        ]
        assert all(e0 >= e1 for e0, e1 in zip(errs, errs[1:]))
        assert errs[-1] / ((i + 1) * math.pi) < 0.01


def test_coefficients_deterministic():
    a = pade_cot_coefficients(5)
    rational._coeff_cache.clear()
    b = pade_cot_coefficients(5)
    assert a == b


# --- Mittag-Leffler term data ------------------------------------------------------

def test_ml_cot_terms_empty():
    t = ml_cot_terms(0, 2.0, 1.0)
    assert t.poles == ()
    assert t.prefactor == pytest.approx(0.5)


def test_ml_cot_terms_pi_length():
    t = ml_cot_terms(3, math.pi, 1.0)
    assert [round(p) for p in t.poles] == [1, 4, 9]
    for n, p in enumerate(t.poles, start=1):
        assert p == pytest.approx(float(n * n), rel=1e-15)


def test_ml_tan_terms_single():
    t = ml_tan_terms(1, math.pi)
    assert len(t.poles) == 1
    assert t.poles[0] == pytest.approx(0.25, rel=1e-15)


def test_ml_tan_terms_empty():
    assert ml_tan_terms(0, 1.0).poles == ()


def test_ml_tan_truncated_sum_value():
    # series-convergence oracle: N=1024 partial sum vs z*tan(z) at z=0.1
    t = ml_tan_terms(1024, 1.0)
    z = 0.1
    acc = sum(z * z / (z * z - p) for p in t.poles) * t.prefactor
    assert abs(acc - z * math.tan(z)) < 1e-4


# --- coefficient table file ---------------------------------------------------------

def test_table_file_roundtrip(tmp_path):
    table = [pade_cot_coefficients(n) for n in (1, 2, 3)]
    path = tmp_path / "pade.tbl"
    rational.write_table_file(path, table)
    back = rational.read_table_file(path)
    for c in table:
        assert back[c.n_terms] == c


def test_table_file_fixed_point(tmp_path):
    table = [pade_cot_coefficients(n) for n in (1, 4)]
    p1, p2 = tmp_path / "a.tbl", tmp_path / "b.tbl"
    rational.write_table_file(p1, table)
    rational.write_table_file(p2, list(rational.read_table_file(p1).values()))
    assert p1.read_bytes() == p2.read_bytes()


# --- type validation ------------------------------------------------------------------

def test_polynomial_normalizes_trailing_zeros():
    p = P(1, 2, 0, 0)
    assert p.degree == 1


def test_pade_coefficients_reject_unsorted():
    with pytest.raises(ValueError):
        PadeCoefficients(2, 1.0, (1.0, 2.0), (9.0, 5.0))


def test_pade_coefficients_reject_negative_pole():
    with pytest.raises(ValueError):
        PadeCoefficients(1, 1.0, (1.0,), (-3.0,))


@settings(deadline=None, max_examples=25)
@given(st.integers(min_value=1, max_value=10))
def test_denominator_degree_matches_terms(n):
    b0, a_seq, b_seq = cot_rule()
    _, B = cfrac_rational(b0, a_seq, b_seq, depth=2 * n)
    assert B.degree == n
