from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsupercong.exact import (
    ONE,
    Q,
    ZERO,
    BiPoly,
    BiRationalFunction,
    LaurentPoly,
    RationalFunction,
    ZeroDivisorError,
    bipoly_divexact,
    bipoly_gcd,
    poly_divrem,
    poly_gcd,
)

from oracles import q as sq, to_sympy
from sympy import Poly, div as sdiv, gcd as sgcd


def P(*coeffs, low=0):
    return LaurentPoly(coeffs, low)


coeff = st.fractions(min_value=-20, max_value=20, max_denominator=6)
laurent = st.builds(
    lambda cs, low: LaurentPoly(cs, low),
    st.lists(coeff, max_size=7),
    st.integers(-4, 4),
)
nonzero_laurent = laurent.filter(lambda p: not p.is_zero)


def ordinary(p):
    return p.ordinary() if not p.is_zero else p


# --- ring operations --------------------------------------------------------


def test_difference_of_squares():
    assert (ONE + Q) * (ONE - Q) == ONE - Q * Q


def test_additive_identity():
    p = P(1, -2, 3, low=-2)
    assert p + ZERO == p


def test_unit_shift():
    assert (P(1, 1, low=-1)) * Q == ONE + Q


def test_zero_is_empty():
    assert ZERO.coeffs == () and ZERO.is_zero
    assert (Q - Q) == ZERO
    assert LaurentPoly([0, 0, 0], 5) == ZERO


def test_trailing_zeros_trimmed():
    p = LaurentPoly([0, 0, 1, 2, 0], -3)
    assert p.low == -1 and p.coeffs == (1, 2)


def test_coefficients_are_exact():
    p = P(Fraction(1, 3), Fraction(2, 3))
    assert p * 3 == P(1, 2)
    assert isinstance((p * 3).coeffs[0], int)


def test_huge_coefficients_do_not_overflow():
    big = 10**60
    p = P(big, 1) * P(big, -1)
    assert p == P(big * big, 0, -1)


def test_evaluation():
    p = P(1, 2, low=-1)  # q^-1 + 2
    assert p(2) == Fraction(5, 2)
    assert (ONE - Q)(1) == 0


@settings(max_examples=60, deadline=None)
@given(laurent, laurent, laurent)
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == ZERO


@settings(max_examples=40, deadline=None)
@given(laurent, laurent)
def test_product_matches_sympy(f, g):
    assert (to_sympy(f * g) - to_sympy(f) * to_sympy(g)).expand() == 0


# --- division ----------------------------------------------------------------


@pytest.mark.parametrize(
    "num, den, quo, rem",
    [
        (P(-1, 0, 1), P(-1, 1), P(1, 1), ZERO),
        (P(1, 0, 0, 1), P(1, 1), P(1, -1, 1), ZERO),
        (P(1, 0, 1), P(-1, 1), P(1, 1), P(2)),
    ],
)
def test_divrem_examples(num, den, quo, rem):
    assert poly_divrem(num, den) == (quo, rem)


def test_divrem_by_zero():
    with pytest.raises(ZeroDivisionError):
        poly_divrem(Q, ZERO)


@settings(max_examples=60, deadline=None)
@given(laurent, nonzero_laurent)
def test_divrem_reconstruction(f, g):
    f, g = ordinary(f), g.ordinary()
    quo, rem = poly_divrem(f, g)
    assert quo * g + rem == f
    assert rem.is_zero or rem.degree < g.degree


@settings(max_examples=30, deadline=None)
@given(laurent, nonzero_laurent)
def test_divrem_matches_sympy(f, g):
    f, g = ordinary(f), g.ordinary()
    quo, rem = poly_divrem(f, g)
    sq_, sr = sdiv(Poly(to_sympy(f), sq), Poly(to_sympy(g), sq))
    assert (sq_.as_expr() - to_sympy(quo)).expand() == 0
    assert (sr.as_expr() - to_sympy(rem)).expand() == 0


# --- gcd ---------------------------------------------------------------------


def test_gcd_examples():
    assert poly_gcd(P(-1, 0, 1), P(-1, 0, 0, 1)) in (P(-1, 1), P(1, -1))
    phi5, phi7 = P(1, 1, 1, 1, 1), P(1, 1, 1, 1, 1, 1, 1)
    assert poly_gcd(phi5, phi7).degree == 0
    g = poly_gcd(ZERO, P(2, 4))
    assert g.degree == 1 and poly_divrem(P(2, 4), g)[1].is_zero


@settings(max_examples=40, deadline=None)
@given(laurent, laurent, nonzero_laurent)
def test_gcd_divides_and_is_maximal(f, g, h):
    # h is a planted common factor
    f, g, h = ordinary(f), ordinary(g), h.ordinary()
    F, G = f * h, g * h
    if F.is_zero and G.is_zero:
        return
    d = poly_gcd(F, G)
    assert poly_divrem(F, d)[1].is_zero and poly_divrem(G, d)[1].is_zero
    assert poly_divrem(d, h)[1].is_zero
    expected = sgcd(Poly(to_sympy(F), sq), Poly(to_sympy(G), sq))
    assert d.degree == expected.degree()


# --- rational functions ------------------------------------------------------


def test_rational_reduces():
    r = RationalFunction(P(-1, 0, 1), P(-1, 1))
    assert r.den == ONE and r.num == P(1, 1)


def test_rational_zero_denominator():
    with pytest.raises(ZeroDivisorError):
        RationalFunction(ONE, ZERO)


@settings(max_examples=40, deadline=None)
@given(laurent, nonzero_laurent, nonzero_laurent)
def test_rational_canonical(a, b, c):
    r1 = RationalFunction(a, b)
    r2 = RationalFunction(a * c, b * c)
    assert r1.num == r2.num and r1.den == r2.den
    assert r1.den.low == 0 and r1.den.leading_coefficient > 0


@settings(max_examples=30, deadline=None)
@given(laurent, nonzero_laurent, laurent, nonzero_laurent)
def test_rational_field_ops(a, b, c, d):
    x, y = RationalFunction(a, b), RationalFunction(c, d)
    assert (x + y) - y == x
    if not c.is_zero:
        assert (x * y) / y == x


# --- substitution -----------------------------------------------------------


def test_substitutions():
    assert (ONE + Q).neg_q() == ONE - Q
    assert P(1, 1, 1).q_power(2) == P(1, 0, 1, 0, 1)
    f = BiPoly.a_linear(ONE, -LaurentPoly.monomial(2))  # 1 - a q^2
    assert f.substitute_a(-2).is_zero


@settings(max_examples=40, deadline=None)
@given(laurent)
def test_neg_q_involution(p):
    assert p.neg_q().neg_q() == p


# --- bivariate ---------------------------------------------------------------


def test_bipoly_divexact_examples():
    q2, q4 = LaurentPoly.monomial(2), LaurentPoly.monomial(4)
    num = BiPoly({0: ONE, 2: -q4})  # 1 - a^2 q^4
    den = BiPoly.a_linear(ONE, -q2)
    assert bipoly_divexact(num, den) == BiPoly.a_linear(ONE, q2)
    lin = BiPoly.a_linear(-q2, ONE)  # a - q^2
    assert bipoly_divexact(lin * BiPoly.a_linear(ONE, ONE), lin) == BiPoly.a_linear(ONE, ONE)
    assert bipoly_divexact(BiPoly({0: Q, 2: ONE}), BiPoly.a_linear(-Q, ONE)) is None


def test_bipoly_substitute_value():
    f = BiPoly({0: Q, 2: ONE})  # a^2 + q
    assert f.substitute_a(1) == Q + Q * Q


def test_birational_reduces_common_factor():
    lin = BiPoly.a_linear(ONE, -LaurentPoly.monomial(4))
    other = BiPoly.a_linear(Q, ONE)
    r = BiRationalFunction(lin * other, lin * BiPoly.from_laurent(ONE + Q))
    assert bipoly_gcd(r.num, r.den).a_degree == 0
    assert r.substitute_a(0) == RationalFunction(ONE)


bipoly = st.builds(lambda cs: BiPoly(dict(enumerate(cs))), st.lists(laurent, max_size=3))


@settings(max_examples=30, deadline=None)
@given(bipoly, bipoly, bipoly)
def test_bipoly_ring(f, g, h):
    assert f * (g + h) == f * g + f * h
    assert (f * g) * h == f * (g * h)


@settings(max_examples=30, deadline=None)
@given(bipoly, bipoly)
def test_bipoly_divexact_roundtrip(f, g):
    if g.is_zero:
        return
    assert bipoly_divexact(f * g, g) == f
