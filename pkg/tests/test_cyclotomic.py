from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import cyclotomic_poly, divisors, factorint, totient

from qsupercong.cyclotomic import (
    Modulus,
    binomial_indices,
    cancel_cyclotomic,
    cyclotomic,
    cyclotomic_index,
    cyclotomic_neg,
    div_cyclotomic,
    divides_cyclotomic,
    e3e4_modulus,
    reduce_cyclotomic,
    theorem_modulus,
)
from qsupercong.exact import ONE, Q, LaurentPoly, poly_divrem, poly_gcd

from oracles import q, to_sympy


def test_small_values():
    assert cyclotomic(1) == Q - ONE
    assert cyclotomic(6) == LaurentPoly([1, -1, 1])
    assert cyclotomic(3) == LaurentPoly([1, 1, 1])


@pytest.mark.parametrize("n", range(1, 41))
def test_divisor_product(n):
    prod = ONE
    for d in divisors(n):
        prod = prod * cyclotomic(d)
    assert prod == LaurentPoly.monomial(n) - ONE


@pytest.mark.parametrize("n", [1, 2, 6, 12, 15, 30, 45, 63, 105])
def test_matches_sympy(n):
    assert (to_sympy(cyclotomic(n)) - cyclotomic_poly(n, q)).expand() == 0


@pytest.mark.parametrize("n", range(3, 26, 2))
def test_negated_argument(n):
    # Phi_{2n}(q) = Phi_n(-q) for odd n > 1; phi(n) is even so no sign appears
    assert cyclotomic_neg(n) == cyclotomic(2 * n)
    assert cyclotomic_neg(n) == cyclotomic(n).neg_q()
    assert cyclotomic_neg(n).leading_coefficient == 1


@pytest.mark.parametrize("n", range(3, 40, 2))
def test_values_at_plus_minus_one(n):
    assert cyclotomic(n)(-1) == 1
    f = factorint(n)
    if len(f) == 1:
        assert cyclotomic(n)(1) == next(iter(f))
    else:
        assert cyclotomic(n)(1) == 1


def test_integer_monic():
    for n in range(1, 80):
        c = cyclotomic(n)
        assert all(type(x) is int for x in c.coeffs)
        assert c.leading_coefficient == 1 and c.degree == totient(n)


def test_theorem_modulus():
    m = theorem_modulus(3)
    assert m.factors == ((LaurentPoly([1, -1, 1]), 3), (LaurentPoly([1, 1, 1]), 2))
    assert theorem_modulus(5).degree == 20
    assert poly_gcd(cyclotomic(3), cyclotomic_neg(3)).degree == 0
    assert m.expanded == LaurentPoly([1, -1, 1]) ** 3 * LaurentPoly([1, 1, 1]) ** 2


@pytest.mark.parametrize("n", [1, 2, 4, 0, -3])
def test_theorem_modulus_rejects(n):
    with pytest.raises(ValueError):
        theorem_modulus(n)


def test_e3e4_modulus():
    assert e3e4_modulus(5).multiplicities() == (3, 2)
    assert e3e4_modulus(7).multiplicities() == (3, 3)
    assert e3e4_modulus(9).multiplicities() == (3, 2)


def test_modulus_requires_coprime_bases():
    with pytest.raises(ValueError):
        Modulus.from_factors([(cyclotomic(3), 1), (cyclotomic(3) * cyclotomic(5), 1)])
    with pytest.raises(ValueError):
        Modulus.from_factors([(cyclotomic(3), 0)])


def test_binomial_indices():
    # 1 - q^6 = -(Phi_1 Phi_2 Phi_3 Phi_6); 1 + q^3 = Phi_2 Phi_6
    assert binomial_indices(6) == Counter({1: 1, 2: 1, 3: 1, 6: 1})
    assert binomial_indices(3, -1) == Counter({2: 1, 6: 1})


laurent = st.builds(
    lambda cs, low: LaurentPoly(cs, low),
    st.lists(st.integers(-9, 9), max_size=10),
    st.integers(-3, 3),
)


@settings(max_examples=60, deadline=None)
@given(laurent, st.integers(1, 30))
def test_fast_paths_match_division(p, e):
    phi = cyclotomic(e)
    rem = poly_divrem(p.ordinary(), phi)[1] if not p.is_zero else p
    assert divides_cyclotomic(p, e) == rem.is_zero
    red = reduce_cyclotomic(p, e)
    assert poly_divrem((p - red).ordinary(), phi)[1].is_zero if not (p - red).is_zero else True
    assert red.is_zero or red.degree < phi.degree
    planted = p * phi
    assert div_cyclotomic(planted, e) == p


def test_cancel_cyclotomic():
    num = cyclotomic(5) * cyclotomic(3) * (Q + 2)
    den = cyclotomic(5) * cyclotomic(1)
    n2, d2 = cancel_cyclotomic(num, den, Counter({5: 1, 1: 1}))
    assert n2 == cyclotomic(3) * (Q + 2) and d2 == cyclotomic(1)


def test_cyclotomic_index():
    assert cyclotomic_index(cyclotomic(7)) == 7
    assert cyclotomic_index(-cyclotomic(12) * Q**3) == 12
    assert cyclotomic_index(cyclotomic_neg(9)) == 18
    assert cyclotomic_index(Q + 2) is None
    assert cyclotomic_index(cyclotomic(3) * cyclotomic(5)) is None
