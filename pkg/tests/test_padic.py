import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import primerange

from qsupercong.padic import (
    PADIC_IDS,
    PadicContext,
    PInteger,
    a_p,
    check_corollary,
    check_padic,
    check_swisher,
    check_vanhamme,
    gamma_p,
    mod_pe,
    pochhammer_rational,
    vp,
)

SMALL_PRIMES = list(primerange(3, 14))


def test_context_validation():
    for bad in (2, 9, 1, -3):
        with pytest.raises(ValueError):
            PadicContext(bad)
    with pytest.raises(ValueError):
        PadicContext(5, 0)
    assert PadicContext(5).modulus == 125


def test_valuation_and_residue():
    assert vp(Fraction(50, 3), 5) == 2
    assert vp(Fraction(3, 25), 5) == -2
    assert vp(0, 5) is None
    ctx = PadicContext(5, 2)
    assert mod_pe(Fraction(1, 2), ctx) == 13
    with pytest.raises(ValueError):
        mod_pe(Fraction(1, 5), ctx)


def test_pinteger():
    ctx = PadicContext(7, 2)
    x = PInteger.of(Fraction(1, 3), ctx)
    assert x * 3 == 1
    assert (x + x + x) == 1
    assert x.inverse() == 3
    assert PInteger.of(14, ctx).valuation() == 1
    with pytest.raises(ZeroDivisionError):
        PInteger.of(7, ctx).inverse()


def test_pochhammer_rational():
    assert pochhammer_rational(Fraction(5, 3), 0) == 1
    assert pochhammer_rational(Fraction(1, 2), 2) == Fraction(3, 4)
    assert pochhammer_rational(Fraction(-1, 3), 3) == Fraction(-10, 27)


def test_gamma_examples():
    for p in SMALL_PRIMES:
        ctx = PadicContext(p)
        assert gamma_p(1, ctx) == ctx.modulus - 1
    assert gamma_p(Fraction(1, 2), PadicContext(5, 1)) == 3
    ctx = PadicContext(7, 3)
    x = Fraction(1, 4)
    assert gamma_p(x, ctx) * gamma_p(1 - x, ctx) % 343 == (-1) ** a_p(x, 7) % 343


def test_gamma_rejects_non_integral():
    with pytest.raises(ValueError):
        gamma_p(Fraction(1, 5), PadicContext(5))


def test_a_p():
    assert a_p(1, 11) == 1
    assert a_p(Fraction(1, 2), 5) == 3
    assert a_p(Fraction(1, 4), 7) == 2
    assert a_p(7, 7) == 7


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_gamma_functional_equation(p):
    ctx = PadicContext(p, 3)
    m = ctx.modulus
    for x in range(1, 2 * p + 1):
        factor = -1 if x % p == 0 else -x
        assert gamma_p(x + 1, ctx) == factor * gamma_p(x, ctx) % m


@pytest.mark.parametrize("p", SMALL_PRIMES)
def test_gamma_reflection(p):
    rng = random.Random(p)
    ctx = PadicContext(p, 3)
    m = ctx.modulus
    done = 0
    while done < 50:
        x = Fraction(rng.randint(-500, 500), rng.randint(1, 60))
        if x.denominator % p == 0:
            continue
        assert gamma_p(x, ctx) * gamma_p(1 - x, ctx) % m == (-1) ** a_p(x, p) % m
        done += 1


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL_PRIMES), st.integers(2, 4), st.integers(-10**6, 10**6), st.integers(1, 500))
def test_gamma_precision_coherence(p, e, num, den):
    x = Fraction(num, den)
    if x.denominator % p == 0:
        return
    hi, lo = PadicContext(p, e), PadicContext(p, e - 1)
    assert gamma_p(x, hi) % lo.modulus == gamma_p(x, lo)


# --- supercongruences ---------------------------------------------------------


def test_half_sum_b2():
    v = check_vanhamme("B2", PadicContext(5))
    assert v.holds and v.e == 3


def test_third_sum_e2():
    assert check_vanhamme("E2", PadicContext(7)).holds
    assert check_vanhamme("E2", PadicContext(5)).status == "inapplicable"


def test_quarter_sum_f2():
    assert check_vanhamme("F2", PadicContext(3)).status == "inapplicable"
    assert check_vanhamme("F2", PadicContext(13)).holds


def test_classical_sum_unknown_id():
    with pytest.raises(ValueError):
        check_vanhamme("Z9", PadicContext(5))


@pytest.mark.parametrize("a, p, b", [(Fraction(1, 2), 5, 1), (Fraction(1, 3), 5, 2), (Fraction(1, 4), 7, 3), (Fraction(1, 3), 13, 1)])
def test_unified_form(a, p, b):
    v = check_swisher(a, PadicContext(p))
    assert v.holds and v.details["b"] == b
    assert v.details["gamma_form"] == "held"


def test_unified_form_rejects_other_a():
    with pytest.raises(ValueError):
        check_swisher(Fraction(1, 5), PadicContext(7))


def test_corollary_examples():
    assert check_corollary("COR3-4", PadicContext(7)).holds
    assert check_corollary("COR4-4", PadicContext(5)).holds
    assert check_corollary("COR4-4", PadicContext(7)).status == "inapplicable"


def test_eq7_agrees_with_b2():
    eq7 = check_corollary("EQ7-2", PadicContext(5))
    b2 = check_vanhamme("B2", PadicContext(5))
    assert eq7.holds and b2.holds
    # the two right sides are the same residue: (-1)^((p-1)/2) p == -p / Gamma_p(1/2)^2
    ctx = PadicContext(5, 3)
    g = gamma_p(Fraction(1, 2), ctx)
    assert (-5 * pow(g * g, -1, 125) - (-1) ** 2 * 5) % 125 == 0


def test_eq7_rejects_odd_d():
    with pytest.raises(ValueError):
        check_corollary("EQ7-3", PadicContext(7))


@pytest.mark.parametrize("sid", [*PADIC_IDS, "EQ7-2", "EQ7-4", "EQ7-6"])
@pytest.mark.parametrize("p", list(primerange(3, 32)))
def test_every_statement_holds_or_is_inapplicable(sid, p):
    v = check_padic(sid, PadicContext(p))
    assert v.status in ("held", "inapplicable"), v.as_dict()
    if v.holds:
        assert v.details["lhs_p_integral"]


def test_failure_carries_residue():
    from qsupercong.padic import _compare

    v = _compare("X", PadicContext(5), 3, Fraction(1), Fraction(26))
    assert v.status == "failed" and v.valuation == 2 and v.details["residue"] == 100
