"""Independent reference computations.

Sums are written out term by term from their definitions, sharing no code
with the package evaluators.  The same formulas run on sympy symbols (small
cases, simplified with ``cancel``) or on exact rational sample points, where
two rational functions of bounded degree agreeing at enough points are equal.
"""

from fractions import Fraction

from sympy import Integer, Poly, Rational, cancel, gcd, rem, symbols

q, a = symbols("q a")

# rational sample points; none is a root of unity, so no denominator vanishes
POINTS = [Fraction(2, 3), Fraction(-3, 5), Fraction(7, 4), Fraction(5, 2), Fraction(-1, 3), Fraction(9, 7)]


def to_sympy(x):
    """LaurentPoly, RationalFunction, BiPoly or BiRationalFunction -> sympy expression."""
    if hasattr(x, "num") and hasattr(x, "den"):
        return to_sympy(x.num) / to_sympy(x.den)
    if hasattr(x, "coeffs") and hasattr(x, "low"):
        return sum((Rational(c.numerator, c.denominator) if hasattr(c, "numerator") else c) * q ** (x.low + i)
                   for i, c in enumerate(x.coeffs)) if x.coeffs else Integer(0)
    if hasattr(x, "terms") and isinstance(x.terms, dict):
        return sum(to_sympy(c) * a**i for i, c in x.terms.items())
    return Integer(x)


def poch(x, base, k):
    out = Fraction(1)
    for j in range(k):
        out *= 1 - x * base**j
    return out


def q_int(n, base):
    return (1 - base**n) / (1 - base)


def _pre(n, d, r, q=q):
    return (-1) ** ((n - r) // d) * q_int(n, q**2) / q_int(r, q**2) * q ** ((n - r) * (n + r - d) // d)


def lhs1(n, d, r, A=1, q=q):
    K = (n - r) // d
    B = q ** (2 * d)
    return sum(
        (-1) ** k * (1 + q ** (2 * d * k + r)) * poch(A * q ** (2 * r), B, k) * poch(q ** (2 * r) / A, B, k)
        * poch(q ** (2 * r), B, k)
        / ((1 + q**r) * poch(A * q ** (2 * d), B, k) * poch(q ** (2 * d) / A, B, k) * poch(q ** (2 * d), B, k))
        * q ** (d * k * k + 2 * k * (d - r))
        for k in range(K + 1)
    )


def rhs1(n, d, r, A=1, q=q):
    K = (n - r) // d
    B = q ** (2 * d)
    s = sum(
        poch(A * q ** (2 * r), B, k) * poch(q ** (2 * r) / A, B, k) * poch(q**d, B, k)
        / (poch(q ** (2 * d), B, k) * poch(q ** (d + r), B, k) * poch(q ** (2 * d + r), B, k))
        * q ** (2 * k * (d - r))
        for k in range(K + 1)
    )
    return _pre(n, d, r, q) * s


def lhs2(n, d, r, q=q):
    K = (n - r) // d
    B = q ** (2 * d)
    return sum(
        (-1) ** k * (1 + q ** (2 * d * k + r)) * poch(q ** (2 * r), B, k) ** 2
        / ((1 + q**r) * poch(q ** (2 * d), B, k) ** 2) * q ** (d * k * k + k * (d - r))
        for k in range(K + 1)
    )


def rhs2(n, d, r, q=q):
    K = (n - r) // d
    B = q ** (2 * d)
    s = sum(
        poch(q ** (2 * r), B, k) * poch(q**r, B, k) / (poch(q ** (2 * d), B, k) * poch(q ** (2 * d + r), B, k))
        * q ** (2 * k * (d - r))
        for k in range(K + 1)
    )
    return _pre(n, d, r, q) * s


def cyclo(n, x=q):
    from sympy import cyclotomic_poly

    return cyclotomic_poly(n, x)


def congruent(lhs, rhs, modulus) -> bool:
    """lhs == rhs modulo a polynomial in q, with denominators required coprime to it."""
    diff = cancel(lhs - rhs)
    num, den = diff.as_numer_denom()
    num, den = Poly(num, q), Poly(den, q)
    M = Poly(modulus, q)
    if gcd(den, M).degree() > 0:
        return False
    return rem(num, M).is_zero


def equal(x, y) -> bool:
    return cancel(x - y) == 0


def value_at(x, qv, av=None):
    """Evaluate a package LaurentPoly/BiPoly/quotient at q = qv (and a = av)."""
    if hasattr(x, "num") and hasattr(x, "den"):
        return value_at(x.num, qv, av) / value_at(x.den, qv, av)
    if hasattr(x, "coeffs") and hasattr(x, "low"):
        return Fraction(x(qv))
    return sum((Fraction(c(qv)) * Fraction(av) ** i for i, c in x.terms.items()), Fraction(0))


def agrees(x, formula, avalues=(None,)) -> bool:
    """x equals formula(q=point[, A=a]) at every sample point."""
    for qv in POINTS:
        for av in avalues:
            want = formula(q=qv) if av is None else formula(q=qv, A=av)
            if value_at(x, qv, av) != want:
                return False
    return True
