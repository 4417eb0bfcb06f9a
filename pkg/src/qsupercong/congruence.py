"""Deciding congruences between rational functions modulo polynomial moduli.

``A/B == C/D (mod M)`` is decided on the cross product ``X = A*D - C*B``:
with B and D coprime to every base of M, the congruence holds exactly when M
divides X.  Each base is also tested on its own, and the exact multiplicity
of every base in X is reported, which is how sharper-than-stated moduli
show up.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .cyclotomic import Modulus, cyclotomic_index, div_cyclotomic, divides_cyclotomic, reduce_cyclotomic
from .exact import (
    ONE,
    BiPoly,
    BiRationalFunction,
    LaurentPoly,
    RationalFunction,
    bipoly_divexact,
    bipoly_gcd,
    poly_divrem,
    poly_gcd,
)

__all__ = [
    "CongruenceVerdict",
    "check_congruent",
    "check_bicongruent",
    "multiplicity",
    "bi_multiplicity",
]

# multiplicities are counted up to this cap; reaching it is reported as the cap
MULTIPLICITY_CAP = 64


@dataclass(frozen=True)
class CongruenceVerdict:
    holds: bool
    modulus_degree: int
    residue: Union[LaurentPoly, None]
    coprimality_ok: bool
    # exact multiplicity of each base in the cross difference; None when it is zero
    max_multiplicity: Union[tuple[int, ...], None]
    per_factor: tuple[bool, ...] = ()
    offending_gcd: Union[LaurentPoly, BiPoly, None] = None

    def as_dict(self) -> dict:
        return {
            "holds": self.holds,
            "modulus_degree": self.modulus_degree,
            "coprimality_ok": self.coprimality_ok,
            "max_multiplicity": None if self.max_multiplicity is None else list(self.max_multiplicity),
            "residue": None if self.residue is None else str(self.residue),
        }


def _divides(x: LaurentPoly, base: LaurentPoly) -> bool:
    e = cyclotomic_index(base)
    if e is not None:
        return divides_cyclotomic(x, e)
    return poly_divrem(x, base)[1].is_zero


def _reduce(x: LaurentPoly, base: LaurentPoly) -> LaurentPoly:
    """A representative of x modulo base."""
    e = cyclotomic_index(base)
    if e is not None:
        return reduce_cyclotomic(x, e)
    return poly_divrem(x, base)[1]


def _div(x: LaurentPoly, base: LaurentPoly) -> LaurentPoly:
    """Exact quotient up to a unit (q-power and sign), which divisibility ignores."""
    e = cyclotomic_index(base)
    if e is not None:
        return div_cyclotomic(x, e)
    quo, rem = poly_divrem(x, base)
    if not rem.is_zero:
        raise ValueError("inexact division")
    return quo


def multiplicity(x: LaurentPoly, base: LaurentPoly, cap: int = MULTIPLICITY_CAP) -> int | None:
    """Largest m with base**m dividing x (None for x == 0)."""
    if x.is_zero:
        return None
    m = 0
    while m < cap and _divides(x, base):
        x, m = _div(x, base), m + 1
    return m


def _coprime(base: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """gcd(base, den) computed after reducing den modulo base."""
    rem = poly_divrem(den, base)[1]
    if rem.is_zero:
        return base.ordinary()
    return poly_gcd(base, rem)


def check_congruent(lhs: RationalFunction, rhs: RationalFunction, modulus: Modulus) -> CongruenceVerdict:
    """Decide ``lhs == rhs`` modulo a product of pairwise coprime powers."""
    A, B = lhs.num, lhs.den
    C, D = rhs.num, rhs.den
    offending = None
    coprime = True
    for base, _ in modulus.factors:
        for den in (B, D):
            g = _coprime(base, den)
            if g.degree > 0:
                coprime, offending = False, g
    X = A * D - C * B
    residue = poly_divrem(X, modulus.expanded)[1]
    if X.is_zero:
        mults = None
        per = tuple(True for _ in modulus.factors)
    else:
        mults = tuple(multiplicity(X, b) for b, _ in modulus.factors)
        per = tuple(m >= k for m, (_, k) in zip(mults, modulus.factors))
    # the product test and the per-base tests must agree for coprime bases
    if residue.is_zero != all(per):
        raise AssertionError("modulus divisibility disagrees with per-factor multiplicities")
    return CongruenceVerdict(
        holds=coprime and residue.is_zero,
        modulus_degree=modulus.degree,
        residue=residue,
        coprimality_ok=coprime,
        max_multiplicity=mults,
        per_factor=per,
        offending_gcd=offending,
    )


# ---------------------------------------------------------------------------
# bivariate


def _q_only(f: BiPoly) -> LaurentPoly | None:
    if f.a_degree == 0:
        return f.terms[0]
    return None


def _linear_root(f: BiPoly) -> tuple[int, int] | None:
    """For f = u*(a - s*q^t) with u a unit, return (t, s)."""
    if f.a_degree != 1 or set(f.terms) != {0, 1}:
        return None
    c0, c1 = f.terms[0], f.terms[1]
    if not (c0.is_unit() and c1.is_unit()):
        return None
    ratio = -c0.coeffs[0] / c1.coeffs[0]
    if ratio not in (1, -1):
        return None
    return c0.low - c1.low, int(ratio)


def _bi_divides(x: BiPoly, f: BiPoly) -> bool:
    if x.is_zero:
        return True
    base = _q_only(f)
    if base is not None:
        return all(_divides(c, base) for c in x.terms.values())
    root = _linear_root(f)
    if root is not None:
        return x.substitute_a(*root).is_zero
    return bipoly_divexact(x, f) is not None


def _bi_div(x: BiPoly, f: BiPoly) -> BiPoly:
    base = _q_only(f)
    if base is not None:
        return BiPoly({i: _div(c, base) for i, c in x.terms.items()})
    root = _linear_root(f)
    if root is not None:
        t, s = root
        # f = c1 * (a - s*q^t) with c1 a monomial
        c1 = f.terms[1]
        quo = x.div_a_linear(t, s, reverse=True)
        inv = Fraction(1) / c1.coeffs[0]
        return BiPoly({i: (c * inv).shift(-c1.low) for i, c in quo.terms.items()})
    q = bipoly_divexact(x, f)
    if q is None:
        raise ValueError("inexact bivariate division")
    return q


def bi_multiplicity(x: BiPoly, f: BiPoly, cap: int = MULTIPLICITY_CAP) -> int | None:
    if x.is_zero:
        return None
    m = 0
    while m < cap and _bi_divides(x, f):
        x, m = _bi_div(x, f), m + 1
    return m


def _bi_coprime(f: BiPoly, den: BiPoly) -> BiPoly | None:
    """A nontrivial common factor of f and den, or None."""
    base = _q_only(f)
    if base is not None:
        g = base.ordinary()
        for c in den.terms.values():
            g = _coprime(g, c)
            if g.degree == 0:
                return None
        return BiPoly.from_laurent(g)
    if _linear_root(f) is not None:
        # primitive and of degree one in a, hence irreducible
        return f if _bi_divides(den, f) else None
    g = bipoly_gcd(f, den)
    if g.a_degree > 0 or g.terms[0].degree > 0:
        return g
    return None


def _bi_residue(x: BiPoly, f: BiPoly) -> LaurentPoly:
    """A witness that is zero iff f divides x (for q-only or linear bases)."""
    base = _q_only(f)
    if base is not None:
        for i in sorted(x.terms):
            r = poly_divrem(x.terms[i], base)[1]
            if not r.is_zero:
                return r
        return LaurentPoly()
    root = _linear_root(f)
    if root is not None:
        return x.substitute_a(*root)
    return LaurentPoly() if bipoly_divexact(x, f) is not None else ONE


def _as_pair(v) -> tuple[BiPoly, BiPoly]:
    if isinstance(v, BiRationalFunction):
        return v.num, v.den
    if isinstance(v, RationalFunction):
        return BiPoly.from_laurent(v.num), BiPoly.from_laurent(v.den)
    num, den = v
    return BiPoly._coerce(num), BiPoly._coerce(den)


def _image(x: BiPoly, f: BiPoly):
    """The image of x modulo f: reduced coefficients for a q-only f, the
    value at the root for a linear f, and None otherwise."""
    base = _q_only(f)
    if base is not None:
        return BiPoly({i: _reduce(c, base) for i, c in x.terms.items()})
    root = _linear_root(f)
    if root is not None:
        return x.substitute_a(*root)
    return None


def _image_residue(A, B, C, D, f: BiPoly):
    """Image of A*D - C*B modulo f computed from the images of the parts."""
    images = [_image(x, f) for x in (A, B, C, D)]
    if images[0] is None:
        return None
    a, b, c, d = images
    x = a * d - c * b
    base = _q_only(f)
    if base is not None:
        for i in sorted(x.terms):
            r = _reduce(x.terms[i], base)
            if not r.is_zero:
                return r
        return LaurentPoly()
    return x


def check_bicongruent(lhs, rhs, factors: Sequence[BiPoly], multiplicities: bool = True) -> CongruenceVerdict:
    """Decide ``lhs == rhs`` modulo the product of pairwise coprime ``factors``.

    ``lhs`` and ``rhs`` are BiRationalFunctions or ``(num, den)`` pairs that
    need not be reduced: a base dividing both parts of a side is cancelled
    before the coprimality test, which is equivalent to reducing first.

    With ``multiplicities=False`` the full cross product is never formed for
    q-only or a-linear bases; each base is decided on reduced images (the
    quotient ring is a domain for these irreducible bases) and
    ``max_multiplicity`` is left as None.
    """
    factors = [BiPoly._coerce(f) for f in factors]
    for i, f in enumerate(factors):
        for g in factors[i + 1 :]:
            common = bipoly_gcd(f, g)
            if common.a_degree > 0 or common.terms[0].degree > 0:
                raise ValueError("modulus factors are not pairwise coprime")
    A, B = _as_pair(lhs)
    C, D = _as_pair(rhs)
    for f in factors:
        while not A.is_zero and _bi_divides(A, f) and _bi_divides(B, f):
            A, B = _bi_div(A, f), _bi_div(B, f)
        while not C.is_zero and _bi_divides(C, f) and _bi_divides(D, f):
            C, D = _bi_div(C, f), _bi_div(D, f)
    coprime, offending = True, None
    for f in factors:
        for den in (B, D):
            g = _bi_coprime(f, den)
            if g is not None:
                coprime, offending = False, g
    degree = sum(max(c.degree for c in f.terms.values()) + f.a_degree for f in factors)

    residues = None if multiplicities else [_image_residue(A, B, C, D, f) for f in factors]
    if residues is not None and all(r is not None for r in residues):
        per = tuple(r.is_zero for r in residues)
        residue = next((r for r in residues if not r.is_zero), LaurentPoly())
        return CongruenceVerdict(
            holds=coprime and all(per),
            modulus_degree=degree,
            residue=residue,
            coprimality_ok=coprime,
            max_multiplicity=None,
            per_factor=per,
            offending_gcd=offending,
        )

    X = A * D - C * B
    per = tuple(_bi_divides(X, f) for f in factors)
    product = BiPoly.from_laurent(ONE)
    for f in factors:
        product = product * f
    whole = X.is_zero or bipoly_divexact(X, product) is not None
    if whole != all(per):
        raise AssertionError("product divisibility disagrees with per-factor divisibility")
    residue = LaurentPoly()
    for f, ok in zip(factors, per):
        if not ok:
            residue = _bi_residue(X, f)
            break
    mults = None if X.is_zero else tuple(bi_multiplicity(X, f) for f in factors)
    return CongruenceVerdict(
        holds=coprime and whole,
        modulus_degree=degree,
        residue=residue,
        coprimality_ok=coprime,
        max_multiplicity=mults,
        per_factor=per,
        offending_gcd=offending,
    )
