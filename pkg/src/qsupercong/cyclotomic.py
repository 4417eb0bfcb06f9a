"""Cyclotomic polynomials, congruence moduli, and cyclotomic cancellation."""

from __future__ import annotations

import threading
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache

from sympy.ntheory import divisors, factorint

from .exact import ONE, LaurentPoly, poly_divrem, poly_gcd

__all__ = [
    "cyclotomic",
    "cyclotomic_neg",
    "Modulus",
    "theorem_modulus",
    "e3e4_modulus",
    "binomial_indices",
    "divides_cyclotomic",
    "div_cyclotomic",
    "cyclotomic_index",
    "reduce_cyclotomic",
]

_lock = threading.Lock()


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> LaurentPoly:
    if n == 1:
        return LaurentPoly([-1, 1])
    acc = ONE
    for d in divisors(n)[:-1]:
        acc = acc * _cyclotomic(d)
    quo, rem = poly_divrem(LaurentPoly.monomial(n) - 1, acc)
    assert rem.is_zero
    return quo


def cyclotomic(n: int) -> LaurentPoly:
    """The n-th cyclotomic polynomial, by exact division of q^n - 1."""
    if n < 1:
        raise ValueError("cyclotomic polynomials are indexed by n >= 1")
    with _lock:
        return _cyclotomic(n)


def cyclotomic_neg(n: int) -> LaurentPoly:
    """Phi_n(-q) with positive leading coefficient."""
    p = cyclotomic(n).neg_q()
    if n >= 3:
        # phi(n) is even, so the substitution keeps the polynomial monic
        assert p.leading_coefficient == 1
    return p if p.leading_coefficient > 0 else -p


@dataclass(frozen=True)
class Modulus:
    """A product of pairwise coprime powers ``base**mult``."""

    factors: tuple[tuple[LaurentPoly, int], ...]
    expanded: LaurentPoly = field(compare=False)
    labels: tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def from_factors(cls, factors, labels=()) -> "Modulus":
        factors = tuple((b, int(m)) for b, m in factors)
        for b, m in factors:
            if m < 1 or b.degree < 1:
                raise ValueError("modulus factors need positive multiplicity and degree")
        for i, (b1, _) in enumerate(factors):
            for b2, _ in factors[i + 1 :]:
                if poly_gcd(b1, b2).degree > 0:
                    raise ValueError("modulus bases are not pairwise coprime")
        expanded = ONE
        for b, m in factors:
            expanded = expanded * b**m
        return cls(factors, expanded, tuple(labels))

    @property
    def degree(self) -> int:
        return self.expanded.degree

    def multiplicities(self) -> tuple[int, ...]:
        return tuple(m for _, m in self.factors)

    def with_multiplicity(self, index: int, mult: int) -> "Modulus":
        fs = list(self.factors)
        fs[index] = (fs[index][0], mult)
        return Modulus.from_factors(fs, self.labels)


def _check_odd(n: int) -> None:
    if n < 3 or n % 2 == 0:
        raise ValueError(f"n must be odd and >= 3, got {n}")


def theorem_modulus(n: int) -> Modulus:
    """Phi_n(-q)^3 * Phi_n(q)^2."""
    _check_odd(n)
    return Modulus.from_factors(
        [(cyclotomic_neg(n), 3), (cyclotomic(n), 2)], (f"Phi_{n}(-q)", f"Phi_{n}(q)")
    )


def e3e4_modulus(n: int) -> Modulus:
    """The n-dependent modulus: Phi_n(q) enters squared or cubed as n = 1 or 3 mod 4."""
    _check_odd(n)
    return Modulus.from_factors(
        [(cyclotomic_neg(n), 3), (cyclotomic(n), 2 if n % 4 == 1 else 3)],
        (f"Phi_{n}(-q)", f"Phi_{n}(q)"),
    )


# ---------------------------------------------------------------------------
# cancellation of cyclotomic factors


def binomial_indices(m: int, eps: int = 1) -> Counter:
    """Cyclotomic indices e (with multiplicity) dividing ``1 - eps*q**m`` up to units."""
    m = abs(m)
    if m == 0:
        return Counter()
    if eps == 1:
        return Counter(divisors(m))
    return Counter(e for e in divisors(2 * m) if m % e)


def _mobius(n: int) -> int:
    f = factorint(n)
    if any(v > 1 for v in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def _totient(n: int) -> int:
    out = n
    for p in factorint(n):
        out -= out // p
    return out


@lru_cache(maxsize=None)
def _mobius_binomials(e: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Exponents f with mu(e/f) = -1 and +1 in Phi_e = prod (q^f - 1)^mu(e/f)."""
    minus, plus = [], []
    for f in divisors(e):
        mu = _mobius(e // f)
        if mu == 1:
            plus.append(f)
        elif mu == -1:
            minus.append(f)
    return tuple(minus), tuple(plus)


def divides_cyclotomic(p: LaurentPoly, e: int) -> bool:
    """Whether Phi_e(q) divides p, via reduction modulo q^e - 1."""
    if p.is_zero:
        return True
    folded = LaurentPoly(p.fold(e))
    if folded.is_zero:
        return True
    return poly_divrem(folded, cyclotomic(e))[1].is_zero


def reduce_cyclotomic(p: LaurentPoly, e: int) -> LaurentPoly:
    """The remainder of p modulo Phi_e(q), of degree below phi(e)."""
    if p.is_zero:
        return p
    return poly_divrem(LaurentPoly(p.fold(e)), cyclotomic(e))[1]


def div_cyclotomic(p: LaurentPoly, e: int) -> LaurentPoly:
    """Exact quotient p / Phi_e(q), computed with binomial multiplications and divisions."""
    minus, plus = _mobius_binomials(e)
    # 1/Phi_e = prod_{mu=-1} (q^f - 1) / prod_{mu=+1} (q^f - 1); the signs of
    # (1 - q^f) = -(q^f - 1) cancel when len(minus) == len(plus), else contribute.
    for f in minus:
        p = p.mul_binomial(f)
    for f in plus:
        p = p.div_binomial(f)
    if (len(minus) - len(plus)) % 2:
        p = -p
    return p


def cancel_cyclotomic(num: LaurentPoly, den: LaurentPoly, indices: Counter) -> tuple[LaurentPoly, LaurentPoly]:
    """Remove every Phi_e (e in ``indices``, with multiplicity) dividing both parts.

    ``indices`` must list the full cyclotomic factorization of ``den`` up to
    units; the result is then a coprime pair.
    """
    for e in sorted(indices, reverse=True):
        for _ in range(indices[e]):
            if not divides_cyclotomic(num, e):
                break
            num = div_cyclotomic(num, e)
            den = div_cyclotomic(den, e)
    return num, den


@lru_cache(maxsize=4096)
def cyclotomic_index(p: LaurentPoly) -> int | None:
    """e when p is +-q^k * Phi_e(q), else None."""
    if p.is_zero or p.degree < 1:
        return None
    base = p.ordinary()
    if base.leading_coefficient < 0:
        base = -base
    deg = base.degree
    for e in range(1, 2 * deg * deg + 3):
        if _totient(e) == deg and cyclotomic(e) == base:
            return e
    return None
