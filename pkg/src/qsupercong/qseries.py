"""Truncated basic hypergeometric sums as exact rational functions.

Statements are described by a small expression grammar (``SumExpr``): an
upper bound, a product of q-Pochhammer powers, an optional well-poised
factor ``(1+q^{sk+o})/(1+q^b)``, a sign pattern and a q-power whose exponent
is quadratic in k.  ``evaluate`` turns such a description into a reduced
(Bi)RationalFunction by Horner accumulation over one common denominator
that is known, factor by factor, as a product of binomials.  Cancellation
then only has to try those known factors.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from math import gcd
from typing import Union

from .cyclotomic import binomial_indices, cancel_cyclotomic, div_cyclotomic, divides_cyclotomic
from .exact import (
    ONE,
    BiPoly,
    BiRationalFunction,
    LaurentPoly,
    RationalFunction,
)

__all__ = [
    "InvalidCase",
    "QCase",
    "Poch",
    "SumExpr",
    "Prefactor",
    "QStatement",
    "BaileyParams",
    "evaluate",
    "evaluate_term",
    "q_integer",
    "q_pochhammer",
    "theorem1",
    "theorem2",
    "lemma22",
    "eq1param",
    "lhs_theorem1",
    "rhs_theorem1",
    "lhs_theorem2",
    "rhs_theorem2",
    "parametric_lhs_lemma22",
    "parametric_rhs_lemma22",
    "parametric_lhs_eq1param",
    "parametric_rhs_eq1param",
    "closed_prefactor",
    "bailey_rhs_product",
    "bailey_display_sum",
    "bailey_params",
    "bailey_lhs",
    "bailey_rhs",
]


class InvalidCase(ValueError):
    """A parameter triple outside a theorem's hypotheses.

    ``hypothesis`` names the violated condition: ``odd``, ``gcd``, ``range``
    or ``residue``.
    """

    def __init__(self, hypothesis: str, message: str):
        super().__init__(message)
        self.hypothesis = hypothesis


def check_case(n: int, d: int, r: int) -> None:
    if d < 1:
        raise InvalidCase("range", f"d must be positive, got {d}")
    if n < 1 or n % 2 == 0:
        raise InvalidCase("odd", f"n must be a positive odd integer, got {n}")
    if gcd(n, d) != 1:
        raise InvalidCase("gcd", f"gcd(n, d) = gcd({n}, {d}) != 1")
    if not (n - d * n + d <= r <= n):
        raise InvalidCase("range", f"r = {r} outside [{n - d * n + d}, {n}]")
    if (n - r) % d:
        raise InvalidCase("residue", f"n = {n} is not congruent to r = {r} mod d = {d}")


@dataclass(frozen=True, order=True)
class QCase:
    n: int
    d: int
    r: int

    def __post_init__(self):
        check_case(self.n, self.d, self.r)

    @property
    def K(self) -> int:
        """The common upper summation bound (n - r)/d."""
        return (self.n - self.r) // self.d

    def as_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "r": self.r}


# ---------------------------------------------------------------------------
# grammar


@dataclass(frozen=True)
class Poch:
    """``(sign * x * q^shift; q^step)_k ** power`` where x is 1, a or 1/a (``a`` = 0, 1, -1)."""

    shift: int
    step: int
    power: int = 1
    a: int = 0
    sign: int = 1

    def specialize(self, t: int) -> "Poch":
        """Replace a by q^t."""
        return replace(self, shift=self.shift + self.a * t, a=0)


@dataclass(frozen=True)
class SumExpr:
    upper: int
    pochs: tuple[Poch, ...]
    q_exp: tuple[int, int, int] = (0, 0, 0)  # c0 + c1*k + c2*k^2
    alternating: bool = False
    lead: tuple[int, int, int] | None = None  # (1 + q^(s*k + o)) / (1 + q^b)
    sign: int = 1

    @property
    def parametric(self) -> bool:
        return any(p.a for p in self.pochs)

    def specialize(self, t: int) -> "SumExpr":
        return replace(self, pochs=tuple(p.specialize(t) for p in self.pochs))


@dataclass(frozen=True)
class Prefactor:
    """``sign * q^q_exp * prod (1 - q^m)^power``."""

    sign: int = 1
    q_exp: int = 0
    binomials: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True)
class QStatement:
    """``lhs == prefactor * rhs`` modulo something the caller decides."""

    lhs: SumExpr
    rhs: SumExpr
    prefactor: Prefactor = field(default_factory=Prefactor)


# ---------------------------------------------------------------------------
# evaluation

Atom = tuple  # ("q", m, eps) | ("aq", m, eps) | ("qa", m, eps) | ("a",)


def _poch_atoms(p: Poch, j: int) -> tuple[list[Atom], int]:
    """Atoms of the j-th factor of a Pochhammer and the a-power it contributes."""
    x = p.shift + p.step * j
    if p.a == 0:
        return [("q", x, p.sign)], 0
    if p.a == 1:
        return [("aq", x, p.sign)], 0
    # 1 - s*q^x/a = a^-1 (a - s*q^x)
    return [("qa", x, p.sign)], -1


def _ratio_atoms(expr: SumExpr, k: int) -> tuple[list[Atom], list[Atom]]:
    """Numerator and denominator atoms of t_k / t_{k-1}, excluding signs and q-powers."""
    num: list[Atom] = []
    den: list[Atom] = []
    a_pow = 0
    for p in expr.pochs:
        atoms, ap = _poch_atoms(p, k - 1)
        target = num if p.power > 0 else den
        target.extend(atoms * abs(p.power))
        a_pow += ap * p.power
    if a_pow > 0:
        num.extend([("a",)] * a_pow)
    elif a_pow < 0:
        den.extend([("a",)] * -a_pow)
    return num, den


def _apply(poly, atom: Atom):
    kind = atom[0]
    if kind == "q":
        return poly.mul_binomial(atom[1], atom[2])
    if kind == "aq":
        return poly.mul_a_linear(atom[1], atom[2])
    if kind == "qa":
        return poly.mul_a_linear(atom[1], atom[2], reverse=True)
    return poly.shift_a(1)


def _apply_all(poly, atoms):
    for atom in atoms:
        poly = _apply(poly, atom)
    return poly


def _q_exponent(expr: SumExpr, k: int) -> int:
    c0, c1, c2 = expr.q_exp
    return c0 + c1 * k + c2 * k * k


class _Accumulator:
    """Numerator/denominator pair plus the denominator's atom factorization."""

    def __init__(self, bivariate: bool):
        self.bivariate = bivariate
        one = BiPoly.from_laurent(ONE) if bivariate else ONE
        self.num = one
        self.den = one
        self.den_atoms: list[Atom] = []


def evaluate_parts(expr: SumExpr, lo: int = 0, hi: int | None = None, prefactor: Prefactor | None = None, bivariate: bool | None = None):
    """Unreduced (num, den, den_atoms) of ``prefactor * sum_{k=lo}^{hi} t_k``."""
    hi = expr.upper if hi is None else hi
    if bivariate is None:
        bivariate = expr.parametric
    acc = _Accumulator(bivariate)
    one = acc.num
    if lo > hi:
        zero = one * 0
        return zero, one, []

    def lead(k: int):
        if expr.lead is None:
            return one
        s, o, _ = expr.lead
        return one.mul_binomial(s * k + o, -1)

    # Horner from hi down to lo+1: S_{k-1} = lead(k-1) + rho_k S_k
    P, Qd = lead(hi), one
    den_atoms: list[Atom] = []
    for k in range(hi, lo, -1):
        n_atoms, d_atoms = _ratio_atoms(expr, k)
        c2, c1 = expr.q_exp[2], expr.q_exp[1]
        qs = c2 * (2 * k - 1) + c1
        Qd = _apply_all(Qd, d_atoms)
        step = _apply_all(P, n_atoms).shift_q(qs) if bivariate else _apply_all(P, n_atoms).shift(qs)
        if expr.alternating:
            step = -step
        P = lead(k - 1) * Qd + step
        den_atoms.extend(d_atoms)

    # t_lo itself (without lead) as a product of ratios
    base_num, base_den = one, one
    for k in range(1, lo + 1):
        n_atoms, d_atoms = _ratio_atoms(expr, k)
        base_num = _apply_all(base_num, n_atoms)
        base_den = _apply_all(base_den, d_atoms)
        den_atoms.extend(d_atoms)
    qpow = _q_exponent(expr, lo)
    sign = expr.sign * (-1 if expr.alternating and lo % 2 else 1)

    num = base_num * P
    den = base_den * Qd
    if expr.lead is not None:
        b = expr.lead[2]
        den = den.mul_binomial(b, -1)
        den_atoms.append(("q", b, -1))
    if prefactor is not None:
        sign *= prefactor.sign
        qpow += prefactor.q_exp
        for m, power in prefactor.binomials:
            atom = ("q", m, 1)
            if power > 0:
                num = _apply_all(num, [atom] * power)
            else:
                den = _apply_all(den, [atom] * -power)
                den_atoms.extend([atom] * -power)
    num = num.shift_q(qpow) if bivariate else num.shift(qpow)
    if sign < 0:
        num = -num
    return num, den, den_atoms


def _reduce_univariate(num: LaurentPoly, den: LaurentPoly, atoms: list[Atom]) -> RationalFunction:
    indices: Counter = Counter()
    for atom in atoms:
        if atom[0] != "q":
            raise ValueError("bivariate atom in a univariate reduction")
        _, m, eps = atom
        if m == 0 and eps == 1:
            raise ZeroDivisionError("factor 1 - q^0 in a denominator")
        indices.update(binomial_indices(m, eps))
    num, den = cancel_cyclotomic(num, den, indices)
    return RationalFunction.from_reduced(num, den)


def _bi_divides_q(num: BiPoly, e: int) -> bool:
    return all(divides_cyclotomic(c, e) for c in num.terms.values())


def _bi_div_q(p: BiPoly, e: int) -> BiPoly:
    return BiPoly({i: div_cyclotomic(c, e) for i, c in p.terms.items()})


def _root_vanishes(p: BiPoly, atom: Atom) -> bool:
    _, m, eps = atom
    if atom[0] == "aq":  # 1 - eps a q^m vanishes at a = eps q^-m
        t, s = -m, eps
    else:  # a - eps q^m vanishes at a = eps q^m
        t, s = m, eps
    out = LaurentPoly()
    for i, c in p.terms.items():
        term = c.shift(i * t)
        out = out + (term if s == 1 or i % 2 == 0 else -term)
    return out.is_zero


def _reduce_bivariate(num: BiPoly, den: BiPoly, atoms: list[Atom]) -> BiRationalFunction:
    indices: Counter = Counter()
    linear: Counter = Counter()
    for atom in atoms:
        if atom[0] == "q":
            _, m, eps = atom
            if m == 0 and eps == 1:
                raise ZeroDivisionError("factor 1 - q^0 in a denominator")
            indices.update(binomial_indices(m, eps))
        elif atom[0] in ("aq", "qa"):
            linear[atom] += 1
    for atom in sorted(linear):
        _, m, eps = atom
        rev = atom[0] == "qa"
        for _ in range(linear[atom]):
            if num.is_zero or not _root_vanishes(num, atom):
                break
            num = num.div_a_linear(m, eps, reverse=rev)
            den = den.div_a_linear(m, eps, reverse=rev)
    for e in sorted(indices, reverse=True):
        for _ in range(indices[e]):
            if num.is_zero or not _bi_divides_q(num, e):
                break
            num = _bi_div_q(num, e)
            den = _bi_div_q(den, e)
    return BiRationalFunction.from_reduced(num, den)


def evaluate(expr: SumExpr, prefactor: Prefactor | None = None, lo: int = 0, hi: int | None = None) -> Union[RationalFunction, BiRationalFunction]:
    """``prefactor * sum_{k=lo}^{hi} t_k`` as a reduced rational function."""
    num, den, atoms = evaluate_parts(expr, lo, hi, prefactor)
    if expr.parametric:
        return _reduce_bivariate(num, den, atoms)
    return _reduce_univariate(num, den, atoms)


def evaluate_term(expr: SumExpr, k: int, bivariate: bool | None = None):
    """The single summand t_k."""
    num, den, atoms = evaluate_parts(expr, k, k, bivariate=bivariate)
    if bivariate or (bivariate is None and expr.parametric):
        return _reduce_bivariate(num, den, atoms)
    return _reduce_univariate(num, den, atoms)


def evaluate_prefactor(pre: Prefactor) -> RationalFunction:
    return evaluate(SumExpr(0, ()), pre)


# ---------------------------------------------------------------------------
# elementary q-objects


def q_integer(n: int, power: int = 1) -> RationalFunction:
    """``[n]_{q^power} = (1 - q^(n*power)) / (1 - q^power)``."""
    if power < 1:
        raise ValueError("power must be positive")
    return evaluate_prefactor(Prefactor(binomials=((n * power, 1), (power, -1))))


def q_pochhammer(shift: int, step: int, length: int, a: int = 0) -> Union[LaurentPoly, BiPoly]:
    """``(x q^shift; q^step)_length`` with x = 1, a (a=1) or 1/a (a=-1).

    For ``a = -1`` the factor ``a^-length`` is dropped and the polynomial
    ``prod (a - q^(shift + step*j))`` is returned.
    """
    if step < 1 or length < 0:
        raise ValueError("need step >= 1 and length >= 0")
    p = Poch(shift, step, 1, a)
    out = BiPoly.from_laurent(ONE) if a else ONE
    for j in range(length):
        out = _apply_all(out, _poch_atoms(p, j)[0])
    return out


# ---------------------------------------------------------------------------
# statements


def closed_prefactor_spec(case: QCase) -> Prefactor:
    """(-1)^K [n]_{q^2} / [r]_{q^2} q^{(n-r)(n+r-d)/d}."""
    n, d, r = case.n, case.d, case.r
    e_num = (n - r) * (n + r - d)
    if e_num % d:
        raise AssertionError(f"q-exponent {e_num}/{d} is not integral")
    return Prefactor(
        sign=-1 if case.K % 2 else 1,
        q_exp=e_num // d,
        binomials=((2 * n, 1), (2 * r, -1)),
    )


def closed_prefactor(case: QCase) -> RationalFunction:
    return evaluate_prefactor(closed_prefactor_spec(case))


def _theorem_stmt(case: QCase, family: int, parametric: bool) -> QStatement:
    n, d, r = case.n, case.d, case.r
    K = case.K
    base = 2 * d
    lhs_pochs = []
    if parametric:
        lhs_pochs += [
            Poch(2 * r, base, 1, a=1),
            Poch(2 * r, base, 1, a=-1),
            Poch(base, base, -1, a=1),
            Poch(base, base, -1, a=-1),
        ]
        if family == 1:
            lhs_pochs += [Poch(2 * r, base, 1), Poch(base, base, -1)]
    else:
        power = 3 if family == 1 else 2
        lhs_pochs += [Poch(2 * r, base, power), Poch(base, base, -power)]
    linear = 2 * (d - r) if family == 1 else d - r
    lhs = SumExpr(
        upper=K,
        pochs=tuple(lhs_pochs),
        q_exp=(0, linear, d),
        alternating=True,
        lead=(2 * d, r, r),
    )
    if family == 1:
        top = [Poch(d, base)]
        bottom = [Poch(base, base, -1), Poch(d + r, base, -1), Poch(base + r, base, -1)]
    else:
        top = [Poch(r, base)]
        bottom = [Poch(base, base, -1), Poch(base + r, base, -1)]
        if parametric:
            bottom.append(Poch(2 * r, base, -1))
    if parametric:
        top = [Poch(2 * r, base, 1, a=1), Poch(2 * r, base, 1, a=-1)] + top
    else:
        top = [Poch(2 * r, base, 2 if family == 1 else 1)] + top
    rhs = SumExpr(upper=K, pochs=tuple(top + bottom), q_exp=(0, 2 * (d - r), 0))
    return QStatement(lhs, rhs, closed_prefactor_spec(case))


def theorem1(case: QCase) -> QStatement:
    return _theorem_stmt(case, 1, False)


def theorem2(case: QCase) -> QStatement:
    return _theorem_stmt(case, 2, False)


def lemma22(case: QCase) -> QStatement:
    """The one-parameter version of the cubic family (indeterminate a)."""
    return _theorem_stmt(case, 1, True)


def eq1param(case: QCase) -> QStatement:
    """The one-parameter version of the quadratic family (indeterminate a)."""
    return _theorem_stmt(case, 2, True)


def lhs_theorem1(case: QCase) -> RationalFunction:
    return evaluate(theorem1(case).lhs)


def rhs_theorem1(case: QCase) -> RationalFunction:
    st = theorem1(case)
    return evaluate(st.rhs, st.prefactor)


def lhs_theorem2(case: QCase) -> RationalFunction:
    return evaluate(theorem2(case).lhs)


def rhs_theorem2(case: QCase) -> RationalFunction:
    st = theorem2(case)
    return evaluate(st.rhs, st.prefactor)


def parametric_lhs_lemma22(case: QCase) -> BiRationalFunction:
    return evaluate(lemma22(case).lhs)


def parametric_rhs_lemma22(case: QCase) -> BiRationalFunction:
    st = lemma22(case)
    return evaluate(st.rhs, st.prefactor)


def parametric_lhs_eq1param(case: QCase) -> BiRationalFunction:
    return evaluate(eq1param(case).lhs)


def parametric_rhs_eq1param(case: QCase) -> BiRationalFunction:
    st = eq1param(case)
    return evaluate(st.rhs, st.prefactor)


# ---------------------------------------------------------------------------
# Bailey transformation, terminating instances


def bailey_rhs_product_spec(case: QCase) -> Prefactor:
    """(q^{2r+2d}; q^{2d})_K / (q^{2d-2n}; q^{2d})_K as a binomial product."""
    n, d, r, K = case.n, case.d, case.r, case.K
    bins = [(2 * r + 2 * d + 2 * d * j, 1) for j in range(K)]
    bins += [(2 * d - 2 * n + 2 * d * j, -1) for j in range(K)]
    return Prefactor(binomials=tuple(bins))


def bailey_rhs_product(case: QCase) -> RationalFunction:
    return evaluate_prefactor(bailey_rhs_product_spec(case))


def bailey_display_sum(case: QCase, family: int) -> SumExpr:
    """The terminating sum multiplying the product after specializing a = q^{2n}."""
    n, d, r = case.n, case.d, case.r
    base = 2 * d
    pochs = [Poch(2 * r + 2 * n, base), Poch(2 * r - 2 * n, base)]
    if family == 1:
        pochs += [Poch(d, base), Poch(base, base, -1), Poch(d + r, base, -1), Poch(base + r, base, -1)]
    else:
        pochs += [Poch(r, base), Poch(base, base, -1), Poch(base + r, base, -1), Poch(2 * r, base, -1)]
    return SumExpr(case.K, tuple(pochs), (0, 2 * (d - r), 0))


@dataclass(frozen=True)
class BaileyParams:
    """Exponents of alpha, a, b, lambda (all powers of q) after ``q -> q^step``."""

    step: int
    alpha: int
    a: int
    b: int
    lam: int

    def terminating_bound(self) -> int:
        two_s = 2 * self.step
        bounds = []
        for x in (two_s - self.a, two_s - self.b):
            if x <= 0 and x % two_s == 0:
                bounds.append(-x // two_s)
        if not bounds:
            raise ValueError("non-terminating Bailey instance")
        return min(bounds)


def bailey_params(case: QCase, sign: int, family: int) -> BaileyParams:
    n, d, r = case.n, case.d, case.r
    a, b = 2 * (d - r - n), 2 * (d - r + n)
    if sign < 0:
        a, b = b, a
    return BaileyParams(step=d, alpha=r, a=a, b=b, lam=d if family == 1 else r)


def bailey_lhs_expr(bp: BaileyParams) -> SumExpr:
    s, al, a, b, lam = bp.step, bp.alpha, bp.a, bp.b, bp.lam
    two_s = 2 * s
    pochs = (
        Poch(2 * al, two_s),
        Poch(two_s - a, two_s),
        Poch(two_s - b, two_s),
        Poch(s, s, sign=-1),
        Poch(al + s - lam, s),
        Poch(two_s, two_s, -1),
        Poch(2 * al + a, two_s, -1),
        Poch(2 * al + b, two_s, -1),
        Poch(al, s, -1),
        Poch(lam, s, -1, sign=-1),
    )
    return SumExpr(
        upper=bp.terminating_bound(),
        pochs=pochs,
        q_exp=(0, 2 * al + lam + a + b - 3 * s, s),
        alternating=True,
        lead=(two_s, al, al),
    )


def bailey_lhs(bp: BaileyParams) -> RationalFunction:
    return evaluate(bailey_lhs_expr(bp))


def _infinite_ratio(nums: list[int], dens: list[int], base: int) -> Prefactor:
    """prod (q^x; q^base)_inf / prod (q^y; q^base)_inf for a pairable terminating case.

    Factors are matched by exponent class modulo ``base``; each matched pair
    collapses to a finite Pochhammer in the numerator or the denominator.
    """
    from itertools import permutations

    for perm in permutations(dens):
        if all((x - y) % base == 0 for x, y in zip(nums, perm)):
            bins = []
            for x, y in zip(nums, perm):
                m = (y - x) // base
                if m >= 0:
                    bins += [(x + base * j, 1) for j in range(m)]
                else:
                    bins += [(y + base * j, -1) for j in range(-m)]
            if any(m == 0 for m, _ in bins):
                # both products vanish; another pairing gives the finite limit
                continue
            return Prefactor(binomials=tuple(bins))
    raise ValueError("infinite products do not pair into a finite nonzero ratio")


def bailey_rhs(bp: BaileyParams) -> RationalFunction:
    s, al, a, b, lam = bp.step, bp.alpha, bp.a, bp.b, bp.lam
    two_s = 2 * s
    pre = _infinite_ratio([2 * al + two_s, 2 * al + a + b - two_s], [2 * al + a, 2 * al + b], two_s)
    phi = SumExpr(
        upper=bp.terminating_bound(),
        pochs=(
            Poch(two_s - a, two_s),
            Poch(two_s - b, two_s),
            Poch(lam, two_s),
            Poch(s + lam, two_s),
            Poch(two_s, two_s, -1),
            Poch(s + al, two_s, -1),
            Poch(two_s + al, two_s, -1),
            Poch(2 * lam, two_s, -1),
        ),
        q_exp=(0, 2 * al + a + b - two_s, 0),
    )
    return evaluate(phi, pre)
