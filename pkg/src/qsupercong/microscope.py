"""Independent checks of the intermediate steps behind the q-congruences.

Each check re-derives one step on its own terms: a terminating Bailey
instance (both sides of the transformation, plus the specialized sums),
the reflection congruence for ratios of q-Pochhammers, the cancellation
of paired summands, and the one-parameter congruences.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .congruence import CongruenceVerdict, check_bicongruent
from .cyclotomic import cyclotomic, cyclotomic_neg, theorem_modulus
from .exact import ONE, BiPoly, LaurentPoly
from .qseries import (
    QCase,
    SumExpr,
    bailey_display_sum,
    bailey_lhs,
    bailey_params,
    bailey_rhs,
    bailey_rhs_product,
    closed_prefactor,
    eq1param,
    evaluate,
    evaluate_parts,
    lemma22,
    q_pochhammer,
)

__all__ = [
    "MicroscopeReport",
    "verify_bailey_instance",
    "verify_lemma21",
    "verify_term_pairing",
    "verify_parametric",
    "verify_modulus_chain",
    "parametric_modulus",
]


@dataclass
class MicroscopeReport:
    name: str
    params: dict
    holds: bool
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"name": self.name, "params": self.params, "holds": self.holds, "details": self.details}


def _family_stmt(case: QCase, family: int):
    if family not in (1, 2):
        raise ValueError("family must be 1 or 2")
    return lemma22(case) if family == 1 else eq1param(case)


def verify_bailey_instance(case: QCase, sign: int, family: int) -> MicroscopeReport:
    """The parametric left side at a = q^{2n*sign} against the terminating Bailey evaluation.

    Four quantities must coincide: the specialized left side, the product
    times the terminating sum, and both sides of the generic
    transformation at the matching parameters.  The product is also
    compared with its closed form.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    stmt = _family_stmt(case, family)
    t = 2 * case.n * sign
    direct = evaluate(stmt.lhs.specialize(t))
    product = bailey_rhs_product(case)
    display = product * evaluate(bailey_display_sum(case, family))
    bp = bailey_params(case, sign, family)
    gen_lhs = bailey_lhs(bp)
    gen_rhs = bailey_rhs(bp)
    closed = closed_prefactor(case)
    checks = {
        "lhs_equals_display": direct == display,
        "generic_lhs_equals_lhs": gen_lhs == direct,
        "generic_rhs_equals_display": gen_rhs == display,
        "product_closed_form": product == closed,
    }
    return MicroscopeReport(
        name=f"bailey{'+' if sign > 0 else '-'}",
        params={**case.as_dict(), "family": family, "sign": sign},
        holds=all(checks.values()),
        details=checks,
    )


def _lemma21_exponent(n: int, d: int, r: int, k: int) -> int:
    num = (n - r) * (n - d + r)
    if num % (2 * d):
        raise AssertionError(f"non-integral exponent {num}/{2 * d}")
    return num // (2 * d) + k * (d - r)


def _bi_side(num: BiPoly, den: BiPoly, a_exp: int):
    """Place a^a_exp on the numerator or denominator side."""
    if a_exp >= 0:
        return num.shift_a(a_exp), den
    return num, den.shift_a(-a_exp)


def verify_lemma21(n: int, d: int, r: int, k: int) -> CongruenceVerdict:
    """The reflection congruence for (a q^r; q^d)_m / (q^d/a; q^d)_m modulo Phi_n(q).

    ``(q^d/a; q^d)_m`` is stored as ``a^-m * prod (a - q^(d + d*j))``, so each
    side is a polynomial quotient times a power of a.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    if not (n - d * n + d <= r <= n) or (n - r) % d:
        raise ValueError(f"(n, d, r) = ({n}, {d}, {r}) outside the lemma's range")
    K = (n - r) // d
    if not 0 <= k <= K:
        raise ValueError(f"k = {k} outside [0, {K}]")
    j = K - k
    # left: (a q^r; q^d)_j / (a^-j B_j)
    lnum, lden = _bi_side(q_pochhammer(r, d, j, a=1), q_pochhammer(d, d, j, a=-1), j)
    # right: (-a)^(K-2k) * (a q^r; q^d)_k / (a^-k B_k) * q^E
    e = _lemma21_exponent(n, d, r, k)
    rnum = q_pochhammer(r, d, k, a=1).shift_q(e)
    if (K - 2 * k) % 2:
        rnum = -rnum
    rnum, rden = _bi_side(rnum, q_pochhammer(d, d, k, a=-1), K - 2 * k + k)
    shift = min(lnum.a_low, rnum.a_low, lden.a_low, rden.a_low)
    if shift:
        lnum, rnum = lnum.shift_a(-shift), rnum.shift_a(-shift)
    return check_bicongruent((lnum, lden), (rnum, rden), [BiPoly.from_laurent(cyclotomic(n))])


def _reflected_by_lemma(case: QCase, family: int, lhs: SumExpr) -> SumExpr:
    """Summand K-k rewritten through the reflection congruence (base q^2) as a term in k."""
    n, d, r, K = case.n, case.d, case.r, case.K
    c = 2 if family == 1 else 1
    c_lemma = 6 if family == 1 else 4
    half = K * (n - d + r)
    if half % 2:
        raise AssertionError("non-integral reflection exponent")
    const = c_lemma * (half // 2) + d * K * K + c * (d - r) * K
    linear = c_lemma * (d - r) - 2 * d * K - c * (d - r)
    # (-1)^(K-k) times (-1)^K per unparametrized ratio
    sign = 1 if family == 1 else (-1 if K % 2 else 1)
    return replace(
        lhs,
        q_exp=(const, linear, d),
        lead=(-2 * d, 2 * d * K + r, r),
        sign=sign,
        alternating=True,
    )


def _closed_reflection(case: QCase, lhs: SumExpr) -> SumExpr:
    """Summand K-k in the known closed form for the quadratic family."""
    n, d, r, K = case.n, case.d, case.r, case.K
    return replace(
        lhs,
        q_exp=(3 * n * K - n, d - r, d),
        sign=-1 if K % 2 else 1,
        alternating=True,
    )


def _parts(expr: SumExpr, lo: int, hi: int | None = None, prefactor=None):
    # unreduced: every denominator factor is a unit modulo Phi_n(-q) here,
    # and the congruence check cancels any shared modulus factor itself
    num, den, _ = evaluate_parts(expr, lo, hi, prefactor, bivariate=True)
    return num, den


def verify_term_pairing(case: QCase, family: int) -> MicroscopeReport:
    """Summands k and K-k of the parametric left side cancel modulo Phi_n(-q)."""
    stmt = _family_stmt(case, family)
    K = case.K
    phi = [BiPoly.from_laurent(cyclotomic_neg(case.n))]
    terms = [_parts(stmt.lhs, k, k) for k in range(K + 1)]
    via_lemma = _reflected_by_lemma(case, family, stmt.lhs)
    shown = _closed_reflection(case, stmt.lhs) if family == 2 else None
    zero = (BiPoly(), BiPoly.from_laurent(ONE))

    def congruent(x, y) -> bool:
        return check_bicongruent(x, y, phi, multiplicities=False).holds

    failures = []
    for k in range(K + 1):
        num, den = terms[K - k]
        if not congruent(terms[k], (-num, den)):
            failures.append(("pair", k))
        if not congruent(terms[K - k], _parts(via_lemma, k, k)):
            failures.append(("lemma", k))
        if shown is not None and not congruent(terms[K - k], _parts(shown, k, k)):
            failures.append(("display", k))
    lhs_zero = congruent(_parts(stmt.lhs, 0), zero)
    rhs_zero = congruent(_parts(stmt.rhs, 0, None, stmt.prefactor), zero)
    return MicroscopeReport(
        name="pairing",
        params={**case.as_dict(), "family": family},
        holds=not failures and lhs_zero and rhs_zero,
        details={"failures": failures, "lhs_vanishes": lhs_zero, "rhs_vanishes": rhs_zero},
    )


def parametric_modulus(n: int) -> list[BiPoly]:
    """Phi_n(-q), 1 - a q^{2n} and a - q^{2n}."""
    q2n = LaurentPoly.monomial(2 * n)
    return [
        BiPoly.from_laurent(cyclotomic_neg(n)),
        BiPoly.a_linear(ONE, -q2n),
        BiPoly.a_linear(-q2n, ONE),
    ]


def verify_parametric(case: QCase, family: int, multiplicities: bool = False) -> CongruenceVerdict:
    stmt = _family_stmt(case, family)
    lhs = evaluate(stmt.lhs)
    rhs = evaluate(stmt.rhs, stmt.prefactor)
    return check_bicongruent(lhs, rhs, parametric_modulus(case.n), multiplicities)


def verify_modulus_chain(n: int) -> bool:
    """Phi_n(-q) * Phi_n(q^2)^2 equals the theorem modulus for odd n >= 3."""
    lhs = cyclotomic_neg(n) * cyclotomic(n).q_power(2) ** 2
    return lhs == theorem_modulus(n).expanded
