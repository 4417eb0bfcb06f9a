"""p-adic checks of the classical supercongruences.

Sums are computed exactly over the rationals and compared through the
p-adic valuation of the difference of the two sides, so a side with p in
some denominators (absorbed by an outer factor p) is handled without
special cases.  Morita's p-adic gamma function is evaluated modulo p^e from
a prefix product table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Union

from sympy import isprime

__all__ = [
    "PadicContext",
    "PInteger",
    "PadicVerdict",
    "vp",
    "mod_pe",
    "pochhammer_rational",
    "gamma_p",
    "a_p",
    "check_vanhamme",
    "check_swisher",
    "check_corollary",
    "check_padic",
    "PADIC_IDS",
]

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class PadicContext:
    p: int
    e: int = 3

    def __post_init__(self):
        if self.p < 3 or not isprime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.e < 1:
            raise ValueError("precision e must be positive")

    @property
    def modulus(self) -> int:
        return self.p**self.e


def vp(x: Rational, p: int) -> int | None:
    """p-adic valuation; None stands for +infinity (x == 0)."""
    x = Fraction(x)
    if x == 0:
        return None
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def mod_pe(x: Rational, ctx: PadicContext) -> int:
    """The residue of a p-integral rational in [0, p^e)."""
    x = Fraction(x)
    m = ctx.modulus
    if x.denominator % ctx.p == 0:
        raise ValueError(f"{x} is not {ctx.p}-integral")
    return x.numerator * pow(x.denominator, -1, m) % m


@dataclass(frozen=True)
class PInteger:
    """An element of Z_p known modulo p^e."""

    value: int
    ctx: PadicContext

    @classmethod
    def of(cls, x: Rational, ctx: PadicContext) -> "PInteger":
        return cls(mod_pe(x, ctx), ctx)

    def _lift(self, other) -> "PInteger":
        if isinstance(other, PInteger):
            if other.ctx != self.ctx:
                raise ValueError("mixing p-adic contexts")
            return other
        return PInteger.of(other, self.ctx)

    def __add__(self, other):
        o = self._lift(other)
        return PInteger((self.value + o.value) % self.ctx.modulus, self.ctx)

    def __sub__(self, other):
        o = self._lift(other)
        return PInteger((self.value - o.value) % self.ctx.modulus, self.ctx)

    def __mul__(self, other):
        o = self._lift(other)
        return PInteger(self.value * o.value % self.ctx.modulus, self.ctx)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return PInteger(-self.value % self.ctx.modulus, self.ctx)

    def inverse(self) -> "PInteger":
        if self.value % self.ctx.p == 0:
            raise ZeroDivisionError("not a p-adic unit")
        return PInteger(pow(self.value, -1, self.ctx.modulus), self.ctx)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PInteger.of(other, self.ctx)
        if not isinstance(other, PInteger):
            return NotImplemented
        return self.ctx == other.ctx and self.value == other.value

    def __hash__(self):
        return hash((self.value, self.ctx))

    def valuation(self) -> int | None:
        """Valuation capped by the precision (None when zero mod p^e)."""
        if self.value == 0:
            return None
        return vp(self.value, self.ctx.p)


def pochhammer_rational(x: Rational, k: int) -> Fraction:
    """(x)_k = x (x+1) ... (x+k-1)."""
    out = Fraction(1)
    x = Fraction(x)
    for j in range(k):
        out *= x + j
    return out


# ---------------------------------------------------------------------------
# p-adic gamma


@lru_cache(maxsize=16)
def _gamma_table(p: int, e: int) -> list[int]:
    """table[m] = Gamma_p(m) mod p^e for 0 <= m < p^e."""
    mod = p**e
    table = [0] * mod
    acc = 1
    table[0] = 1
    for m in range(1, mod):
        # Gamma_p(m) = (-1)^m prod_{0<k<m, p not | k} k
        table[m] = acc if m % 2 == 0 else (-acc) % mod
        if m % p:
            acc = acc * m % mod
    return table


_TABLE_LIMIT = 1 << 21


def gamma_p(x: Rational, ctx: PadicContext) -> int:
    """Gamma_p(x) modulo p^e for p-integral x.

    Gamma_p is 1-Lipschitz, so Gamma_p(x) == Gamma_p(m) mod p^e for the
    integer representative m of x modulo p^e.
    """
    m = mod_pe(x, ctx)
    mod = ctx.modulus
    if mod <= _TABLE_LIMIT:
        return _gamma_table(ctx.p, ctx.e)[m]
    acc = 1
    for k in range(1, m):
        if k % ctx.p:
            acc = acc * k % mod
    return acc if m % 2 == 0 else (-acc) % mod


def a_p(x: Rational, p: int) -> int:
    """The representative of x modulo p in {1, ..., p}."""
    x = Fraction(x)
    if x.denominator % p == 0:
        raise ValueError(f"{x} is not {p}-integral")
    r = x.numerator * pow(x.denominator, -1, p) % p
    return r if r else p


# ---------------------------------------------------------------------------
# statements


@dataclass
class PadicVerdict:
    id: str
    p: int
    e: int
    status: str  # "held", "failed" or "inapplicable"
    valuation: int | None = None  # of lhs - rhs; None when the difference is zero
    reason: str = ""
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.status == "held"

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "p": self.p,
            "e": self.e,
            "status": self.status,
            "valuation": self.valuation,
            "reason": self.reason,
            "details": self.details,
        }


def _hyper_sum(upper: int, term: Callable[[int], Fraction], p: int, floor: int = 0) -> Fraction:
    """sum_{k <= upper} term(k), asserting v_p(term) >= floor for every term."""
    total = Fraction(0)
    for k in range(upper + 1):
        t = term(k)
        v = vp(t, p)
        if v is not None and v < floor:
            raise AssertionError(f"term k = {k} has p-adic valuation {v} < {floor} (p = {p})")
        total += t
    return total


def _ratio(k: int, top: list, bottom: list, sign: int = 1, lead: Fraction | None = None) -> Fraction:
    """sign^k * lead * prod (x)_k / prod (y)_k with k! spelled as (1)_k."""
    out = Fraction(sign**k) * (lead if lead is not None else 1)
    for x in top:
        out *= pochhammer_rational(x, k)
    for y in bottom:
        out /= pochhammer_rational(y, k)
    return out


def _compare(sid: str, ctx: PadicContext, e: int, lhs: Fraction, rhs: Rational, details=None) -> PadicVerdict:
    diff = Fraction(lhs) - Fraction(rhs)
    v = vp(diff, ctx.p)
    ok = v is None or v >= e
    info = {"lhs_p_integral": vp(lhs, ctx.p) is None or vp(lhs, ctx.p) >= 0}
    if details:
        info.update(details)
    if not ok:
        # the witness: lhs - rhs reduced modulo p^e (nonzero since v < e)
        info["residue"] = mod_pe(diff, PadicContext(ctx.p, e)) if v >= 0 else str(diff)
    return PadicVerdict(sid, ctx.p, e, "held" if ok else "failed", v, details=info)


def _inapplicable(sid: str, ctx: PadicContext, e: int, reason: str) -> PadicVerdict:
    return PadicVerdict(sid, ctx.p, e, "inapplicable", reason=reason)


def _gamma_rhs(num: Rational, gammas: list[Fraction], ctx: PadicContext, e: int) -> int:
    """num / prod Gamma_p(x) as an integer representative modulo p^e."""
    sub = PadicContext(ctx.p, e)
    den = 1
    for x in gammas:
        den = den * gamma_p(x, sub) % sub.modulus
    return mod_pe(num, sub) * pow(den, -1, sub.modulus) % sub.modulus


_THIRD, _HALF, _QUARTER = Fraction(1, 3), Fraction(1, 2), Fraction(1, 4)


def check_vanhamme(sid: str, ctx: PadicContext) -> PadicVerdict:
    """B2, E2 or F2 modulo p^3."""
    p, e = ctx.p, 3
    if sid == "B2":
        lhs = _hyper_sum((p - 1) // 2, lambda k: _ratio(k, [_HALF] * 3, [1] * 3, -1, Fraction(4 * k + 1)), p)
        rhs = _gamma_rhs(-p, [_HALF, _HALF], ctx, e)
        return _compare(sid, ctx, e, lhs, rhs)
    if sid == "E2":
        if p % 6 != 1:
            return _inapplicable(sid, ctx, e, "requires p = 1 mod 6")
        lhs = _hyper_sum((p - 1) // 3, lambda k: _ratio(k, [_THIRD] * 3, [1] * 3, -1, Fraction(6 * k + 1)), p)
        return _compare(sid, ctx, e, lhs, p)
    if sid == "F2":
        if p < 5:
            return _inapplicable(sid, ctx, e, "requires p >= 5 for a = 1/4")
        if p % 4 != 1:
            return _inapplicable(sid, ctx, e, "upper limit (p-1)/4 is an integer only for p = 1 mod 4")
        lhs = _hyper_sum((p - 1) // 4, lambda k: _ratio(k, [_QUARTER] * 3, [1] * 3, -1, Fraction(8 * k + 1)), p)
        rhs = _gamma_rhs(-p, [_QUARTER, 1 - _QUARTER], ctx, e)
        return _compare(sid, ctx, e, lhs, rhs)
    raise ValueError(f"unknown statement {sid!r}")


def check_swisher(a: Fraction, ctx: PadicContext) -> PadicVerdict:
    """The unified form for a in {1/2, 1/3, 1/4}; both right-hand sides are checked."""
    a = Fraction(a)
    if a not in (_HALF, _THIRD, _QUARTER):
        raise ValueError("a must be 1/2, 1/3 or 1/4")
    m = a.denominator
    p, e = ctx.p, 3
    sid = f"SW-1/{m}"
    if m == 4 and p < 5:
        return _inapplicable(sid, ctx, e, "requires p >= 5 for a = 1/4")
    if p % m == 1 % m:
        b = 1
    elif p % m == m - 1:
        b = m - 1
    else:
        return _inapplicable(sid, ctx, e, f"requires p = +-1 mod {m}")
    upper = a * (b * p - 1)
    assert upper.denominator == 1
    upper = int(upper)
    lhs = _hyper_sum(upper, lambda k: _ratio(k, [a] * 3, [1] * 3, -1, 2 * k / a + 1), p)
    sign_form = (-1) ** upper * p * b
    gamma_form = _gamma_rhs(-p * b, [a, 1 - a], ctx, e)
    v1 = _compare(sid, ctx, e, lhs, sign_form)
    v2 = _compare(sid, ctx, e, lhs, gamma_form)
    ok = v1.holds and v2.holds
    extra = {} if ok else {"residue": (v2 if v1.holds else v1).details["residue"]}
    return PadicVerdict(
        sid, p, e, "held" if ok else "failed",
        v1.valuation,
        details={
            "b": b,
            "sign_form": v1.status,
            "gamma_form": v2.status,
            "gamma_valuation": v2.valuation,
            "lhs_p_integral": v1.details["lhs_p_integral"],
            **extra,
        },
    )


def _eq7(d: int, ctx: PadicContext) -> PadicVerdict:
    p, e = ctx.p, 3
    sid = f"EQ7-{d}"
    if d < 2 or d % 2:
        raise ValueError("d must be a positive even integer")
    if p % d != 1:
        return _inapplicable(sid, ctx, e, f"requires p = 1 mod {d}")
    x = Fraction(1, d)
    upper = (p - 1) // d
    lhs = _hyper_sum(upper, lambda k: _ratio(k, [x] * 3, [1] * 3, -1, Fraction(2 * d * k + 1)), p)
    return _compare(sid, ctx, e, lhs, (-1) ** upper * p)


F = Fraction


def _corollaries() -> dict:
    """id -> (residue condition (m, r) meaning p = r mod m, e, builder(p) -> (lhs, rhs))."""

    def cor3_1(p):
        u = (p + 1) // 3
        lhs = _hyper_sum(u, lambda k: _ratio(k, [F(-1, 3)] * 3, [1] * 3, -1), p)
        s = _hyper_sum(u, lambda k: _ratio(k, [F(-1, 3)] * 2 + [_HALF], [1, F(1, 3), F(5, 6)]), p, -1)
        return lhs, -((-1) ** u) * p * s

    def cor3_2(p):
        u = (p - 1) // 3
        lhs = _hyper_sum(u, lambda k: _ratio(k, [_THIRD] * 3, [1] * 3, -1), p)
        s = _hyper_sum(u, lambda k: _ratio(k, [_THIRD] * 2 + [_HALF], [1, F(2, 3), F(7, 6)]), p, -1)
        return lhs, (-1) ** u * p * s

    def cor3_3(p):
        u = (p + 1) // 3
        lhs = _hyper_sum(u, lambda k: _ratio(k, [F(-1, 3)] * 3, [1] * 3, 1, F(6 * k - 1)), p)
        s = _hyper_sum(u, lambda k: _ratio(k, [F(-1, 3)] * 2, [1, F(1, 3)]), p, -1)
        return lhs, p * s

    def cor3_4(p):
        u = (p - 1) // 3
        lhs = _hyper_sum(u, lambda k: _ratio(k, [_THIRD] * 3, [1] * 3, 1, F(6 * k + 1)), p)
        s = _hyper_sum(u, lambda k: _ratio(k, [_THIRD] * 2, [1, F(2, 3)]), p, -1)
        return lhs, p * s

    def cor4_1(p):
        u = (p + 1) // 4
        lhs = _hyper_sum(u, lambda k: _ratio(k, [F(-1, 4)] * 3, [1] * 3, -1), p)
        s = _hyper_sum(u, lambda k: _ratio(k, [F(-1, 4)] * 2 + [_HALF], [1, F(3, 8), F(7, 8)]), p, -1)
        return lhs, -((-1) ** u) * p * s

    def cor4_2(p):
        u = (p - 1) // 4
        lhs = _hyper_sum(u, lambda k: _ratio(k, [_QUARTER] * 3, [1] * 3, -1), p)
        s = _hyper_sum(u, lambda k: _ratio(k, [_QUARTER] * 2 + [_HALF], [1, F(5, 8), F(9, 8)]), p, -1)
        return lhs, (-1) ** u * p * s

    def cor4_3(p):
        u = (p + 1) // 4
        lhs = _hyper_sum(u, lambda k: _ratio(k, [F(-1, 4)] * 3, [1] * 3, -1, F(8 * k - 1)), p)
        return lhs, (-1) ** u * p

    def cor4_4(p):
        u = (p - 1) // 4
        lhs = _hyper_sum(u, lambda k: _ratio(k, [_QUARTER] * 3, [1] * 3, -1, F(8 * k + 1)), p)
        return lhs, (-1) ** u * p

    def he(p):
        u = (p - 1) // 2
        lhs = _hyper_sum(u, lambda k: _ratio(k, [_HALF] * 3, [1] * 3, -1), p)
        s = _hyper_sum(u, lambda k: _ratio(k, [_HALF] * 3, [1, F(3, 4), F(5, 4)]), p, -1)
        return lhs, (-1) ** u * p * s

    return {
        "COR3-1": ((3, 2), 2, cor3_1),
        "COR3-2": ((3, 1), 2, cor3_2),
        "COR3-3": ((3, 2), 3, cor3_3),
        "COR3-4": ((3, 1), 3, cor3_4),
        "COR4-1": ((4, 3), 2, cor4_1),
        "COR4-2": ((4, 1), 2, cor4_2),
        "COR4-3": ((4, 3), 3, cor4_3),
        "COR4-4": ((4, 1), 3, cor4_4),
        "HE": ((2, 1), 2, he),
    }


_COROLLARIES = _corollaries()


def check_corollary(sid: str, ctx: PadicContext) -> PadicVerdict:
    """One of the q -> +-1 consequences (COR3-*, COR4-*, HE) or EQ7-d."""
    if sid.startswith("EQ7-"):
        return _eq7(int(sid[4:]), ctx)
    if sid not in _COROLLARIES:
        raise ValueError(f"unknown statement {sid!r}")
    (m, r), e, build = _COROLLARIES[sid]
    if ctx.p % m != r:
        return _inapplicable(sid, ctx, e, f"requires p = {r} mod {m}")
    lhs, rhs = build(ctx.p)
    return _compare(sid, ctx, e, lhs, rhs)


PADIC_IDS = ("B2", "E2", "F2", "SW-1/2", "SW-1/3", "SW-1/4", *_COROLLARIES)


def check_padic(sid: str, ctx: PadicContext) -> PadicVerdict:
    """Dispatch on a statement id (EQ7-d accepted for even d)."""
    if sid in ("B2", "E2", "F2"):
        return check_vanhamme(sid, ctx)
    if sid.startswith("SW-1/"):
        return check_swisher(Fraction(1, int(sid[5:])), ctx)
    return check_corollary(sid, ctx)
