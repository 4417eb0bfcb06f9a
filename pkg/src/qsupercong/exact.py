"""Exact Laurent polynomials and rational functions over the rationals.

Univariate objects live in ``Q[q, 1/q]``; bivariate ones in ``Q[q, 1/q][a]``.
Coefficients are Python ``int`` whenever integral and ``Fraction`` otherwise.

Storage is dense: a Laurent polynomial keeps its lowest exponent plus a
coefficient vector with nonzero ends. Products of q-Pochhammer symbols fill
most of their support, and list-level kernels (slicing, comprehensions,
big-integer Kronecker packing) beat dictionary updates by an order of magnitude.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import accumulate
from math import gcd, lcm
from typing import Iterable, Mapping, Union

Scalar = Union[int, Fraction]

__all__ = [
    "LaurentPoly",
    "ZERO",
    "ONE",
    "Q",
    "RationalFunction",
    "BiPoly",
    "BiRationalFunction",
    "Subst",
    "ZeroDivisorError",
    "poly_divrem",
    "poly_gcd",
    "bipoly_divexact",
    "bipoly_gcd",
    "substitute",
]


class ZeroDivisorError(ZeroDivisionError):
    """Division by the zero polynomial."""


def _norm_scalar(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _trim(coeffs: list, low: int) -> tuple[int, tuple]:
    hi = len(coeffs)
    while hi and not coeffs[hi - 1]:
        hi -= 1
    lo = 0
    while lo < hi and not coeffs[lo]:
        lo += 1
    if lo == hi:
        return 0, ()
    return low + lo, tuple(coeffs[lo:hi])


# ---------------------------------------------------------------------------
# dense kernels on ascending coefficient lists


def _all_int(coeffs) -> bool:
    return all(type(c) is int for c in coeffs)


def _scaled_ints(coeffs) -> tuple[list[int], int]:
    """Return integer coefficients and the common denominator they were scaled by."""
    den = 1
    for c in coeffs:
        if type(c) is not int:
            den = lcm(den, c.denominator)
    if den == 1:
        return [c if type(c) is int else int(c) for c in coeffs], 1
    return [int(c * den) for c in coeffs], den


def _pack(coeffs: list[int], nbytes: int) -> int:
    pos = b"".join((c if c > 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(nbytes, "little") for c in coeffs)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _unpack(value: int, nbytes: int, count: int) -> list[int]:
    half = 1 << (8 * nbytes - 1)
    bias = int.from_bytes((b"\x00" * (nbytes - 1) + b"\x80") * count, "little")
    raw = (value + bias).to_bytes(nbytes * count, "little")
    return [
        int.from_bytes(raw[i : i + nbytes], "little") - half
        for i in range(0, nbytes * count, nbytes)
    ]


def _kronecker_mul(a: list[int], b: list[int]) -> list[int]:
    bits = (
        max(abs(c) for c in a).bit_length()
        + max(abs(c) for c in b).bit_length()
        + min(len(a), len(b)).bit_length()
        + 2
    )
    nbytes = bits // 8 + 1
    count = len(a) + len(b) - 1
    return _unpack(_pack(a, nbytes) * _pack(b, nbytes), nbytes, count)


def _school_mul(a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    la = len(a)
    out = [0] * (la + len(b) - 1)
    for j, bj in enumerate(b):
        if bj:
            out[j : j + la] = [u + bj * v for u, v in zip(out[j : j + la], a)]
    return out


def _dense_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    nz_small = min(sum(1 for c in a if c), sum(1 for c in b if c))
    if nz_small <= 24 or len(a) * len(b) < 4096:
        out = _school_mul(a, b)
        if _all_int(a) and _all_int(b):
            return out
        return [_norm_scalar(c) for c in out]
    ia, da = _scaled_ints(a)
    ib, db = _scaled_ints(b)
    out = _kronecker_mul(ia, ib)
    if da * db != 1:
        d = da * db
        out = [_norm_scalar(Fraction(c, d)) for c in out]
    return out


def _dense_divrem(a: list, b: list) -> tuple[list, list]:
    """Long division of ascending coefficient lists; ``b[-1]`` must be nonzero."""
    lb = len(b)
    if len(a) < lb:
        return [], list(a)
    a = list(a)
    lc = b[-1]
    nz = [(j, c) for j, c in enumerate(b[:-1]) if c]
    quo = [0] * (len(a) - lb + 1)
    for i in range(len(a) - lb, -1, -1):
        c = a[i + lb - 1]
        if not c:
            continue
        if lc == 1:
            pass
        elif lc == -1:
            c = -c
        else:
            c = _norm_scalar(Fraction(c) / lc)
        quo[i] = c
        for j, bj in nz:
            a[i + j] -= c * bj
        a[i + lb - 1] = 0
    return quo, a[: lb - 1]


def _modp_trim(v: list[int]) -> list[int]:
    while v and not v[-1]:
        v.pop()
    return v


def _modp_monic(v: list[int], p: int) -> list[int]:
    inv = pow(v[-1], -1, p)
    return [c * inv % p for c in v]


def _modp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a = _modp_trim([c % p for c in a])
    b = _modp_trim([c % p for c in b])
    while b:
        b = _modp_monic(b, p)
        lb = len(b)
        nz = [(j, c) for j, c in enumerate(b[:-1]) if c]
        for i in range(len(a) - lb, -1, -1):
            c = a[i + lb - 1]
            if c:
                for j, bj in nz:
                    a[i + j] = (a[i + j] - c * bj) % p
                a[i + lb - 1] = 0
        a, b = b, _modp_trim(a[: lb - 1])
    return _modp_monic(a, p) if a else a


# primes just below 2**62, used by the modular gcd
_GCD_PRIMES = (
    4611686018427387847,
    4611686018427387817,
    4611686018427387787,
    4611686018427387733,
    4611686018427387709,
    4611686018427387701,
    4611686018427387631,
    4611686018427387617,
)


def _next_gcd_prime():
    yield from _GCD_PRIMES
    from sympy import prevprime

    p = _GCD_PRIMES[-1]
    while True:
        p = prevprime(p)
        yield p


def _int_content(v: Iterable[int]) -> int:
    return reduce(gcd, v, 0)


def _primitive_int(v: list[int]) -> list[int]:
    c = _int_content(v)
    if v[-1] < 0:
        c = -c
    return [x // c for x in v]


def _int_gcd_dense(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd (positive leading coefficient) of two nonzero primitive integer polys."""
    if len(a) == 1 or len(b) == 1:
        return [1]
    lc_g = gcd(a[-1], b[-1])
    best_deg = min(len(a), len(b))
    acc, modulus = None, 1
    for p in _next_gcd_prime():
        if a[-1] % p == 0 or b[-1] % p == 0:
            continue
        h = _modp_gcd(a, b, p)
        if len(h) == 1:
            return [1]
        if len(h) > best_deg:
            continue
        h = [c * lc_g % p for c in h]
        if len(h) < best_deg or acc is None:
            best_deg, acc, modulus = len(h), h, p
        else:
            inv = pow(modulus, -1, p)
            acc = [
                x + modulus * ((y - x) * inv % p) for x, y in zip(acc, h)
            ]
            modulus *= p
        half = modulus // 2
        cand = _primitive_int([c - modulus if c > half else c for c in acc])
        if not any(_dense_divrem(a, cand)[1]) and not any(_dense_divrem(b, cand)[1]):
            return cand
    raise AssertionError("unreachable")  # pragma: no cover


# ---------------------------------------------------------------------------


class LaurentPoly:
    """Immutable element of ``Q[q, 1/q]``.

    ``coeffs[i]`` is the coefficient of ``q**(low + i)``; both ends are nonzero.
    The zero polynomial has ``coeffs == ()``.
    """

    __slots__ = ("low", "coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Scalar] = (), low: int = 0):
        norm = []
        for c in coeffs:
            if isinstance(c, Fraction):
                c = _norm_scalar(c)
            elif not isinstance(c, int):
                c = _norm_scalar(Fraction(c))
            norm.append(c)
        self.low, self.coeffs = _trim(norm, low)
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: list, low: int) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj.low, obj.coeffs = _trim(coeffs, low)
        obj._hash = None
        return obj

    @classmethod
    def from_dict(cls, terms: Mapping[int, Scalar]) -> "LaurentPoly":
        terms = {e: c for e, c in terms.items() if c}
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        dense = [0] * (hi - lo + 1)
        for e, c in terms.items():
            dense[e - lo] = c
        return cls(dense, lo)

    @classmethod
    def monomial(cls, exp: int, coeff: Scalar = 1) -> "LaurentPoly":
        return cls([coeff], exp)

    @classmethod
    def constant(cls, c: Scalar) -> "LaurentPoly":
        return cls([c], 0)

    @classmethod
    def binomial(cls, m: int, eps: int = 1) -> "LaurentPoly":
        """The factor ``1 - eps*q**m``."""
        return cls.from_dict({0: 1}) - cls.monomial(m, eps)

    # --- views -----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def high(self) -> int:
        return self.low + len(self.coeffs) - 1

    @property
    def degree(self) -> int:
        """Degree in the ordinary-polynomial view (``high - low``); -1 for zero."""
        return len(self.coeffs) - 1

    def terms(self) -> dict[int, Scalar]:
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c}

    def coeff(self, exp: int) -> Scalar:
        i = exp - self.low
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    @property
    def leading_coefficient(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else 0

    def is_constant(self) -> bool:
        return not self.coeffs or (len(self.coeffs) == 1 and self.low == 0)

    def is_unit(self) -> bool:
        """True for nonzero monomials, the units of the Laurent ring."""
        return len(self.coeffs) == 1

    def ordinary(self) -> "LaurentPoly":
        """Divide out the lowest power of q."""
        return LaurentPoly._raw(list(self.coeffs), 0)

    # --- arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "LaurentPoly | None":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.coeffs:
            return self
        if not self.coeffs:
            return other
        lo = min(self.low, other.low)
        hi = max(self.high, other.high)
        out = [0] * (hi - lo + 1)
        s = self.low - lo
        out[s : s + len(self.coeffs)] = self.coeffs
        o = other.low - lo
        out[o : o + len(other.coeffs)] = [
            u + v for u, v in zip(out[o : o + len(other.coeffs)], other.coeffs)
        ]
        return LaurentPoly._raw(out, lo)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw([-c for c in self.coeffs], self.low)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if type(other) is int:
            if not other:
                return LaurentPoly()
            if other == 1:
                return self
            if other == -1:
                return -self
            # int times int stays int; int times Fraction is never integral-lost
            return LaurentPoly._raw([_norm_scalar(c * other) if type(c) is not int else c * other for c in self.coeffs], self.low)
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPoly()
            return LaurentPoly._raw(
                [_norm_scalar(c * other) for c in self.coeffs], self.low
            )
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return LaurentPoly()
        return LaurentPoly._raw(
            _dense_mul(list(self.coeffs), list(other.coeffs)), self.low + other.low
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_unit():
                raise ValueError("negative power of a non-unit")
            c = self.coeffs[0]
            return LaurentPoly.monomial(self.low * k, _norm_scalar(Fraction(1) / c**-k))
        out = LaurentPoly.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``q**k``."""
        if not self.coeffs:
            return self
        return LaurentPoly._raw(list(self.coeffs), self.low + k)

    def scale(self, c: Scalar) -> "LaurentPoly":
        return self * c

    def mul_binomial(self, m: int, eps: int = 1) -> "LaurentPoly":
        """Multiply by ``1 - eps*q**m`` in linear time."""
        if not self.coeffs:
            return self
        if m == 0:
            return self * (1 - eps)
        a = list(self.coeffs)
        if m > 0:
            out = a + [0] * m
            out[m:] = [u - eps * v for u, v in zip(out[m:], a)]
            return LaurentPoly._raw(out, self.low)
        k = -m
        out = [0] * k + a
        out[: len(a)] = [u - eps * v for u, v in zip(out[: len(a)], a)]
        return LaurentPoly._raw(out, self.low + m)

    def div_binomial(self, m: int, eps: int = 1) -> "LaurentPoly":
        """Exact division by ``1 - eps*q**m``; raises ``ValueError`` if inexact."""
        if m == 0:
            if eps == 1:
                raise ZeroDivisorError("division by 1 - q**0")
            return self * Fraction(1, 2)
        if not self.coeffs:
            return self
        if m < 0:
            # 1 - eps q^m = -eps q^m (1 - eps q^-m)
            return self.div_binomial(-m, eps).shift(-m) * (-eps)
        a = self.coeffs
        n = len(a)
        if n <= m:
            raise ValueError("inexact binomial division")
        b = [0] * n
        for j in range(m):
            col = a[j::m]
            if eps == 1:
                b[j::m] = list(accumulate(col))
            else:
                alt = [c if t % 2 == 0 else -c for t, c in enumerate(col)]
                b[j::m] = [
                    c if t % 2 == 0 else -c for t, c in enumerate(accumulate(alt))
                ]
        if any(b[n - m :]):
            raise ValueError("inexact binomial division")
        return LaurentPoly._raw(b[: n - m], self.low)

    def fold(self, e: int) -> list:
        """Coefficients of the reduction modulo ``q**e - 1`` (index = exponent mod e)."""
        out = [0] * e
        start = self.low % e
        for i in range(e):
            col = self.coeffs[(i - start) % e :: e]
            if col:
                out[i] = sum(col)
        return out

    # --- comparison / misc -----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.low == other.low and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.low, self.coeffs))
        return self._hash

    def __call__(self, x: Scalar) -> Scalar:
        """Evaluate at a rational point (``q -> x``)."""
        if not self.coeffs:
            return 0
        if x == 0:
            if self.low < 0:
                raise ZeroDivisionError("q -> 0 with negative exponents present")
            return self.coeffs[0] if self.low == 0 else 0
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return _norm_scalar(Fraction(acc) * Fraction(x) ** self.low)

    def neg_q(self) -> "LaurentPoly":
        """The image under ``q -> -q``."""
        start = self.low
        return LaurentPoly._raw(
            [c if (start + i) % 2 == 0 else -c for i, c in enumerate(self.coeffs)],
            start,
        )

    def q_power(self, m: int) -> "LaurentPoly":
        """The image under ``q -> q**m`` (m nonzero)."""
        if m == 0:
            raise ValueError("q -> q**0 is not an allowed substitution")
        if not self.coeffs:
            return self
        if m == 1:
            return self
        if m < 0:
            return LaurentPoly.from_dict({e * m: c for e, c in self.terms().items()})
        out = [0] * ((len(self.coeffs) - 1) * m + 1)
        out[::m] = self.coeffs
        return LaurentPoly._raw(out, self.low * m)

    def integer_content(self) -> tuple[list[int], int, int]:
        """Return (integer coefficients, common denominator, integer content)."""
        ints, den = _scaled_ints(self.coeffs)
        return ints, den, _int_content(ints)

    def __repr__(self):
        return f"LaurentPoly({list(self.coeffs)!r}, low={self.low})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e in range(self.high, self.low - 1, -1):
            c = self.coeff(e)
            if not c:
                continue
            if e == 0:
                mono = str(c)
            else:
                var = "q" if e == 1 else f"q^{e}"
                mono = var if c == 1 else ("-" + var if c == -1 else f"{c}*{var}")
            parts.append(mono)
        return " + ".join(parts).replace("+ -", "- ")


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1)
Q = LaurentPoly.monomial(1)


def poly_divrem(dividend: LaurentPoly, divisor: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Divide in the ordinary-polynomial view.

    Lowest q-powers are factored out of both arguments first; the result
    satisfies ``dividend == divisor*quotient + remainder`` exactly and the
    remainder, with its own lowest power removed, has degree below
    ``divisor.degree``.
    """
    if divisor.is_zero:
        raise ZeroDivisorError("polynomial division by zero")
    if dividend.is_zero:
        return ZERO, ZERO
    quo, rem = _dense_divrem(list(dividend.coeffs), list(divisor.coeffs))
    return (
        LaurentPoly._raw(quo, dividend.low - divisor.low),
        LaurentPoly._raw(rem, dividend.low),
    )


def poly_gcd(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Monic gcd in the ordinary-polynomial view (q-power units removed)."""
    if f.is_zero and g.is_zero:
        raise ZeroDivisorError("gcd(0, 0) is undefined")
    if f.is_zero or g.is_zero:
        h = (g if f.is_zero else f).ordinary()
        return h * _norm_scalar(Fraction(1) / h.leading_coefficient)
    a = _primitive_int(_scaled_ints(f.coeffs)[0])
    b = _primitive_int(_scaled_ints(g.coeffs)[0])
    if len(a) < len(b):
        a, b = b, a
    h = _int_gcd_dense(a, b)
    lc = h[-1]
    return LaurentPoly([_norm_scalar(Fraction(c, lc)) for c in h])


def _canon_pair(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Move q-power units into the numerator and scale to coprime integers."""
    if num.is_zero:
        return ZERO, ONE
    s = den.low
    n_ints, n_den = _scaled_ints(num.coeffs)
    d_ints, d_den = _scaled_ints(den.coeffs)
    # num/den = (n_ints/n_den) / (d_ints/d_den)
    n_ints = [c * d_den for c in n_ints]
    d_ints = [c * n_den for c in d_ints]
    g = gcd(_int_content(n_ints), _int_content(d_ints))
    if d_ints[-1] < 0:
        g = -g
    return (
        LaurentPoly._raw([c // g for c in n_ints], num.low - s),
        LaurentPoly._raw([c // g for c in d_ints], 0),
    )


class RationalFunction:
    """A reduced quotient ``num/den`` of Laurent polynomials.

    Canonical form: ``den`` is an ordinary polynomial with nonzero constant
    term and positive leading coefficient, both parts have integer
    coefficients with no common integer factor, and ``gcd(num, den) == 1``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = LaurentPoly._coerce(num)
        den = ONE if den is None else LaurentPoly._coerce(den)
        if num is None or den is None:
            raise TypeError("RationalFunction expects Laurent polynomials or scalars")
        if den.is_zero:
            raise ZeroDivisorError("zero denominator")
        if not num.is_zero and not den.is_unit():
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = poly_divrem(num, g)[0]
                den = poly_divrem(den, g)[0]
        self.num, self.den = _canon_pair(num, den)

    @classmethod
    def from_reduced(cls, num: LaurentPoly, den: LaurentPoly) -> "RationalFunction":
        """Build from a pair already known to be coprime; only units are normalized."""
        if den.is_zero:
            raise ZeroDivisorError("zero denominator")
        obj = cls.__new__(cls)
        obj.num, obj.den = _canon_pair(num, den)
        return obj

    @staticmethod
    def _coerce(other) -> "RationalFunction | None":
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (LaurentPoly, int, Fraction)):
            return RationalFunction(other)
        return None

    def is_polynomial(self) -> bool:
        return self.den == ONE

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RationalFunction(self.num + other.num, self.den)
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction.from_reduced(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero:
            raise ZeroDivisorError("division by zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(1) / (self ** (-k))
        return RationalFunction.from_reduced(self.num**k, self.den**k)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, x: Scalar) -> Fraction:
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError("pole at evaluation point")
        return _norm_scalar(Fraction(self.num(x)) / d)

    def neg_q(self) -> "RationalFunction":
        return RationalFunction.from_reduced(self.num.neg_q(), self.den.neg_q())

    def q_power(self, m: int) -> "RationalFunction":
        return RationalFunction.from_reduced(self.num.q_power(m), self.den.q_power(m))

    def __repr__(self):
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num}) / ({self.den})"


# ---------------------------------------------------------------------------
# bivariate


class BiPoly:
    """Immutable element of ``Q[q, 1/q][a]``: a-exponent -> nonzero LaurentPoly."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[int, LaurentPoly] | None = None):
        clean = {}
        for i, c in (terms or {}).items():
            if i < 0:
                raise ValueError("negative power of a in BiPoly")
            c = LaurentPoly._coerce(c)
            if c:
                clean[i] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict) -> "BiPoly":
        obj = cls.__new__(cls)
        obj.terms = {i: c for i, c in terms.items() if c}
        obj._hash = None
        return obj

    @classmethod
    def from_laurent(cls, p: LaurentPoly | Scalar) -> "BiPoly":
        return cls({0: LaurentPoly._coerce(p)})

    @classmethod
    def a_linear(cls, const: LaurentPoly | Scalar, lin: LaurentPoly | Scalar) -> "BiPoly":
        """``const + lin*a``."""
        return cls({0: LaurentPoly._coerce(const), 1: LaurentPoly._coerce(lin)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def a_degree(self) -> int:
        return max(self.terms) if self.terms else -1

    @property
    def a_low(self) -> int:
        return min(self.terms) if self.terms else 0

    def coeff(self, i: int) -> LaurentPoly:
        return self.terms.get(i, ZERO)

    @property
    def q_low(self) -> int:
        return min(c.low for c in self.terms.values())

    @property
    def q_high(self) -> int:
        return max(c.high for c in self.terms.values())

    @staticmethod
    def _coerce(other) -> "BiPoly | None":
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, (LaurentPoly, int, Fraction)):
            return BiPoly.from_laurent(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for i, c in other.terms.items():
            out[i] = out[i] + c if i in out else c
        return BiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly._raw({i: -c for i, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, LaurentPoly)):
            return BiPoly._raw({i: c * other for i, c in self.terms.items()})
        if not isinstance(other, BiPoly):
            return NotImplemented
        if not self.terms or not other.terms:
            return BiPoly()
        if len(self.terms) == 1 or len(other.terms) == 1 or (
            len(self.terms) * len(other.terms) <= 16
        ):
            out: dict[int, LaurentPoly] = {}
            for i, c in self.terms.items():
                for j, d in other.terms.items():
                    t = c * d
                    out[i + j] = out[i + j] + t if i + j in out else t
            return BiPoly._raw(out)
        return self._kronecker_mul(other)

    __rmul__ = __mul__

    def _kronecker_mul(self, other: "BiPoly") -> "BiPoly":
        # a -> q**width packs both variables into one Laurent polynomial
        lo1, lo2 = self.q_low, other.q_low
        span = (self.q_high - lo1) + (other.q_high - lo2) + 1
        width = span
        packed = []
        for poly in (self, other):
            lo = poly.q_low
            top = poly.a_degree
            dense = [0] * (top * width + (poly.q_high - lo) + 1)
            for i, c in poly.terms.items():
                s = i * width + c.low - lo
                dense[s : s + len(c.coeffs)] = c.coeffs
            packed.append(dense)
        prod = _dense_mul(packed[0], packed[1])
        out = {}
        for i in range((len(prod) + width - 1) // width):
            chunk = prod[i * width : (i + 1) * width]
            if any(chunk):
                out[i] = LaurentPoly._raw(chunk, lo1 + lo2)
        return BiPoly._raw(out)

    def __pow__(self, k: int):
        out = BiPoly.from_laurent(ONE)
        for _ in range(k):
            out = out * self
        return out

    def shift_q(self, k: int) -> "BiPoly":
        return BiPoly._raw({i: c.shift(k) for i, c in self.terms.items()})

    def shift_a(self, k: int) -> "BiPoly":
        if k < 0 and self.terms and self.a_low + k < 0:
            raise ValueError("negative power of a")
        return BiPoly._raw({i + k: c for i, c in self.terms.items()})

    def mul_q_binomial(self, m: int, eps: int = 1) -> "BiPoly":
        """Multiply by ``1 - eps*q**m``."""
        return BiPoly._raw({i: c.mul_binomial(m, eps) for i, c in self.terms.items()})

    mul_binomial = mul_q_binomial

    def mul_a_linear(self, m: int, eps: int = 1, reverse: bool = False) -> "BiPoly":
        """Multiply by ``1 - eps*a*q**m`` or, with ``reverse``, by ``a - eps*q**m``."""
        out: dict[int, LaurentPoly] = {}
        for i, c in self.terms.items():
            hi_part = (-c if eps == 1 else c * -eps).shift(m)
            lo_part = c
            if reverse:
                lo_part, hi_part = hi_part, c
            out[i] = out[i] + lo_part if i in out else lo_part
            out[i + 1] = out[i + 1] + hi_part if i + 1 in out else hi_part
        return BiPoly._raw(out)

    def div_a_linear(self, m: int, eps: int = 1, reverse: bool = False) -> "BiPoly":
        """Exact division by ``1 - eps*a*q**m`` (or ``a - eps*q**m``); ValueError if inexact."""
        if not self.terms:
            return self
        top = self.a_degree
        quo: dict[int, LaurentPoly] = {}
        if not reverse:
            # N_i = B_i - eps q^m B_{i-1}
            prev = ZERO
            for i in range(top + 1):
                cur = self.coeff(i) + prev.scale(eps).shift(m)
                quo[i] = cur
                prev = cur
            if quo.pop(top):
                raise ValueError("inexact division by a-linear factor")
        else:
            # N_i = B_{i-1} - eps q^m B_i, divide from the top
            prev = ZERO
            for i in range(top, 0, -1):
                cur = self.coeff(i) + prev.scale(eps).shift(m)
                quo[i - 1] = cur
                prev = cur
            if self.coeff(0) + prev.scale(eps).shift(m):
                raise ValueError("inexact division by a-linear factor")
        return BiPoly._raw(quo)

    def substitute_a(self, t: int, sign: int = 1) -> LaurentPoly:
        """The Laurent polynomial obtained from ``a -> sign * q**t``."""
        out = ZERO
        for i, c in self.terms.items():
            term = c.shift(i * t)
            out = out + (-term if sign < 0 and i % 2 else term)
        return out

    def substitute_a_value(self, x: Scalar) -> LaurentPoly:
        out = ZERO
        for i, c in self.terms.items():
            out = out + c * (Fraction(x) ** i)
        return out

    def neg_q(self) -> "BiPoly":
        return BiPoly._raw({i: c.neg_q() for i, c in self.terms.items()})

    def q_power(self, m: int) -> "BiPoly":
        return BiPoly._raw({i: c.q_power(m) for i, c in self.terms.items()})

    def coefficients(self) -> list[LaurentPoly]:
        return [self.terms[i] for i in sorted(self.terms)]

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"BiPoly({self.terms!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            f"({c})*a^{i}" if i else f"({c})" for i, c in sorted(self.terms.items())
        )


def bipoly_divexact(dividend: BiPoly, divisor: BiPoly) -> BiPoly | None:
    """Exact quotient in ``Q[q, 1/q][a]``, or ``None`` when the division is inexact.

    Long division in ``a`` over the fraction field of ``Q[q]``; the unique
    quotient lies in the polynomial ring iff every step divides exactly, so
    the first inexact coefficient division settles the question.
    """
    if divisor.is_zero:
        raise ZeroDivisorError("division by the zero BiPoly")
    rem = dict(dividend.terms)
    ddeg = divisor.a_degree
    lc = divisor.terms[ddeg]
    quo: dict[int, LaurentPoly] = {}
    while rem:
        top = max(rem)
        if top < ddeg:
            return None
        q_i, r = poly_divrem(rem[top], lc)
        if r:
            return None
        shift = top - ddeg
        quo[shift] = q_i
        for j, c in divisor.terms.items():
            key = j + shift
            val = rem.get(key, ZERO) - q_i * c
            if val:
                rem[key] = val
            else:
                rem.pop(key, None)
    return BiPoly._raw(quo)


def _laurent_content(polys: Iterable[LaurentPoly]) -> LaurentPoly:
    g = None
    for c in polys:
        g = c.ordinary() if g is None else poly_gcd(g, c)
        if g.degree == 0:
            return ONE
    if g is None:
        return ONE
    return g * _norm_scalar(Fraction(1) / g.leading_coefficient)


def _bipoly_primitive(f: BiPoly) -> tuple[LaurentPoly, BiPoly]:
    cont = _laurent_content(f.terms.values())
    if cont == ONE:
        return cont, f
    return cont, BiPoly._raw({i: poly_divrem(c, cont)[0] for i, c in f.terms.items()})


def _bipoly_prem(f: BiPoly, g: BiPoly) -> BiPoly:
    """Pseudo-remainder of f by g with respect to a."""
    dg = g.a_degree
    lc = g.terms[dg]
    rem = f
    while not rem.is_zero and rem.a_degree >= dg:
        top = rem.a_degree
        lead = rem.terms[top]
        rem = rem * lc - g.shift_a(top - dg) * lead
    return rem


def bipoly_gcd(f: BiPoly, g: BiPoly) -> BiPoly:
    """Content/primitive-part gcd in ``Q[q][a]`` up to units (q-powers, constants)."""
    if f.is_zero and g.is_zero:
        raise ZeroDivisorError("gcd(0, 0) is undefined")
    if f.is_zero or g.is_zero:
        h = g if f.is_zero else f
        return _bipoly_unit_normal(h)
    cf, pf = _bipoly_primitive(f)
    cg, pg = _bipoly_primitive(g)
    c = poly_gcd(cf, cg)
    if pf.a_degree < pg.a_degree:
        pf, pg = pg, pf
    while pg.a_degree > 0:
        r = _bipoly_prem(pf, pg)
        if r.is_zero:
            break
        pf, pg = pg, _bipoly_primitive(r)[1]
    else:
        pg = BiPoly.from_laurent(ONE)
    return _bipoly_unit_normal(pg * c)


def _bipoly_unit_normal(h: BiPoly) -> BiPoly:
    lo = h.q_low
    top = h.terms[h.a_degree]
    scale = _norm_scalar(Fraction(1) / top.leading_coefficient)
    return BiPoly._raw({i: (c * scale).shift(-lo) for i, c in h.terms.items()})


def _canon_bipair(num: BiPoly, den: BiPoly) -> tuple[BiPoly, BiPoly]:
    if num.is_zero:
        return BiPoly(), BiPoly.from_laurent(ONE)
    k = min(num.a_low, den.a_low)
    if k:
        num, den = num.shift_a(-k), den.shift_a(-k)
    s = den.q_low
    all_coeffs = [c for p in (num, den) for t in p.terms.values() for c in t.coeffs]
    _, common = _scaled_ints(all_coeffs)
    g = 0
    for p in (num, den):
        for t in p.terms.values():
            g = gcd(g, _int_content(int(c * common) for c in t.coeffs))
    top = den.terms[den.a_degree].leading_coefficient
    if top < 0:
        g = -g
    factor = _norm_scalar(Fraction(common, g))

    def scale(p):
        if factor == 1:
            return p.shift_q(-s)
        return BiPoly._raw({i: (c * factor).shift(-s) for i, c in p.terms.items()})

    return scale(num), scale(den)


class BiRationalFunction:
    """A quotient of BiPolys with no common factor found by :func:`bipoly_gcd`."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = BiPoly._coerce(num)
        den = BiPoly.from_laurent(ONE) if den is None else BiPoly._coerce(den)
        if den.is_zero:
            raise ZeroDivisorError("zero denominator")
        if not num.is_zero:
            g = bipoly_gcd(num, den)
            if g.a_degree > 0 or g.terms[0].degree > 0:
                num = bipoly_divexact(num, g)
                den = bipoly_divexact(den, g)
        self.num, self.den = _canon_bipair(num, den)

    @classmethod
    def from_reduced(cls, num: BiPoly, den: BiPoly) -> "BiRationalFunction":
        if den.is_zero:
            raise ZeroDivisorError("zero denominator")
        obj = cls.__new__(cls)
        obj.num, obj.den = _canon_bipair(num, den)
        return obj

    def substitute_a(self, t: int) -> RationalFunction:
        """Specialize ``a -> q**t``; the result is re-reduced."""
        d = self.den.substitute_a(t)
        if d.is_zero:
            raise ZeroDivisionError("denominator vanishes under a -> q^t")
        return RationalFunction(self.num.substitute_a(t), d)

    def neg_q(self) -> "BiRationalFunction":
        return BiRationalFunction.from_reduced(self.num.neg_q(), self.den.neg_q())

    def q_power(self, m: int) -> "BiRationalFunction":
        return BiRationalFunction.from_reduced(self.num.q_power(m), self.den.q_power(m))

    def __neg__(self):
        return BiRationalFunction.from_reduced(-self.num, self.den)

    def __eq__(self, other):
        if not isinstance(other, BiRationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"BiRationalFunction({self.num!r}, {self.den!r})"


# ---------------------------------------------------------------------------
# substitutions


@dataclass(frozen=True)
class Subst:
    """A substitution: ``q -> -q``, ``q -> q**m``, ``a -> q**t`` or ``q -> value``."""

    kind: str
    arg: Scalar = 0

    @classmethod
    def neg_q(cls) -> "Subst":
        return cls("neg_q")

    @classmethod
    def q_power(cls, m: int) -> "Subst":
        if m == 0:
            raise ValueError("q -> q**0 is not a valid substitution")
        return cls("q_power", m)

    @classmethod
    def a_power(cls, t: int) -> "Subst":
        return cls("a_power", t)

    @classmethod
    def q_value(cls, x: Scalar) -> "Subst":
        return cls("q_value", Fraction(x))


def substitute(p, s: Subst):
    """Apply a substitution to a LaurentPoly, BiPoly or (Bi)RationalFunction."""
    if s.kind == "neg_q":
        return p.neg_q()
    if s.kind == "q_power":
        return p.q_power(s.arg)
    if s.kind == "a_power":
        if not isinstance(p, (BiPoly, BiRationalFunction)):
            raise TypeError("a -> q^t needs a bivariate argument")
        return p.substitute_a(s.arg)
    if s.kind == "q_value":
        if isinstance(p, BiPoly):
            raise TypeError("numeric q-evaluation of a BiPoly is not supported")
        return p(s.arg)
    raise ValueError(f"unknown substitution {s.kind!r}")


def random_laurent(rng: random.Random, max_len: int = 6, low_range=(-3, 3), coeff=5) -> LaurentPoly:
    """Small random Laurent polynomial, used by property checks."""
    n = rng.randint(0, max_len)
    return LaurentPoly(
        [rng.randint(-coeff, coeff) for _ in range(n)], rng.randint(*low_range)
    )
