"""A quick invariant suite that runs without pytest (``qsupercong selftest``)."""

from __future__ import annotations

import random
import time
from fractions import Fraction

from ..cyclotomic import cyclotomic, theorem_modulus
from ..exact import LaurentPoly, poly_divrem
from ..microscope import verify_modulus_chain
from ..padic import PadicContext, a_p, gamma_p
from ..qseries import QCase, evaluate, theorem1
from .registry import corruptions, run, run_q_statement
from .report import canonical_json
from .sweep import SweepSpec, build_report


def _random_poly(rng: random.Random) -> LaurentPoly:
    low = rng.randint(-3, 3)
    return LaurentPoly.from_dict({low + i: Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for i in range(rng.randint(0, 6))})


def _ring_axioms() -> bool:
    rng = random.Random(1)
    for _ in range(200):
        f, g, h = (_random_poly(rng) for _ in range(3))
        if f * (g + h) != f * g + f * h or (f * g) * h != f * (g * h):
            return False
        if not g.is_zero:
            quo, rem = poly_divrem(f.ordinary(), g.ordinary())
            if quo * g.ordinary() + rem != f.ordinary():
                return False
    return True


def _cyclotomic_product() -> bool:
    # q^n - 1 is the product of Phi_e(q) over the divisors e of n
    for n in range(1, 61):
        prod = LaurentPoly.constant(1)
        for e in range(1, n + 1):
            if n % e == 0:
                prod = prod * cyclotomic(e)
        if prod != LaurentPoly.from_dict({n: 1, 0: -1}):
            return False
    return True


def _gamma_functional_equation() -> bool:
    for p in (3, 5, 7, 11, 13):
        ctx = PadicContext(p, 3)
        for x in range(1, 2 * p + 1):
            factor = -1 if x % p == 0 else -x
            if gamma_p(x + 1, ctx) != factor * gamma_p(x, ctx) % ctx.modulus:
                return False
    return True


def _gamma_reflection() -> bool:
    rng = random.Random(2)
    for p in (3, 5, 7, 11, 13):
        ctx = PadicContext(p, 3)
        for _ in range(50):
            den = rng.choice([d for d in range(1, 40) if d % p])
            x = Fraction(rng.randint(-200, 200), den)
            want = (-1) ** a_p(x, p) % ctx.modulus
            if gamma_p(x, ctx) * gamma_p(1 - x, ctx) % ctx.modulus != want:
                return False
    return True


def _theorem_samples() -> bool:
    cases = [("T1", {"n": 5, "d": 2, "r": 1}), ("T1", {"n": 7, "d": 3, "r": -2}),
             ("T2", {"n": 9, "d": 4, "r": 1}), ("E3", {"n": 7})]
    return all(run(sid, params)["verdict"] == "held" for sid, params in cases)


def _negative_control() -> bool:
    case = QCase(7, 2, 1)
    modulus = theorem_modulus(7)
    for _, stmt in corruptions(theorem1(case)):
        rec = run_q_statement("T1", stmt, modulus, case.as_dict())
        if rec["verdict"] != "failed" or not rec["residue"] or rec["residue"] == "0":
            return False
    return True


def _determinism() -> bool:
    spec = SweepSpec("T1", n_max=7, d_list=(2, 3))
    return canonical_json(build_report(spec)) == canonical_json(build_report(spec))


def _specialization() -> bool:
    from ..qseries import eq1param, lemma22, theorem2

    for n, d, r in [(5, 2, 1), (7, 3, 1), (9, 4, -3)]:
        case = QCase(n, d, r)
        for par, plain in ((lemma22(case), theorem1(case)), (eq1param(case), theorem2(case))):
            if evaluate(par.lhs.specialize(0)) != evaluate(plain.lhs):
                return False
    return True


CHECKS = [
    ("exact ring axioms and division", _ring_axioms),
    ("q^n - 1 = prod Phi_e", _cyclotomic_product),
    ("modulus chain Phi_n(-q) Phi_n(q^2)^2", lambda: all(verify_modulus_chain(n) for n in range(3, 30, 2))),
    ("Gamma_p functional equation", _gamma_functional_equation),
    ("Gamma_p reflection", _gamma_reflection),
    ("sample q-congruences", _theorem_samples),
    ("parametric sides at a = 1", _specialization),
    ("corrupted exponents are rejected", _negative_control),
    ("canonical report determinism", _determinism),
]


def run_selftest(out=print) -> bool:
    ok = True
    for name, check in CHECKS:
        start = time.perf_counter()
        passed = bool(check())
        ok &= passed
        out(f"{'PASS' if passed else 'FAIL'}  {name}  ({time.perf_counter() - start:.2f}s)")
    return ok
