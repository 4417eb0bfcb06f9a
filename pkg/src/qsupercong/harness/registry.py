"""Statement ids, their parameters, and single-case execution."""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

from ..congruence import check_congruent
from ..cyclotomic import Modulus, e3e4_modulus, theorem_modulus
from ..microscope import (
    verify_bailey_instance,
    verify_lemma21,
    verify_parametric,
    verify_term_pairing,
)
from ..padic import PadicContext, check_padic
from ..qseries import InvalidCase, QCase, QStatement, evaluate, theorem1, theorem2


class UsageError(ValueError):
    """Parameters incompatible with a statement id (exit code 2)."""


@dataclass(frozen=True)
class Entry:
    id: str
    kind: str  # "q", "micro" or "padic"
    description: str
    params: tuple[str, ...]


# id -> what it checks; the README tabulates the formulas behind each id
_ENTRIES = [
    Entry("T1", "q", "unified cubic congruence, any (n, d, r)", ("n", "d", "r")),
    Entry("T2", "q", "unified quadratic congruence, any (n, d, r)", ("n", "d", "r")),
    Entry("T3", "q", "cubic congruence with d = 3, r = s", ("n", "s")),
    Entry("T4", "q", "cubic congruence with d = 4, r = s", ("n", "s")),
    Entry("G8", "q", "cubic congruence with d = 2, r = 1", ("n",)),
    Entry("G13", "q", "cubic congruence with d = 2, r = -1", ("n",)),
    Entry("E3", "q", "quadratic congruence d = 2, r = 1, n-dependent modulus", ("n",)),
    Entry("E4", "q", "quadratic congruence d = 2, r = -1, n-dependent modulus", ("n",)),
    Entry("L21", "micro", "reflection congruence for Pochhammer ratios, all k", ("n", "d", "r")),
    Entry("L22", "micro", "one-parameter cubic congruence", ("n", "d", "r")),
    Entry("EQ1P", "micro", "one-parameter quadratic congruence", ("n", "d", "r")),
    Entry("BAILEY+", "micro", "Bailey evaluation at a = q^{2n}, both families", ("n", "d", "r")),
    Entry("BAILEY-", "micro", "Bailey evaluation at a = q^{-2n}, both families", ("n", "d", "r")),
    Entry("PAIRING", "micro", "summands k and K-k cancel modulo Phi_n(-q)", ("n", "d", "r")),
    Entry("B2", "padic", "(4k+1) sum with (1/2)_k^3 modulo p^3", ("p",)),
    Entry("E2", "padic", "(6k+1) sum with (1/3)_k^3 modulo p^3", ("p",)),
    Entry("F2", "padic", "(8k+1) sum with (1/4)_k^3 modulo p^3", ("p",)),
    Entry("SW-1/2", "padic", "unified form, a = 1/2", ("p",)),
    Entry("SW-1/3", "padic", "unified form, a = 1/3", ("p",)),
    Entry("SW-1/4", "padic", "unified form, a = 1/4", ("p",)),
    Entry("EQ7", "padic", "(2dk+1) sum with (1/d)_k^3, even d; also spelled EQ7-<d>", ("p", "d")),
    Entry("COR3-1", "padic", "d = 3, s = -1, q -> 1, modulo p^2", ("p",)),
    Entry("COR3-2", "padic", "d = 3, s = 1, q -> 1, modulo p^2", ("p",)),
    Entry("COR3-3", "padic", "d = 3, s = -1, q -> -1, modulo p^3", ("p",)),
    Entry("COR3-4", "padic", "d = 3, s = 1, q -> -1, modulo p^3", ("p",)),
    Entry("COR4-1", "padic", "d = 4, s = -1, q -> 1, modulo p^2", ("p",)),
    Entry("COR4-2", "padic", "d = 4, s = 1, q -> 1, modulo p^2", ("p",)),
    Entry("COR4-3", "padic", "d = 4, s = -1, q -> -1, modulo p^3", ("p",)),
    Entry("COR4-4", "padic", "d = 4, s = 1, q -> -1, modulo p^3", ("p",)),
    Entry("HE", "padic", "q -> 1 shadow of the d = 2, r = 1 case, modulo p^2", ("p",)),
]

REGISTRY: dict[str, Entry] = {e.id: e for e in _ENTRIES}

# fixed (d, r) of the specialized q-statements; T3/T4 take r = s
_FIXED = {"G8": (2, 1), "G13": (2, -1), "E3": (2, 1), "E4": (2, -1)}
_FAMILY = {"T1": 1, "T2": 2, "T3": 1, "T4": 1, "G8": 1, "G13": 1, "E3": 2, "E4": 2}


def normalize_id(sid: str) -> str:
    """Canonical spelling; accepts a Unicode minus in BAILEY- and EQ7-<d>."""
    sid = sid.strip().upper().replace("−", "-")
    if sid.startswith("EQ7-") and sid[4:].isdigit():
        return sid
    if sid not in REGISTRY:
        raise UsageError(f"unknown statement id {sid!r}")
    return sid


def entry_for(sid: str) -> Entry:
    sid = normalize_id(sid)
    return REGISTRY["EQ7"] if sid.startswith("EQ7-") else REGISTRY[sid]


def q_case(sid: str, params: dict) -> QCase:
    """The (n, d, r) triple behind a q- or microscope statement; UsageError if invalid."""
    sid = normalize_id(sid)
    n = params.get("n")
    if n is None:
        raise UsageError(f"{sid} needs --n")
    if sid in _FIXED:
        d, r = _FIXED[sid]
    elif sid in ("T3", "T4"):
        s = params.get("s", params.get("r"))
        if s not in (1, -1):
            raise UsageError(f"{sid} needs --s 1 or --s -1")
        d, r = (3 if sid == "T3" else 4), s
    else:
        d, r = params.get("d"), params.get("r")
        if d is None or r is None:
            raise UsageError(f"{sid} needs --n, --d and --r")
    try:
        return QCase(int(n), int(d), int(r))
    except InvalidCase as exc:
        raise UsageError(f"{sid}: hypothesis '{exc.hypothesis}' violated: {exc}") from exc


def q_statement(sid: str, case: QCase) -> QStatement:
    return theorem1(case) if _FAMILY[normalize_id(sid)] == 1 else theorem2(case)


def q_modulus(sid: str, n: int) -> Modulus:
    return e3e4_modulus(n) if normalize_id(sid) in ("E3", "E4") else theorem_modulus(n)


def _record(sid: str, params: dict, status: str, **extra) -> dict:
    rec = {"statement": sid, "parameters": params, "verdict": status}
    rec.update(extra)
    return rec


def run_q_statement(sid: str, stmt: QStatement, modulus: Modulus, params: dict) -> dict:
    lhs = evaluate(stmt.lhs)
    rhs = evaluate(stmt.rhs, stmt.prefactor)
    v = check_congruent(lhs, rhs, modulus)
    return _record(
        sid,
        params,
        "held" if v.holds else "failed",
        multiplicities=None if v.max_multiplicity is None else list(v.max_multiplicity),
        stated_multiplicities=list(modulus.multiplicities()),
        coprimality_ok=v.coprimality_ok,
        residue=None if v.holds else str(v.residue),
    )


def _run_q(sid: str, params: dict, extra_multiplicity: int = 0) -> dict:
    case = q_case(sid, params)
    if case.n < 3:
        raise UsageError("the congruence moduli need odd n >= 3")
    modulus = q_modulus(sid, case.n)
    if extra_multiplicity:
        # raise the Phi_n(q) power; used to build forced-failure fixtures
        base_mult = modulus.multiplicities()[1]
        modulus = modulus.with_multiplicity(1, base_mult + extra_multiplicity)
    return run_q_statement(sid, q_statement(sid, case), modulus, case.as_dict())


def _run_micro(sid: str, params: dict) -> dict:
    case = q_case(sid, params)
    p = case.as_dict()
    if sid == "L21":
        verdicts = [verify_lemma21(case.n, case.d, case.r, k) for k in range(case.K + 1)]
        bad = [k for k, v in enumerate(verdicts) if not v.holds]
        return _record(sid, p, "failed" if bad else "held", failing_k=bad)
    if sid in ("L22", "EQ1P"):
        v = verify_parametric(case, 1 if sid == "L22" else 2)
        return _record(sid, p, "held" if v.holds else "failed",
                       coprimality_ok=v.coprimality_ok,
                       residue=None if v.holds else str(v.residue))
    if sid in ("BAILEY+", "BAILEY-"):
        sign = 1 if sid == "BAILEY+" else -1
        reps = [verify_bailey_instance(case, sign, f) for f in (1, 2)]
        ok = all(r.holds for r in reps)
        return _record(sid, p, "held" if ok else "failed",
                       details={f"family{f}": r.details for f, r in zip((1, 2), reps)})
    reps = [verify_term_pairing(case, f) for f in (1, 2)]
    ok = all(r.holds for r in reps)
    return _record(sid, p, "held" if ok else "failed",
                   details={f"family{f}": r.details for f, r in zip((1, 2), reps)})


def _run_padic(sid: str, params: dict) -> dict:
    p = params.get("p")
    if p is None:
        raise UsageError(f"{sid} needs --p")
    if sid == "EQ7":
        if params.get("d") is None:
            raise UsageError("EQ7 needs --d (or use the id EQ7-<d>)")
        sid = f"EQ7-{int(params['d'])}"
    elif sid.startswith("EQ7-") and params.get("d") is not None and f"EQ7-{params['d']}" != sid:
        raise UsageError("EQ7-<d> takes d from the id")
    e = params.get("e")
    try:
        ctx = PadicContext(int(p), 3 if e is None else int(e))
        v = check_padic(sid, ctx)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = {"p": ctx.p}
    if sid.startswith("EQ7-"):
        out["d"] = int(sid[4:])
    if e is not None:
        out["e"] = ctx.e
    residue = v.details.get("residue") if v.status == "failed" else None
    return _record(sid, out, v.status, valuation=v.valuation, modulus_exponent=v.e,
                   residue=None if residue is None else str(residue),
                   reason=v.reason or None, details=v.details or None)


def run(sid: str, params: dict, extra_multiplicity: int = 0) -> dict:
    """Check one case and return its record (with a ``wall_time`` field)."""
    sid = normalize_id(sid)
    kind = entry_for(sid).kind
    params = {k: v for k, v in params.items() if v is not None}
    start = time.perf_counter()
    if kind == "q":
        rec = _run_q(sid, params, extra_multiplicity)
    elif kind == "micro":
        rec = _run_micro(sid, params)
    else:
        rec = _run_padic(sid, params)
    rec["wall_time"] = round(time.perf_counter() - start, 6)
    return rec


# ---------------------------------------------------------------------------
# fixtures for the negative control


def corruptions(stmt: QStatement):
    """Yield (label, statement) pairs with one summand or prefactor exponent raised by one."""
    for side in ("lhs", "rhs"):
        expr = getattr(stmt, side)
        for i in range(3):
            q_exp = list(expr.q_exp)
            q_exp[i] += 1
            yield f"{side}.q_exp[{i}]", replace(stmt, **{side: replace(expr, q_exp=tuple(q_exp))})
        for j, poch in enumerate(expr.pochs):
            pochs = list(expr.pochs)
            pochs[j] = replace(poch, shift=poch.shift + 1)
            yield f"{side}.poch[{j}].shift", replace(stmt, **{side: replace(expr, pochs=tuple(pochs))})
        if expr.lead is not None:
            s, o, b = expr.lead
            yield f"{side}.lead", replace(stmt, **{side: replace(expr, lead=(s, o + 1, b))})
    pre = stmt.prefactor
    yield "prefactor.q_exp", replace(stmt, prefactor=replace(pre, q_exp=pre.q_exp + 1))


def describe(sid: str) -> str:
    return entry_for(sid).description


__all__ = [
    "REGISTRY",
    "Entry",
    "UsageError",
    "normalize_id",
    "entry_for",
    "q_case",
    "q_statement",
    "q_modulus",
    "run",
    "run_q_statement",
    "corruptions",
    "describe",
]
