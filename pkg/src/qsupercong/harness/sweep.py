"""Case enumeration and sweeps over a statement id."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from sympy import primerange

from ..qseries import InvalidCase, check_case
from .registry import UsageError, entry_for, normalize_id, run
from .report import Report

log = logging.getLogger(__name__)

DEFAULT_D = (2, 3, 4, 5, 6)


@dataclass(frozen=True)
class SweepSpec:
    statement: str
    n_max: int = 0
    d_list: tuple[int, ...] | None = None
    r_list: tuple[int, ...] | None = None  # None means every valid r
    p_max: int = 0
    e: int | None = None
    jobs: int = 1

    def echo(self) -> dict:
        """Fields that determine the output (parallelism excluded)."""
        out = asdict(self)
        out.pop("jobs")
        for key in ("d_list", "r_list"):
            if out[key] is not None:
                out[key] = list(out[key])
        return out


@dataclass
class Skip:
    parameters: dict
    hypothesis: str
    reason: str

    def as_dict(self) -> dict:
        return {"parameters": self.parameters, "hypothesis": self.hypothesis, "reason": self.reason}


@dataclass
class Plan:
    statement: str
    cases: list[dict] = field(default_factory=list)
    skipped: list[Skip] = field(default_factory=list)


def _skip(plan: Plan, params: dict, exc: InvalidCase) -> None:
    plan.skipped.append(Skip(params, exc.hypothesis, str(exc)))
    log.info("skip %s %s: %s violated (%s)", plan.statement, params, exc.hypothesis, exc)


def _q_triples(sid: str, spec: SweepSpec, plan: Plan) -> list[tuple[int, int, int]]:
    if sid in ("G8", "E3"):
        fixed = [(2, 1)]
    elif sid in ("G13", "E4"):
        fixed = [(2, -1)]
    elif sid in ("T3", "T4"):
        d = 3 if sid == "T3" else 4
        fixed = [(d, s) for s in (spec.r_list or (-1, 1)) if s in (-1, 1)]
    else:
        fixed = None
    triples = []
    for n in range(3, spec.n_max + 1, 2):
        if fixed is not None:
            candidates = fixed
        elif spec.r_list is not None:
            candidates = [(d, r) for d in spec.d_list or DEFAULT_D for r in spec.r_list]
        else:
            # every r in range with the right residue; only gcd can fail
            candidates = []
            for d in spec.d_list or DEFAULT_D:
                try:
                    check_case(n, d, n)
                except InvalidCase as exc:
                    _skip(plan, {"n": n, "d": d, "r": None}, exc)
                    continue
                candidates.extend((d, r) for r in range(n - d * n + d, n + 1) if (n - r) % d == 0)
        for d, r in candidates:
            try:
                check_case(n, d, r)
            except InvalidCase as exc:
                _skip(plan, {"n": n, "d": d, "r": r}, exc)
                continue
            triples.append((n, d, r))
    return sorted(set(triples))


def enumerate_cases(spec: SweepSpec) -> Plan:
    """Parameter dicts in lexicographic (n, d, r) or (p, d) order, plus skipped combinations."""
    sid = normalize_id(spec.statement)
    kind = entry_for(sid).kind
    plan = Plan(sid)
    if kind == "padic":
        if spec.p_max < 3:
            raise UsageError("p-adic sweeps need --p-max >= 3")
        ds = [None]
        if sid == "EQ7":
            ds = list(spec.d_list or (2, 4, 6))
        for p in primerange(3, spec.p_max + 1):
            for d in ds:
                params = {"p": int(p)}
                if d is not None:
                    params["d"] = d
                if spec.e is not None:
                    params["e"] = spec.e
                plan.cases.append(params)
        return plan
    if spec.n_max < 3:
        raise UsageError("q-statement sweeps need --n-max >= 3")
    for n, d, r in _q_triples(sid, spec, plan):
        if sid in ("T3", "T4"):
            plan.cases.append({"n": n, "s": r})
        elif sid in ("G8", "G13", "E3", "E4"):
            plan.cases.append({"n": n})
        else:
            plan.cases.append({"n": n, "d": d, "r": r})
    if not plan.cases:
        log.warning("no valid cases for %s", sid)
    return plan


def _run_one(args):
    sid, params = args
    return run(sid, params)


def sweep(spec: SweepSpec) -> tuple[list[dict], list[Skip]]:
    """Run every enumerated case; the record order never depends on ``jobs``."""
    plan = enumerate_cases(spec)
    work = [(plan.statement, params) for params in plan.cases]
    if spec.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            records = list(pool.map(_run_one, work))
    else:
        records = [_run_one(w) for w in work]
    return records, plan.skipped


def build_report(spec: SweepSpec) -> Report:
    records, skipped = sweep(spec)
    return Report(spec.echo(), records, [s.as_dict() for s in skipped])
