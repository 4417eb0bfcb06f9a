import csv
import io
import json

import pytest

from qsupercong.harness import (
    REGISTRY,
    Report,
    SweepSpec,
    UsageError,
    build_report,
    canonical_json,
    emit_report,
    enumerate_cases,
    run,
    sweep,
)
from qsupercong.harness.cli import main
from qsupercong.harness.registry import corruptions, normalize_id, q_statement, run_q_statement, theorem_modulus
from qsupercong.harness.selftest import run_selftest
from qsupercong.qseries import QCase


# --- registry ------------------------------------------------------------------


def test_ids():
    assert normalize_id("bailey−") == "BAILEY-"
    assert normalize_id("eq7-4") == "EQ7-4"
    with pytest.raises(UsageError):
        normalize_id("T9")
    assert {"T1", "T2", "E3", "E4", "L21", "PAIRING", "EQ7", "HE"} <= set(REGISTRY)


# --- enumeration ---------------------------------------------------------------


def test_enumerate_small_range():
    plan = enumerate_cases(SweepSpec("T1", n_max=3, d_list=(2,), r_list=(-1, 1, 3)))
    assert plan.cases == [{"n": 3, "d": 2, "r": -1}, {"n": 3, "d": 2, "r": 1}, {"n": 3, "d": 2, "r": 3}]
    assert plan.skipped == []


def test_enumerate_gcd_empty():
    spec = SweepSpec("T1", n_max=9, d_list=(3,))
    plan = enumerate_cases(spec)
    assert all(c["n"] != 9 for c in plan.cases)
    skipped = [s for s in plan.skipped if s.parameters["n"] == 9]
    assert skipped and skipped[0].hypothesis == "gcd"


def test_enumerate_residue_match():
    plan = enumerate_cases(SweepSpec("T1", n_max=5, d_list=(4,), r_list=(1,)))
    assert {"n": 5, "d": 4, "r": 1} in plan.cases


def test_enumerate_logs_hypotheses():
    plan = enumerate_cases(SweepSpec("T2", n_max=5, d_list=(2,), r_list=(0, 1, 9)))
    reasons = {(s.parameters["n"], s.parameters["r"]): s.hypothesis for s in plan.skipped}
    assert reasons[(3, 0)] == "residue" and reasons[(5, 9)] == "range"


def test_enumerate_ordered():
    plan = enumerate_cases(SweepSpec("T1", n_max=11, d_list=(3, 2)))
    keys = [(c["n"], c["d"], c["r"]) for c in plan.cases]
    assert keys == sorted(keys)


def test_enumerate_padic():
    plan = enumerate_cases(SweepSpec("EQ7", p_max=7))
    assert plan.cases[:3] == [{"p": 3, "d": 2}, {"p": 3, "d": 4}, {"p": 3, "d": 6}]
    assert len(plan.cases) == 9
    with pytest.raises(UsageError):
        enumerate_cases(SweepSpec("B2"))


def test_enumerate_specialized_ids():
    assert enumerate_cases(SweepSpec("E3", n_max=7)).cases == [{"n": 3}, {"n": 5}, {"n": 7}]
    assert enumerate_cases(SweepSpec("T3", n_max=5)).cases == [{"n": 5, "s": -1}]


# --- run -------------------------------------------------------------------------


def test_run_theorem_instance():
    rec = run("T1", {"n": 5, "d": 2, "r": 1})
    assert rec["verdict"] == "held" and rec["residue"] is None
    assert rec["multiplicities"] == [3, 2] and rec["stated_multiplicities"] == [3, 2]
    assert rec["wall_time"] >= 0


def test_run_trivial_case():
    rec = run("T1", {"n": 7, "d": 2, "r": 7})
    assert rec["verdict"] == "held" and rec["multiplicities"] is None


def test_run_e3_sharper_modulus():
    rec = run("E3", {"n": 7})
    assert rec["verdict"] == "held"
    assert rec["multiplicities"][1] >= 3


@pytest.mark.parametrize(
    "sid, params",
    [
        ("L21", {"n": 7, "d": 3, "r": 1}),
        ("L22", {"n": 5, "d": 2, "r": 1}),
        ("EQ1P", {"n": 7, "d": 4, "r": -1}),
        ("BAILEY+", {"n": 3, "d": 2, "r": 1}),
        ("BAILEY−", {"n": 5, "d": 3, "r": -1}),
        ("PAIRING", {"n": 5, "d": 2, "r": -1}),
        ("B2", {"p": 5}),
        ("EQ7", {"p": 13, "d": 4}),
        ("EQ7-2", {"p": 5}),
        ("HE", {"p": 7}),
        ("T3", {"n": 7, "s": 1}),
        ("G13", {"n": 9}),
    ],
)
def test_run_dispatch(sid, params):
    assert run(sid, params)["verdict"] == "held"


def test_run_inapplicable():
    rec = run("F2", {"p": 3})
    assert rec["verdict"] == "inapplicable" and rec["reason"]


@pytest.mark.parametrize(
    "sid, params",
    [
        ("T1", {"n": 9, "d": 3, "r": 0}),
        ("T1", {"n": 5, "d": 2}),
        ("T3", {"n": 7, "s": 2}),
        ("B2", {}),
        ("B2", {"p": 9}),
        ("EQ7", {"p": 7}),
        ("EQ7-3", {"p": 7}),
    ],
)
def test_run_usage_errors(sid, params):
    with pytest.raises(UsageError):
        run(sid, params)


def test_usage_error_names_hypothesis():
    with pytest.raises(UsageError, match="gcd"):
        run("T1", {"n": 9, "d": 3, "r": 3})


def test_forced_failure_fixture():
    # T1 (5, 2, 1) has Phi_5(q) multiplicity exactly 2; asking for 3 must fail
    rec = run("T1", {"n": 5, "d": 2, "r": 1}, extra_multiplicity=1)
    assert rec["verdict"] == "failed" and rec["residue"] not in (None, "", "0")
    report = Report({}, [rec], [])
    assert report.summary["failed"] == 1 and not report.ok
    assert rec["residue"] in emit_report(report, "text").decode()


def test_corruptions_fail():
    stmt = q_statement("T1", QCase(7, 2, 1))
    results = {label: run_q_statement("T1", s, theorem_modulus(7), {})["verdict"] for label, s in corruptions(stmt)}
    assert results and all(v == "failed" for v in results.values())


# --- reports -------------------------------------------------------------------


def test_empty_report():
    r = Report()
    assert r.summary == {"checked": 0, "held": 0, "failed": 0, "inapplicable": 0} and r.ok
    data = json.loads(emit_report(r, "json"))
    assert data["schema_version"] == 1 and data["records"] == []
    assert emit_report(r, "csv").decode().startswith("statement,parameters,verdict")
    assert "checked 0" in emit_report(r, "text").decode()


def test_single_record_formats():
    report = build_report(SweepSpec("T1", n_max=5, d_list=(2,), r_list=(1,)))
    assert report.summary["checked"] == 2 and report.summary["failed"] == 0
    data = json.loads(emit_report(report, "json"))
    assert data["spec"]["statement"] == "T1" and "jobs" not in data["spec"]
    assert list(data) == sorted(data)
    rows = list(csv.DictReader(io.StringIO(emit_report(report, "csv").decode())))
    assert len(rows) == 2 and json.loads(rows[0]["parameters"]) == {"d": 2, "n": 3, "r": 1}
    with pytest.raises(ValueError):
        emit_report(report, "xml")


def test_canonical_json_deterministic():
    spec = SweepSpec("T2", n_max=9, d_list=(2, 3), r_list=(-1, 1))
    a, b = canonical_json(build_report(spec)), canonical_json(build_report(spec))
    assert a == b and "wall_time" not in a


def test_parallel_matches_serial():
    base = dict(n_max=9, d_list=(2, 4))
    serial, _ = sweep(SweepSpec("T1", **base))
    parallel, _ = sweep(SweepSpec("T1", jobs=2, **base))
    strip = lambda recs: [{k: v for k, v in r.items() if k != "wall_time"} for r in recs]
    assert strip(serial) == strip(parallel)


# --- CLI -----------------------------------------------------------------------


def test_cli_cyclo(capsys):
    assert main(["cyclo", "--n", "6"]) == 0
    assert capsys.readouterr().out.split() == ["1", "-1", "1"]
    assert main(["cyclo", "--n", "3", "--neg"]) == 0
    assert capsys.readouterr().out.split() == ["1", "-1", "1"]


def _exit_code(argv):
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code


@pytest.mark.parametrize(
    "argv, code",
    [
        (["check", "--id", "T1", "--n", "5", "--d", "2", "--r", "1"], 0),
        (["check", "--id", "F2", "--p", "3"], 0),
        (["check", "--id", "E4", "--n", "7"], 1),
        (["check", "--id", "T1", "--n", "9", "--d", "3", "--r", "0"], 2),
        (["check", "--id", "NOPE", "--n", "5"], 2),
        (["check", "--id", "T1", "--n", "five"], 2),
        (["frobnicate"], 2),
        (["cyclo", "--n", "0"], 2),
        (["sweep", "--id", "T1", "--out", "x.json"], 2),
        (["list"], 0),
    ],
)
def test_cli_exit_codes(argv, code, capsys):
    assert _exit_code(argv) == code


def test_cli_check_json(capsys):
    assert main(["check", "--id", "EQ7-4", "--p", "13", "--json"]) == 0
    rec = json.loads(capsys.readouterr().out)
    assert rec["verdict"] == "held" and rec["parameters"] == {"d": 4, "p": 13}


@pytest.mark.parametrize("fmt", ["json", "csv", "text"])
def test_cli_sweep_writes_report(tmp_path, fmt, capsys):
    out = tmp_path / f"report.{fmt}"
    argv = ["sweep", "--id", "T2", "--n-max", "7", "--d-list", "2,3", "--r-list=-1:1", "--out", str(out), "--format", fmt]
    assert main(argv) == 0
    assert "failed 0" in capsys.readouterr().out
    body = out.read_text()
    if fmt == "json":
        assert json.loads(body)["summary"]["failed"] == 0
    else:
        assert "T2" in body


def test_cli_sweep_failure_exit(tmp_path, capsys):
    out = tmp_path / "e4.json"
    assert main(["sweep", "--id", "E4", "--n-max", "7", "--out", str(out)]) == 1
    data = json.loads(out.read_text())
    # the Phi_n(q)^3 modulus is reached for n = 1 mod 4 only
    failed = [r["parameters"]["n"] for r in data["records"] if r["verdict"] == "failed"]
    assert failed == [3, 7] and all(r["residue"] for r in data["records"] if r["verdict"] == "failed")


def test_selftest(capsys):
    assert run_selftest()
    assert main(["selftest"]) == 0
