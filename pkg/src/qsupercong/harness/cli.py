"""Command line entry point: cyclo, check, sweep and selftest."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from ..cyclotomic import cyclotomic, cyclotomic_neg
from .registry import REGISTRY, UsageError, run
from .report import Report, emit_report, to_text
from .sweep import SweepSpec, build_report

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _int_list(text: str) -> tuple[int, ...]:
    """'1,2,3' or an inclusive range 'lo:hi'."""
    text = text.strip()
    try:
        if ":" in text:
            lo, hi = text.split(":")
            return tuple(range(int(lo), int(hi) + 1))
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list like 1,2,3 or lo:hi, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qsupercong", description="Exact checks of q-supercongruences and their p-adic shadows.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log skipped cases")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cyclo", help="print the coefficients of Phi_n(q) or Phi_n(-q)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--neg", action="store_true", help="Phi_n(-q) instead of Phi_n(q)")

    p = sub.add_parser("check", help="check a single case")
    p.add_argument("--id", required=True, dest="sid")
    for name in ("n", "d", "r", "s", "p", "e"):
        p.add_argument(f"--{name}", type=int)
    p.add_argument("--json", action="store_true", help="print the record as JSON")

    p = sub.add_parser("sweep", help="check every valid case in a range")
    p.add_argument("--id", required=True, dest="sid")
    p.add_argument("--n-max", type=int, default=0)
    p.add_argument("--d-list", type=_int_list)
    p.add_argument("--r-list", type=_int_list, help="e.g. 1,-1 or a range; write --r-list=-7:7 for a negative start")
    p.add_argument("--p-max", type=int, default=0)
    p.add_argument("--e", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--jobs", type=int, default=1)

    sub.add_parser("selftest", help="run the built-in invariant suite")
    sub.add_parser("list", help="list statement ids")
    return parser


def _cmd_cyclo(args) -> int:
    if args.n < 1:
        raise UsageError("--n must be positive")
    poly = cyclotomic_neg(args.n) if args.neg else cyclotomic(args.n)
    print(" ".join(str(c) for c in poly.coeffs))
    return EXIT_OK


def _cmd_check(args) -> int:
    params = {k: getattr(args, k) for k in ("n", "d", "r", "s", "p", "e")}
    rec = run(args.sid, params)
    if args.json:
        print(json.dumps(rec, sort_keys=True, indent=2))
    else:
        print(to_text(Report(records=[rec])), end="")
    return EXIT_FAILED if rec["verdict"] == "failed" else EXIT_OK


def _cmd_sweep(args) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    spec = SweepSpec(args.sid, args.n_max, args.d_list, args.r_list, args.p_max, args.e, args.jobs)
    report = build_report(spec)
    with open(args.out, "wb") as fh:
        fh.write(emit_report(report, args.format))
    s = report.summary
    print(f"checked {s['checked']} held {s['held']} failed {s['failed']} "
          f"inapplicable {s['inapplicable']} skipped {len(report.skipped)} -> {args.out}")
    return EXIT_OK if report.ok else EXIT_FAILED


def _cmd_list(args) -> int:
    for entry in REGISTRY.values():
        print(f"{entry.id:<8} {entry.kind:<6} {entry.description}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handlers = {"cyclo": _cmd_cyclo, "check": _cmd_check, "sweep": _cmd_sweep, "list": _cmd_list}
    try:
        if args.command == "selftest":
            from .selftest import run_selftest

            return EXIT_OK if run_selftest() else EXIT_FAILED
        return handlers[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
