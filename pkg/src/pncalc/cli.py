"""``pncalc check --model FILE``: verify a model file and report.

Exit status: 0 overall PASS, 1 overall FAIL, 2 input error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from pncalc import __version__
from pncalc.errors import InputError
from pncalc.models import emit_report, fixture_names, load_model, plan_for, run_checks

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEFAULT_SEED = 42


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pncalc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"pncalc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="verify a model file")
    check.add_argument("--model", required=True,
                       help="model JSON file, or fixture:NAME for a bundled one")
    check.add_argument("--report", type=Path, help="also write the JSON report here")
    check.add_argument("--format", choices=("json", "text"), default="text",
                       help="stdout format (default: text)")
    check.add_argument("--seed", type=_u64,
                       help=f"oracle seed (default: $PNCALC_SEED, else {DEFAULT_SEED})")
    check.add_argument("--oracle-samples", type=_positive, help="oracle sample count")
    check.add_argument("--skip-oracle", action="store_true", help="symbolic verdicts only")
    check.add_argument("--timings", action="store_true",
                       help="include wall-clock time (makes the JSON non-deterministic)")

    sub.add_parser("fixtures", help="list bundled fixture names")
    return parser


def _seed(args) -> int | None:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("PNCALC_SEED")
    if env is not None:
        return _u64(env)
    return None  # model file override, then the default


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "fixtures":
        print("\n".join(fixture_names()))
        return EXIT_PASS
    try:
        seed = _seed(args)
        model = load_model(args.model)
        plan = None
        if not args.skip_oracle:
            plan = plan_for(model, seed=seed, count=args.oracle_samples)
    except (InputError, OSError, ValueError) as exc:
        print(f"pncalc: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = run_checks(model, plan, timings=args.timings)
    if args.report is not None:
        args.report.write_bytes(emit_report(report, "json"))
    sys.stdout.buffer.write(emit_report(report, args.format))
    sys.stdout.flush()
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
