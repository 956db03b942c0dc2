"""Command line interface: solve, convergence, beampattern, sweep-n, baselines."""

from __future__ import annotations

import argparse
import sys

from .eigen import NumericError
from .harness import (
    RUNNERS,
    load_config,
    parse_experiment,
    solve_report,
    write_rows,
)
from .model import ConfigError, ConstraintViolationError


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; usage errors are status 1 here
    def error(self, message):
        raise _ArgumentError(message)


def build_parser():
    parser = _Parser(prog="ma-array-opt",
                     description="Movable-antenna array placement and beamforming")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (
        ("solve", "optimize one scenario"),
        ("convergence", "iteration traces per segment length"),
        ("beampattern", "beam gain over an angle grid"),
        ("sweep-n", "achievable rate versus array size"),
        ("baselines", "benchmark schemes on one scenario"),
    ):
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--config", required=True, help="JSON config path")
        sp.add_argument("--out", help="output path (.json for JSON, CSV otherwise)")
        sp.add_argument("--algo", help="comma-separated scheme list (e.g. MM,FPA)")
        sp.add_argument("--multi-start", type=int, dest="multi_start")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--tol", type=float)
        sp.add_argument("--max-iters", type=int, dest="max_iters")
    return parser


def _fmt6(v):
    return format(float(v), ".6g")


def cli_main(argv=None):
    """Run one subcommand; returns the exit code (0 ok, 1 config, 2 numeric)."""
    try:
        args = build_parser().parse_args(argv)
    except _ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        doc = load_config(args.config)
        spec = parse_experiment(
            doc,
            kind=args.command,
            algorithms=args.algo,
            multi_start=args.multi_start,
            seed=args.seed,
            tol=args.tol,
            max_iters=args.max_iters,
            out=args.out,
        )
        if spec.kind in ("solve", "baselines"):
            rows, lines = solve_report(spec)
            for line in lines:
                print(line)
        else:
            rows = RUNNERS[spec.kind](spec)
            finals = {}
            for row in rows:
                finals[(row.scheme, row.n, row.l)] = row
            for key in sorted(finals, key=str):
                row = finals[key]
                print(f"{row.scheme} (N={row.n}, L={_fmt6(row.l)}): value={_fmt6(row.value)}")
        if spec.out:
            write_rows(rows, spec.out)
            print(f"wrote {len(rows)} rows to {spec.out}")
        return 0
    except (ConfigError, ConstraintViolationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 2


def main():
    raise SystemExit(cli_main(sys.argv[1:]))


if __name__ == "__main__":
    main()
