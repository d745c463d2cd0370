"""Command-line entry points for the search, verification, and report paths.

Exit codes: 0 success, 2 usage, 3 no collision, 4 budget exceeded,
5 oracle failure, 6 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bruteforce import (
    enumerate_lines,
    hj_lower_witness,
    hj_number_exact,
    pattern_to_text,
)
from .certificates import load_certificate, save_certificate, verify_certificate
from .errors import (
    BudgetExceededError,
    NoCollisionError,
    OracleError,
    OracleSpecError,
)
from .oracles import make_oracle, write_table
from .solver import DEFAULT_BUDGET, LineSearch
from .words import block_structure, colour_space_size

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NO_COLLISION = 3
EXIT_BUDGET = 4
EXIT_ORACLE = 5
EXIT_VERIFY = 6


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _parse_sizes(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"bad --sizes list {text!r}") from None


def cmd_params(args: argparse.Namespace) -> int:
    bs = block_structure(args.r, args.mode, _parse_sizes(args.sizes))
    space = [colour_space_size(bs, j) for j in range(bs.t)]
    if args.format == "json":
        payload = {
            "r": bs.r,
            "mode": bs.mode,
            "t": bs.t,
            "sizes": [str(s) for s in bs.sizes],
            "n": str(bs.n),
            "colour_space": [str(c) for c in space],
        }
        print(json.dumps(payload, indent=2))
    else:
        print(f"r={bs.r} mode={bs.mode} t={bs.t}")
        for j, size in enumerate(bs.sizes, start=1):
            print(f"n_{j} = {size}")
        print(f"n = {bs.n}")
        for j, count in enumerate(space):
            print(f"colour space at level {j}: {count}")
    return EXIT_OK


def cmd_find_line(args: argparse.Namespace) -> int:
    bs = block_structure(args.r, args.mode, _parse_sizes(args.sizes))
    oracle = make_oracle(args.oracle, args.r)
    reported: set[int] = set()

    def progress(level, outcome, scanned):
        if level in reported:  # deeper levels re-solve once per candidate word
            return
        reported.add(level)
        q1, q2 = outcome.collision
        _log(f"level {level}: collision ({q1},{q2}) after {scanned} candidates")

    try:
        search = LineSearch(bs, oracle, budget=args.budget, seed=args.seed, progress=progress)
        cert = search.find_line()
    finally:
        oracle.close()

    if args.out:
        save_certificate(cert, args.out)
    if args.format == "json":
        payload = {
            "r": cert.r,
            "mode": cert.mode,
            "n": str(cert.line.n),
            "final_collision": list(cert.final_collision),
            "shared_colour": cert.shared_colour,
            "active": [[str(lo), str(hi)] for lo, hi in cert.line.active],
            "unique_evaluations": cert.stats.unique_evaluations,
            "total_requests": cert.stats.total_requests,
            "certificate": args.out,
        }
        print(json.dumps(payload, indent=2))
    else:
        q1, q2 = cert.final_collision
        print(f"monochromatic line found in [3]^{cert.line.n} (r={cert.r}, mode={cert.mode})")
        print(f"final collision: ({q1},{q2}); shared colour {cert.shared_colour}")
        print("active intervals: " + ", ".join(f"[{lo},{hi}]" for lo, hi in cert.line.active))
        print(
            f"oracle calls: {cert.stats.unique_evaluations} unique, "
            f"{cert.stats.total_requests} total"
        )
        if args.out:
            print(f"certificate written to {args.out}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        cert = load_certificate(args.cert)
    except OSError as exc:
        raise ValueError(f"cannot read certificate {args.cert}: {exc}") from None
    report = verify_certificate(cert, spec_override=args.oracle)
    for check in report.checks:
        print(f"{check.status:<4} {check.name}: {check.detail}")
    if report.ok:
        print("certificate OK")
        return EXIT_OK
    print("certificate INVALID: " + ", ".join(report.failed()))
    return EXIT_VERIFY


def cmd_brute_lines(args: argparse.Namespace) -> int:
    count = 0
    for pattern in enumerate_lines(args.m, args.n, cap=args.cap):
        if args.list:
            print(pattern_to_text(pattern))
        count += 1
    print(f"{count} line patterns in [{args.m}]^{args.n}")
    return EXIT_OK


def cmd_brute_witness(args: argparse.Namespace) -> int:
    result = hj_lower_witness(args.m, args.n, args.r, node_budget=args.node_budget)
    if result.status == "found":
        print(f"line-free {args.r}-colouring of [{args.m}]^{args.n} found ({result.nodes} nodes)")
        if args.out:
            write_table(args.out, args.m, args.n, args.r, result.table)
            print(f"table written to {args.out}")
        return EXIT_OK
    if result.status == "none":
        print(f"no line-free {args.r}-colouring of [{args.m}]^{args.n} ({result.nodes} nodes)")
        return EXIT_OK
    raise BudgetExceededError(f"witness search exhausted {args.node_budget} nodes")


def cmd_brute_hj(args: argparse.Namespace) -> int:
    value = hj_number_exact(args.m, args.r, args.n_max, node_budget=args.node_budget)
    if value is None:
        print(f"HJ({args.m},{args.r}) > {args.n_max} (unknown up to n_max)")
    else:
        print(f"HJ({args.m},{args.r}) = {value}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    from . import report  # deferred: pulls in matplotlib

    try:
        cert = load_certificate(args.cert)
    except OSError as exc:
        raise ValueError(f"cannot read certificate {args.cert}: {exc}") from None
    paths = report.write_report(cert, args.out_dir)
    for path in paths:
        print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hjline",
        description="Find and verify monochromatic combinatorial lines in [3]^n.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="print a block structure and its colour-space sizes")
    p.add_argument("--r", type=int, required=True, help="number of colours")
    p.add_argument("--mode", choices=("paper", "minimal", "custom"), default="paper")
    p.add_argument("--sizes", help="comma-separated block sizes (custom mode)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("find-line", help="search for a monochromatic line and emit a certificate")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--mode", choices=("paper", "minimal", "custom"), default="paper")
    p.add_argument("--sizes", help="comma-separated block sizes (custom mode)")
    p.add_argument("--oracle", required=True, help="const:c | count | hash:seed | table:path | exec:cmd")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="unique-evaluation cap")
    p.add_argument("--seed", type=int, default=0, help="seed for internal spot checks")
    p.add_argument("--out", help="certificate output path")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_find_line)

    p = sub.add_parser("verify", help="re-check a certificate against its oracle")
    p.add_argument("--cert", required=True)
    p.add_argument("--oracle", help="override the oracle spec stored in the certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("brute", help="exhaustive small-scale searches")
    brute_sub = p.add_subparsers(dest="brute_command", required=True)

    b = brute_sub.add_parser("lines", help="enumerate line patterns of [m]^n")
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--cap", type=int, default=10**7)
    b.add_argument("--list", action="store_true", help="print each pattern")
    b.set_defaults(func=cmd_brute_lines)

    b = brute_sub.add_parser("witness", help="search for a line-free colouring")
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--r", type=int, required=True)
    b.add_argument("--node-budget", type=int, default=10**7)
    b.add_argument("--out", help="write the witness as an oracle table file")
    b.set_defaults(func=cmd_brute_witness)

    b = brute_sub.add_parser("hj", help="exact Hales-Jewett number by exhaustive search")
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--r", type=int, required=True)
    b.add_argument("--n-max", type=int, required=True)
    b.add_argument("--node-budget", type=int, default=10**7)
    b.set_defaults(func=cmd_brute_hj)

    p = sub.add_parser("report", help="render certificate figures and CSV tables")
    p.add_argument("--cert", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OracleSpecError) as exc:
        _log(f"error: {exc}")
        return EXIT_USAGE
    except NoCollisionError as exc:
        _log(f"no collision: {exc}")
        return EXIT_NO_COLLISION
    except BudgetExceededError as exc:
        _log(f"budget exceeded: {exc}")
        return EXIT_BUDGET
    except OracleError as exc:
        _log(f"oracle failure: {exc}")
        return EXIT_ORACLE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
