"""Command-line front end: solve, verify, kernelize and bench."""

from __future__ import annotations

import argparse
import json
import statistics
import sys
import time

from .five import solve_k5
from .kernel import kernelize
from .model import (
    ContractError,
    InstanceMatrix,
    InternalError,
    UsageError,
    dist_to_collection,
)
from .oracle import DEFAULT_CAP, brute_force_msc, random_instance

EXIT_OK, EXIT_MISMATCH, EXIT_PARSE, EXIT_CONTRACT, EXIT_INTERNAL = 0, 1, 2, 3, 4


class ParseError(UsageError):
    pass


def _ints(line, lineno):
    try:
        return [int(tok) for tok in line.split()]
    except ValueError as exc:
        raise ParseError(f"line {lineno}: {exc}") from None


def parse_instance(text):
    """Line 1 is ``k ell``; then k lines of ell integers.  One trailing newline is allowed."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty input")
    header = _ints(lines[0], 1)
    if len(header) != 2:
        raise ParseError("line 1 must be 'k ell'")
    k, ell = header
    if k < 1 or ell < 0:
        raise ParseError(f"bad dimensions k={k} ell={ell}")
    if len(lines) != k + 1:
        raise ParseError(f"expected {k} sequence lines, found {len(lines) - 1}")
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        row = _ints(line, i)
        if len(row) != ell:
            raise ParseError(f"line {i}: expected {ell} integers, found {len(row)}")
        rows.append(row)
    return InstanceMatrix(rows)


def format_instance(A):
    out = [f"{A.k} {A.ell}"]
    out.extend(" ".join(map(str, row)) for row in A.values.tolist())
    return "\n".join(out) + "\n"


def format_solution(opt, x):
    return f"{opt}\n" + (" ".join(map(str, x)) + "\n" if len(x) else "")


def parse_solution(text):
    lines = text.split("\n")
    if not lines or not lines[0].strip():
        raise ParseError("solution needs an OPT line")
    opt = _ints(lines[0], 1)
    if len(opt) != 1:
        raise ParseError("line 1 of a solution must hold one integer")
    x = _ints(lines[1], 2) if len(lines) > 1 else []
    return opt[0], x


def _read(path):
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(str(exc)) from None


def cmd_solve(args, out):
    A = parse_instance(_read(args.input))
    t0 = time.perf_counter_ns()
    if args.oracle:
        sol = brute_force_msc(A, max_states=args.max_oracle_states)
    else:
        sol = solve_k5(A, kernel=not args.no_kernel)
    elapsed = time.perf_counter_ns() - t0
    if dist_to_collection(sol.x, A) != sol.opt:
        raise InternalError("returned witness does not attain the returned optimum")
    if args.json:
        payload = {
            "opt": sol.opt,
            "x": list(sol.x),
            "kernel_length": sol.kernel_length,
            "winning_system": sol.winning_system,
            "elapsed_ns": elapsed,
        }
        out.write(json.dumps(payload) + "\n")
    else:
        out.write(format_solution(sol.opt, sol.x))
    return EXIT_OK


def cmd_verify(args, out):
    A = parse_instance(_read(args.input))
    opt, x = parse_solution(_read(args.solution))
    if len(x) != A.ell:
        out.write(f"invalid: witness has length {len(x)}, expected {A.ell}\n")
        return EXIT_MISMATCH
    achieved = dist_to_collection(x, A)
    best = solve_k5(A).opt
    if achieved != opt:
        out.write(f"invalid: witness attains {achieved}, claimed {opt}\n")
        return EXIT_MISMATCH
    if opt != best:
        out.write(f"suboptimal: claimed {opt}, optimum is {best}\n")
        return EXIT_MISMATCH
    out.write(f"ok: {opt}\n")
    return EXIT_OK


def cmd_kernelize(args, out):
    A = parse_instance(_read(args.input))
    kernel, cmap = kernelize(A)
    text = format_instance(kernel)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    if args.json:
        out.write(json.dumps({"ell": A.ell, "kernel_length": kernel.ell, "group_sizes": cmap.sizes()}) + "\n")
    else:
        if not args.output:
            out.write(text)
        sys.stderr.write(f"kernel {A.ell} -> {kernel.ell} columns; group sizes {cmap.sizes()}\n")
    return EXIT_OK


def _time_solve(A, kernel, repetitions):
    times, sol = [], None
    for _ in range(repetitions):
        t0 = time.perf_counter()
        sol = solve_k5(A, kernel=kernel)
        times.append(time.perf_counter() - t0)
    return statistics.median(times), sol


def bench(k, ell, M, seed, repetitions, scaling=False):
    """Median wall times with and without kernelization; generation is not timed."""
    A = random_instance(k, ell, M, seed)
    t_kernel, sol = _time_solve(A, True, repetitions)
    t_plain, plain = _time_solve(A, False, repetitions)
    if sol.opt != plain.opt:
        raise InternalError("kernelized and plain solves disagree")
    report = {
        "k": k,
        "ell": ell,
        "M": M,
        "seed": seed,
        "repetitions": repetitions,
        "opt": sol.opt,
        "kernel_length": sol.kernel_length,
        "seconds_kernel": t_kernel,
        "seconds_no_kernel": t_plain,
    }
    if scaling:
        B = random_instance(k, 2 * ell, M, seed)
        t_double, _ = _time_solve(B, True, repetitions)
        report["seconds_kernel_double_ell"] = t_double
        report["scaling_ratio"] = t_double / t_kernel if t_kernel > 0 else None
    return report


def cmd_bench(args, out):
    report = bench(args.k, args.ell, args.M, args.seed, args.repetitions, args.scaling)
    if args.json:
        out.write(json.dumps(report) + "\n")
    else:
        for key, value in report.items():
            out.write(f"{key}: {value:.6f}\n" if isinstance(value, float) else f"{key}: {value}\n")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="msc", description="Exact Manhattan sequence consensus for k <= 5.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="print OPT and a consensus sequence")
    p.add_argument("input", help="instance file, '-' for stdin")
    p.add_argument("--oracle", action="store_true", help="use the brute-force search instead")
    p.add_argument("--no-kernel", action="store_true", help="skip the column-merge kernel")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-oracle-states", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a solution file against an instance")
    p.add_argument("input")
    p.add_argument("solution")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("kernelize", help="write the column-merge kernel of an instance")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("bench", help="time random instances with and without the kernel")
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--ell", type=int, default=10**6)
    p.add_argument("--M", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--scaling", action="store_true", help="also time 2*ell and report the ratio")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except ContractError as exc:
        sys.stderr.write(f"msc: contract violation: {exc}\n")
        return EXIT_CONTRACT
    except UsageError as exc:
        sys.stderr.write(f"msc: {exc}\n")
        return EXIT_PARSE
    except InternalError as exc:
        sys.stderr.write(f"msc: internal error: {exc}\n")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
