"""Command-line entry point: build, verify, resources, shor.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import sys
from math import gcd
from pathlib import Path

import numpy as np

from . import circuit_io
from .classical import is_prime
from .errors import NoInverse, QSAError, TooWide
from .resources import DEFAULT, TARGET_WIDTH, format_table, report_tables, rows_to_json
from .sim.shor import classical_shortcut, factor, run_shor
from .verify import BLOCKS, ENGINES, verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3

# parameters each block needs
_NEEDS = {
    "qft": ("width",),
    "phiadd": ("width", "k"),
    "cphiadd": ("width", "k"),
    "ccphiadd": ("width", "k"),
    "phiadd_generic": ("width",),
    "phimac": ("n", "a"),
    "phimac_cascade": ("n", "a"),
    "gmphidiv": ("n", "d"),
    "phimacmod": ("n", "a", "N"),
    "phimulmod": ("n", "a", "N"),
    "modexp": ("n", "a", "N"),
}


class UsageError(Exception):
    pass


def _block_params(args: argparse.Namespace) -> dict:
    params = {}
    for name in _NEEDS[args.block]:
        value = getattr(args, name)
        if value is None:
            raise UsageError(f"block {args.block} needs --{name}")
        params[name] = value
    if args.cutoff is not None:
        params["cutoff"] = args.cutoff
    params["mode"] = args.mode
    params["version"] = args.version
    return params


def _build_circuit(args: argparse.Namespace):
    from .adders import build_ccphi_add_const, build_cphi_add_const, build_phi_add_const, build_phi_add_generic, build_qft
    from .divider import build_gmphidiv
    from .mac import build_phimac, build_phimac_cascade
    from .modmul import build_modexp, build_phimac_mod, build_phimul_mod

    p = _block_params(args)
    b = args.block
    if b == "qft":
        return build_qft(p["width"], p.get("cutoff"))
    if b == "phiadd":
        return build_phi_add_const(p["width"], p["k"])
    if b == "cphiadd":
        return build_cphi_add_const(p["width"], p["k"])
    if b == "ccphiadd":
        return build_ccphi_add_const(p["width"], p["k"])
    if b == "phiadd_generic":
        return build_phi_add_generic(list(range(p["width"])), p["width"])
    if b == "phimac":
        return build_phimac(p["n"], p["a"])
    if b == "phimac_cascade":
        return build_phimac_cascade(p["n"], p["a"])
    if b == "gmphidiv":
        return build_gmphidiv(p["n"], p["d"], p["mode"])
    builder = {"phimacmod": build_phimac_mod, "phimulmod": build_phimul_mod, "modexp": build_modexp}[b]
    return builder(p["n"], p["a"], p["N"], p["version"])


def cmd_build(args: argparse.Namespace) -> int:
    c = _build_circuit(args)
    text = circuit_io.dumps(c)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(f"width {c.width} gates {len(c.gates)}", file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    params = _block_params(args)
    if args.random is not None and args.random < 1:
        raise UsageError("--random needs a positive case count")
    k = None if args.exhaustive else (args.random if args.random is not None else 100)
    report = verify(args.block, params, args.engine, k, args.seed, args.jobs)
    status = "pass" if report.passed else "FAIL"
    print(f"{status}: {args.block} {report.cases} cases, {len(report.failures)} failures ({args.engine})")
    for f in report.failures[:10]:
        print(f"  input {f.inputs} expected {f.expected} got {f.got}")
    return EXIT_OK if report.passed else EXIT_FAIL


def _parse_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    try:
        start = int(lo)
        stop = int(hi) if sep else start
    except ValueError:
        raise UsageError(f"--n expects N or A..B, got {text!r}") from None
    if start < 2 or stop < start:
        raise UsageError("--n range must satisfy 2 <= A <= B")
    return range(start, stop + 1)


def cmd_resources(args: argparse.Namespace) -> int:
    rows = report_tables(_parse_range(args.n), args.version, jobs=args.jobs)
    table = format_table(rows)
    print(f"version {args.version}, target width {TARGET_WIDTH[args.version](1) - 2}n+2, convention {DEFAULT}")
    print(table)
    if args.out:
        Path(args.out).write_text(rows_to_json(rows) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_shor(args: argparse.Namespace) -> int:
    N = args.N
    rng = np.random.default_rng(args.seed)
    if N < 4:
        raise UsageError("N must be at least 4")
    if is_prime(N):
        print(f"{N} is prime")
        return EXIT_FAIL
    quick = classical_shortcut(N)
    if quick:
        print(f"classical: {N} = {quick[0]} * {quick[1]}")
        return EXIT_OK
    if args.a is not None:
        if not 1 < args.a < N:
            raise UsageError("--a must satisfy 1 < a < N")
        g = gcd(args.a, N)
        if g != 1:
            print(f"gcd({args.a}, {N}) = {g}: factors {min(g, N // g)} {max(g, N // g)}")
            return EXIT_OK
        for attempt in range(args.attempts):
            out = run_shor(N, args.a, rng)
            print(f"attempt {attempt}: a={out.a} y={out.measured_bits} r={out.period_candidate}")
            if out.factors:
                print(f"factors {out.factors[0]} {out.factors[1]}")
                return EXIT_OK
        print("no factors found")
        return EXIT_FAIL
    factors, log = factor(N, rng, args.attempts)
    for i, out in enumerate(log):
        print(f"attempt {i}: a={out.a} y={out.measured_bits} r={out.period_candidate}")
    if factors:
        print(f"factors {factors[0]} {factors[1]}")
        return EXIT_OK
    print("no factors found")
    return EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsa", description="QFT-based modular arithmetic circuits")
    sub = parser.add_subparsers(dest="command", required=True)

    def block_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("block", choices=BLOCKS)
        p.add_argument("--width", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--cutoff", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--a", type=int)
        p.add_argument("--N", type=int)
        p.add_argument("--d", type=int)
        p.add_argument("--mode", choices=("generic", "constrained"), default="constrained")
        p.add_argument("--version", type=int, choices=(1, 2), default=2)

    p = sub.add_parser("build", help="write a circuit in text format")
    block_args(p)
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="sweep a block against its classical oracle")
    block_args(p)
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--exhaustive", action="store_true")
    grp.add_argument("--random", type=int, metavar="K")
    p.add_argument("--engine", choices=ENGINES, default="structured")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("resources", help="depth/cost/width tables against target formulas")
    p.add_argument("--version", type=int, choices=(1, 2), default=2)
    p.add_argument("--n", default="4..8", help="N or A..B")
    p.add_argument("--out", help="write JSON rows here")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_resources)

    p = sub.add_parser("shor", help="factor N with the semiclassical order-finding driver")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--a", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--attempts", type=int, default=20)
    p.set_defaults(func=cmd_shor)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TooWide as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except NoInverse as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QSAError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
