"""tabntt command line: plan, preprocess, dft, multiply, bench, verify.

Exit codes: 0 ok, 2 planning failure, 3 table budget or capacity failure,
4 verification mismatch, 5 malformed table file.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import nttb
from .bench import VerificationError, run_bench, write_csv
from .bigmult import CapacityError, multiply
from .checks import run_suite
from .counts import OpCounts
from .ntt import LengthMismatchError, ntt_forward, ntt_inverse
from .planner import PlanError, make_mult_plan, make_plan
from .tables import preprocess

EXIT_OK, EXIT_PLAN, EXIT_PREPROCESS, EXIT_VERIFY, EXIT_FORMAT = 0, 2, 3, 4, 5


def _fail(code: int, msg) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


def _plan(args):
    return make_plan(args.n, args.budget_bits, args.seed, m=args.m)


def _tables(args):
    if args.tables:
        return nttb.read(args.tables)
    if args.n is None:
        raise PlanError("either --tables or --n is required")
    return preprocess(_plan(args))


def cmd_plan(args) -> int:
    plan = _plan(args)
    for key, value in plan.describe().items():
        print(f"{key}={value}")
    return EXIT_OK


def cmd_preprocess(args) -> int:
    if args.operand_bits:
        plan = make_mult_plan(args.operand_bits, args.budget_bits, args.seed, m=args.m)
    elif args.n is not None:
        plan = _plan(args)
    else:
        return _fail(EXIT_PLAN, "either --n or --operand-bits is required")
    ts = preprocess(plan)
    nttb.write(ts, args.out)
    print(f"wrote {args.out}: n={ts.plan.length_n} P={ts.plan.field_prime_P} table_bits={ts.total_bits()}")
    return EXIT_OK


def _read_ints(text: str) -> list[int]:
    return [int(tok, 0) for tok in text.replace(",", " ").split()]


def cmd_dft(args) -> int:
    ts = _tables(args)
    x = _read_ints(args.x if args.x is not None else sys.stdin.read())
    counters = OpCounts()
    fn = ntt_inverse if args.inverse else ntt_forward
    try:
        y = fn(np.array(x, dtype=np.int64), ts, args.mode, counters)
    except (LengthMismatchError, ValueError) as exc:
        return _fail(EXIT_PLAN, exc)
    print(" ".join(str(int(v)) for v in y))
    if args.counts:
        print(" ".join(f"{k}={v}" for k, v in counters.as_dict().items()), file=sys.stderr)
    return EXIT_OK


def cmd_multiply(args) -> int:
    a, b = int(args.a, 16), int(args.b, 16)
    if args.tables:
        ts = nttb.read(args.tables)
    else:
        bits = args.operand_bits or max(a.bit_length(), b.bit_length(), 1)
        ts = preprocess(make_mult_plan(bits, args.budget_bits, args.seed))
    print(hex(multiply(a, b, ts, mode=args.mode)))
    return EXIT_OK


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    modes = [m.strip() for m in args.modes.split(",")]
    try:
        records = run_bench(sizes, modes, args.seed, args.budget_bits, verify=args.verify)
    except VerificationError as exc:
        return _fail(EXIT_VERIFY, exc)
    if args.csv and args.csv != "-":
        write_csv(records, args.csv)
    else:
        write_csv(records, sys.stdout)
    return EXIT_OK


def cmd_verify(args) -> int:
    ts = nttb.read(args.tables)
    results = run_suite(ts, args.level, args.seed)
    for r in results:
        print(f"{'ok  ' if r.ok else 'FAIL'} {r.name}: {r.passed}/{r.total}")
    bad = [r.name for r in results if not r.ok]
    if bad:
        return _fail(EXIT_VERIFY, f"{len(bad)} check(s) failed: {', '.join(bad)}")
    print(f"all {len(results)} checks passed ({args.level})")
    return EXIT_OK


def _plan_flags(p, required=True):
    p.add_argument("--n", type=int, required=required, help="target transform length")
    p.add_argument("--m", type=int, help="force the base-case size")
    p.add_argument("--budget-bits", type=int, help="table budget in bits (default max(2^20, n))")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tabntt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="choose P, omega, R, m and the split tree")
    _plan_flags(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("preprocess", help="build every table and write an NTTB file")
    _plan_flags(p, required=False)
    p.add_argument("--operand-bits", type=int, help="plan for multiplying operands this wide instead of --n")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("dft", help="transform integers given with --x or on stdin")
    _plan_flags(p, required=False)
    p.add_argument("--tables")
    p.add_argument("--x", help="comma or space separated values")
    p.add_argument("--mode", choices=("direct", "lookup"), default="lookup")
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--counts", action="store_true", help="print operation counts to stderr")
    p.set_defaults(func=cmd_dft)

    p = sub.add_parser("multiply", help="product of two hex naturals")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--tables")
    p.add_argument("--operand-bits", type=int, help="size the plan for operands this wide")
    p.add_argument("--budget-bits", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=("direct", "lookup"), default="direct")
    p.set_defaults(func=cmd_multiply)

    p = sub.add_parser("bench", help="operation counts per (size, mode) as CSV")
    p.add_argument("--sizes", default="16,81,256")
    p.add_argument("--modes", default="direct,lookup")
    p.add_argument("--csv", help="output path (default stdout)")
    p.add_argument("--budget-bits", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verify", action="store_true", help="check every transform against the oracle")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="run the invariant suite on a table file")
    p.add_argument("--tables", required=True)
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PlanError as exc:
        return _fail(EXIT_PLAN, exc)
    except (OverflowError, CapacityError) as exc:  # includes TableBudgetError
        return _fail(EXIT_PREPROCESS, exc)
    except nttb.FormatError as exc:
        return _fail(EXIT_FORMAT, exc)


if __name__ == "__main__":
    sys.exit(main())
