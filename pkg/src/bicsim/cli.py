"""Command-line front end.

Exit status is 0 on success, 2 on usage errors, and otherwise the
``exit_code`` of the failing error class (see ``bicsim.errors``); I/O
failures exit with 14.  Errors are printed to stderr as
``error: <CODE>: <message>``.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import power
from .errors import IO_EXIT_CODE, BicError
from .fileformat import BatchFile, generate, read_indexes, write_indexes
from .indexer import eval_query
from .multicore import Policy
from .pipeline import Timing
from .query import parse_query
from .report import CURVES, comparison_csv, curve_csv, run_workload


def cmd_gen(args) -> int:
    bf = generate(args.seed, args.m, args.n, args.w, args.batches,
                  alphabet=args.alphabet, valid_fraction=args.valid_fraction)
    bf.write(args.out)
    return 0


def cmd_index(args) -> int:
    bf = BatchFile.read(args.input)
    technique = power.Technique(args.technique)
    v_bb = args.vbb
    if v_bb is None:
        v_bb = 0.0 if technique is power.Technique.CG_ONLY else -2.0
    bias = power.BiasConfig(v_dd=args.vdd, v_bb=v_bb)
    report, indexes = run_workload(bf, cores=args.cores, policy=args.policy, timing=args.timing,
                                   bias=bias, technique=technique)
    text = json.dumps(report, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.index_out:
        write_indexes(args.index_out, indexes)
    return 0


def cmd_query(args) -> int:
    indexes = read_indexes(args.index)
    if not 0 <= args.batch < len(indexes):
        print(f"error: E_BOUNDS: batch {args.batch} not in index file "
              f"({len(indexes)} indexes)", file=sys.stderr)
        return 4
    bi = indexes[args.batch]
    bits = eval_query(bi, parse_query(args.expr, bi.m))
    print("".join(map(str, bits)))
    return 0


def cmd_curves(args) -> int:
    text = curve_csv(args.kind)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_table(args) -> int:
    sys.stdout.write(comparison_csv())
    ratio = power.standby_reduction()
    print(f"# standby reduction cg/cg_rbb at 0.4 V: computed {ratio:.1f}x, "
          f"stated {power.STATED_STANDBY_REDUCTION:,}x")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bicsim", description="Bitmap index creation core simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a random batch file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--m", type=int, default=8, help="keys per batch")
    p.add_argument("--n", type=int, default=16, help="records per batch")
    p.add_argument("--w", type=int, default=32, help="words per record")
    p.add_argument("--batches", type=int, default=1)
    p.add_argument("--alphabet", type=int, default=256, help="draw words and keys from [0, alphabet)")
    p.add_argument("--valid-fraction", type=float, default=1.0)
    p.add_argument("-o", "--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("index", help="index a batch file and report cycles and energy")
    p.add_argument("input")
    p.add_argument("--timing", choices=[t.value for t in Timing], default=Timing.SEQUENTIAL.value)
    p.add_argument("--cores", type=int, default=1)
    p.add_argument("--policy", choices=[x.value for x in Policy], default=Policy.FIRST_FREE.value)
    p.add_argument("--vdd", type=float, default=1.2)
    p.add_argument("--vbb", type=float, default=None,
                   help="back-gate bias; defaults to -2 V with cg_rbb and 0 V with cg")
    p.add_argument("--technique", choices=[t.value for t in power.Technique],
                   default=power.Technique.CG_RBB.value)
    p.add_argument("-o", "--out", help="report path (default stdout)")
    p.add_argument("--index-out", help="also write the bitmap indexes here")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("query", help="evaluate a boolean query against an index file")
    p.add_argument("index")
    p.add_argument("expr")
    p.add_argument("--batch", type=int, default=0)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("curves", help="write characterization curves as CSV")
    p.add_argument("--kind", choices=CURVES, required=True)
    p.add_argument("-o", "--out")
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("table", help="print the standby power per bit comparison")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BicError as e:
        print(f"error: {e.code}: {e}", file=sys.stderr)
        return e.exit_code
    except OSError as e:
        print(f"error: E_IO: {e}", file=sys.stderr)
        return IO_EXIT_CODE


if __name__ == "__main__":
    sys.exit(main())
