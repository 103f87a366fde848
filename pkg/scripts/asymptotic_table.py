#!/usr/bin/env python3
"""Tabulate exact stack counts against the circle-method main term.

Prints an aligned table (n, exact count, estimate, relative error) and can
write the same rows as CSV for plotting.  The exact column comes from the
generating function, so large n values in --values dominate the runtime.
"""

import argparse
import sys

from congruence_stacks.asymptotics import comparison_table, records_to_csv
from congruence_stacks.params import StackParams


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("-r", "--residue", type=int, default=1)
    parser.add_argument("-m", "--modulus", type=int, default=3)
    parser.add_argument(
        "--values",
        default="10,50,100,500,1000,5000,10000",
        help="comma-separated n values",
    )
    parser.add_argument("--precision", type=int, default=50, help="working digits")
    parser.add_argument("--csv", metavar="PATH", help="also write rows as CSV")
    args = parser.parse_args(argv)

    try:
        params = StackParams.from_residue(args.residue, args.modulus)
        ns = sorted({int(v) for v in args.values.split(",") if v.strip()})
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    records = comparison_table(params, ns, dps=args.precision)
    print(f"family {params}")
    print(f"{'n':>7}  {'exact':>28}  {'estimate':>14}  {'rel error':>12}")
    for rec in records:
        exact = str(rec.exact)
        if len(exact) > 28:
            exact = exact[:25] + "..."
        print(
            f"{rec.n:>7}  {exact:>28}  {rec.estimate.format(6):>14}  "
            f"{float(rec.relative_error):>12.3e}"
        )
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(records_to_csv(records))
        print(f"wrote {args.csv}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
