"""Table of generating fractions over F_q (exact where enumerable) and of
2x2 integer box densities, written as CSV."""

import argparse
import sys

from matgen.density import fq_sweep, g2z_box_fraction, to_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ns", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--qs", type=int, nargs="+", default=[2, 3, 5, 7, 11])
    ap.add_argument("--ks", type=int, nargs="+", default=[2, 5, 10, 20])
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, required=True)
    ap.add_argument("--shards", type=int, default=1)
    ap.add_argument("--out", help="CSV path (stdout when omitted)")
    args = ap.parse_args()
    rows = fq_sweep(args.ns, args.qs, args.samples, args.seed)
    rows += [g2z_box_fraction(k, args.samples, args.seed, args.shards) for k in args.ks]
    text = to_csv(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


if __name__ == "__main__":
    main()
