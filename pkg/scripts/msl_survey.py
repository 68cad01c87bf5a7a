"""Histogram of the minimum spanning length of random generating pairs over
GF(p) for several (n, p)."""

import argparse
import json

from matgen.gentest import msl_survey


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ns", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--ps", type=int, nargs="+", default=[2, 3, 5])
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--seed", type=int, required=True)
    args = ap.parse_args()
    for n in args.ns:
        for p in args.ps:
            print(json.dumps(msl_survey(n, p, args.samples, args.seed).to_dict()), flush=True)


if __name__ == "__main__":
    main()
