"""Index of the ring generated by (X, Y) + (X, kX + Y) inside M_n(ZZ)^2 as k varies."""

import argparse
import json

from matgen.gentest import subring_index
from matgen.presentations import modular_blocks


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--kmax", type=int, default=6)
    args = ap.parse_args()
    for k in range(args.kmax + 1):
        idx = subring_index(modular_blocks(args.n, [("I", 0), ("I", k)]))
        print(json.dumps({"n": args.n, "k": k, "index": None if idx is None else str(idx)}))


if __name__ == "__main__":
    main()
