"""Find the degree bound at which each identity of the n = 4, 5 shortening
chains gets a membership certificate.  Memory grows roughly 4x per step of 2
in L; L = 20 needs a few GB for n = 5."""

import argparse
import json
import time

from matgen.presentations import BoundedIdeal, said45_chain, standard_relators


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=5, choices=[4, 5])
    ap.add_argument("--L", type=int, nargs="+", default=[10, 12, 14, 16])
    args = ap.parse_args()
    spec = standard_relators(args.n, "said45")
    chain = said45_chain(args.n)
    for L in args.L:
        t0 = time.time()
        ideal = BoundedIdeal(spec, L, cap=max(args.L))
        found = {}
        for name, f in chain.items():
            if f.degree > L:
                found[name] = "degree too high"
                continue
            cert = ideal.membership(f)
            found[name] = cert is not None and cert.verify(spec.relators)
        row = {"n": args.n, "L": L, "ideal_rank": ideal.rank, "seconds": round(time.time() - t0, 1), "certified": found}
        print(json.dumps(row), flush=True)


if __name__ == "__main__":
    main()
