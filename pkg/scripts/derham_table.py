#!/usr/bin/env python3
"""De Rham comparison over the built-in corpus: Betti numbers on both sides and verdicts."""

import argparse
import time

from plderham import generators as G
from plderham.derham import derham_check

CORPUS = ["simplex:0", "simplex:1", "simplex:2", "simplex:3", "boundary:2", "boundary:3",
          "circle:1", "circle:4", "cylinder:3,1", "torus:1,1", "torus:2,2", "torus:3,3"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--extra-degree", type=int, default=0, help="use D = dim X + this")
    ap.add_argument("spaces", nargs="*", default=CORPUS)
    args = ap.parse_args()
    print(f"{'space':<16} {'D':>2}  {'A (D)':<12} {'A (D+1)':<12} {'NC':<12} iso  stable  mult  secs")
    for spec in args.spaces:
        X = G.from_spec(spec)
        t0 = time.perf_counter()
        D = max(X.dim, 1) + args.extra_degree
        r = derham_check(X, D)
        m = "-" if r.multiplicative is None else ("yes" if r.multiplicative else "no")
        print(f"{spec:<16} {D:>2}  {str(r.betti_forms):<12} {str(r.betti_forms_next):<12} "
              f"{str(r.betti_cochains):<12} {'yes' if r.isomorphism else 'no':<4} "
              f"{'yes' if r.stabilized else 'no':<7} {m:<5} {time.perf_counter() - t0:.2f}")


if __name__ == "__main__":
    main()
