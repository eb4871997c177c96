#!/usr/bin/env python3
"""Betti numbers of the truncated form complexes as the degree bound D grows."""

import argparse

from plderham import generators as G
from plderham.cochains import cohomology, normalized_cochains
from plderham.forms import TruncatedComplex


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-extra", type=int, default=2)
    ap.add_argument("spaces", nargs="*", default=["simplex:2", "boundary:3", "circle:3", "torus:2,2"])
    args = ap.parse_args()
    for spec in args.spaces:
        X = G.from_spec(spec)
        nc = cohomology(normalized_cochains(X)).betti
        print(f"{spec}: NC {nc}")
        for D in range(1, X.dim + args.max_extra + 1):
            T = TruncatedComplex(X, D)
            print(f"  D={D}: dims {T.dims}  betti {cohomology(T.complex).betti}")


if __name__ == "__main__":
    main()
