#!/usr/bin/env python3
"""Bump function around one vertex of the plane tessellation."""

import argparse

from plderham import generators as G
from plderham.bump import bump_function
from plderham.forms import support
from plderham.simplicial import complement_closure, minimal_neighborhood


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--radius", type=int, default=2)
    ap.add_argument("--vertex", default="0,0")
    ap.add_argument("--show", action="store_true", help="print the form")
    args = ap.parse_args()
    X = G.plane_tessellation(args.radius)
    v = X.ref(0, args.vertex)
    eps = minimal_neighborhood(X, [v])
    phi = bump_function(X, [v], eps)
    counts = [sum(1 for r in eps.members if r.dim == k) for k in range(3)]
    print(f"plane radius {args.radius}: simplices {X.counts()}")
    print(f"neighbourhood of {args.vertex}: {counts[2]} triangles, {counts[1]} edges, {counts[0]} vertices")
    print(f"phi = 1 at {args.vertex}: {phi[v].render() == '1'}")
    print(f"phi = 0 off the neighbourhood: {phi.vanishes_on(complement_closure(X, eps).members)}")
    print(f"support inside the neighbourhood: {support(phi).K.members <= eps.members}")
    print(f"max coefficient degree: {phi.degree}")
    if args.show:
        print(phi.render(), end="")


if __name__ == "__main__":
    main()
