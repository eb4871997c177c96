#!/usr/bin/env python3
"""Run both Mayer-Vietoris checks on every named instance."""

import argparse

from plderham.bump import HypothesisError
from plderham.mv import V1_INSTANCES, V2_INSTANCES, mv_v1, mv_v2


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-D", "--degree", type=int, default=3)
    ap.add_argument("--structured", action="store_true")
    args = ap.parse_args()
    fmt = "structured" if args.structured else "text"
    for name, make in V1_INSTANCES.items():
        print(f"### v1 {name}")
        print(mv_v1(*make(), D=args.degree).render(fmt))
    for name, make in V2_INSTANCES.items():
        print(f"### v2 {name}")
        try:
            print(mv_v2(make(), D=args.degree).render(fmt))
        except HypothesisError as e:
            print(f"rejected: {e}\n")


if __name__ == "__main__":
    main()
