"""Class counts R(phi), R(phi on G/N), R(phi on N) for the two test extensions."""

import argparse
import json

import numpy as np

from reidemeister import automorphisms as aut
from reidemeister.extensions import build_extension, fiber_bounds_check
from reidemeister.groups import GroupFamily, build_quotient
from reidemeister.matrices import ModMatrix


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--gammas", type=int, default=3, help="random inner automorphisms per extension")
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    sl23 = build_quotient(GroupFamily("SL", 2), 3)
    gl23 = build_quotient(GroupFamily("GL", 2), 3)
    one = ModMatrix.identity(2, 3)
    cases = {
        "SL(2,3) / centre": build_extension(sl23, lambda x: x in (one, -one)),
        "GL(2,3) / SL(2,3)": build_extension(gl23, lambda x: x.det() == 1),
    }
    for name, e in cases.items():
        maps = [aut.identity, aut.tau]
        maps += [aut.Inner(e.total.element(int(i))) for i in rng.integers(0, len(e.total), args.gammas)]
        for phi in maps:
            row = {"extension": name, "automorphism": phi.descriptor, **fiber_bounds_check(e, phi).to_dict()}
            print(json.dumps(row))


if __name__ == "__main__":
    main()
