"""Search for moduli separating witness pairs under tau (A family) and sigma (X family).

Prints one JSON certificate per pair.  SL(3, Z/7) has about 5.6 million
elements; building it needs roughly 2.5 GB and 40 s.
"""

import argparse
import json
import time

from reidemeister import automorphisms as aut
from reidemeister.witnesses import certify_distinct, clear_caches


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", default="2,3")
    ap.add_argument("--kmax", type=int, default=4)
    ap.add_argument("--moduli", default="3,5,7,11")
    ap.add_argument("--element-cap", type=int, default=6_000_000)
    ap.add_argument("--family", choices=("A", "X"), default="A")
    args = ap.parse_args()

    phi = aut.tau if args.family == "A" else aut.sigma
    moduli = [int(m) for m in args.moduli.split(",")]
    start = time.perf_counter()
    for n in (int(d) for d in args.dims.split(",")):
        for k in range(1, args.kmax + 1):
            for l in range(k + 1, args.kmax + 1):
                cert = certify_distinct(args.family, phi, n, k, l, moduli, element_cap=args.element_cap)
                print(cert.to_json(), flush=True)
        clear_caches()
    print(f"# {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
