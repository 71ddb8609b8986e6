"""For which moduli does conjugation by J' = diag([[0,1],[1,0]], I) map
Sp(2n, Z/m) into itself?  Checked on the generators, which is enough: the
map is a homomorphism of GL, so it preserves the group iff it sends every
generator into it.  The last line repeats the check over Z on the integral
transvections the quotient generators are reduced from."""

import argparse

from reidemeister import automorphisms as aut
from reidemeister.groups import (GroupFamily, is_member_integral, is_member_mod, quotient_generators,
                                 symplectic_transvection)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", default="4,6")
    ap.add_argument("--mmax", type=int, default=12)
    args = ap.parse_args()
    for dim in (int(d) for d in args.dims.split(",")):
        fam = GroupFamily("Sp", dim)
        for m in range(2, args.mmax + 1):
            gens = quotient_generators(fam, m)
            bad = sum(not is_member_mod(aut.theta.induced_mod(m)(x), fam) for x in gens)
            print(f"Sp({dim}, Z/{m}): {len(gens) - bad}/{len(gens)} generator images stay in the group")
        basis = [[int(r == i) for r in range(dim)] for i in range(dim)]
        vectors = basis + [[a + b for a, b in zip(basis[i], basis[j])]
                           for i in range(dim) for j in range(i + 1, dim)]
        ts = [symplectic_transvection(v, fam.form) for v in vectors]
        ok = sum(is_member_integral(aut.theta(t), fam) for t in ts)
        print(f"Sp({dim}, Z): {ok}/{len(ts)} integral transvection images stay in the group")
        Jp = aut.swap_matrix(dim)
        print(f"  J'^T J0 J' = {(Jp.T @ fam.form @ Jp).tolist()}")


if __name__ == "__main__":
    main()
