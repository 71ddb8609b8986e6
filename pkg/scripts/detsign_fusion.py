"""Compare the det-sign twisted classes of GL(2, Z/3) with the unions C(x) u C(-x)."""

import numpy as np

from reidemeister import automorphisms as aut
from reidemeister.groups import GroupFamily, build_quotient
from reidemeister.orbits import twisted_partition


def main():
    g = build_quotient(GroupFamily("GL", 2), 3)
    twisted = twisted_partition(g, aut.CharacterTwist(aut.DetSign()))
    conj = twisted_partition(g, aut.identity).class_of
    neg = g.lookup(np.stack([(-g.element_array(i)) % 3 for i in range(len(g))]))
    print(f"R(twist) = {twisted.reidemeister_number}, conjugacy classes = {conj.max() + 1}")
    for c, r in enumerate(twisted.representatives):
        members = set(twisted.members(c).tolist())
        fused = set(np.flatnonzero((conj == conj[r]) | (conj == conj[neg[r]])).tolist())
        x = g.element(int(r))
        print(f"class {c}: rep {x.tolist()} det {x.det()} size {len(members)} "
              f"|C(x) u C(-x)| = {len(fused)} {'equal' if members == fused else 'proper subset'}")


if __name__ == "__main__":
    main()
