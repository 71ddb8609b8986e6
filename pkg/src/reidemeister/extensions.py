"""Finite extensions 1 -> N -> G -> G/N -> 1 and the class-count bounds between them.

The quotient is kept as coset tables on element indices rather than as a
matrix group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .automorphisms import Automorphism, Inner, identity, image_indices, subgroup_indices, validate_automorphism
from .errors import InvalidAutomorphism, NotASubgroup, NotInvariant, NotNormal
from .groups import FiniteMatrixGroup
from .matrices import ModMatrix
from .orbits import orbit_labels, partitions_equal, twisted_partition


@dataclass
class FiniteExtension:
    total: FiniteMatrixGroup
    kernel: np.ndarray  # sorted element indices of N
    kernel_generators: np.ndarray
    coset_of: np.ndarray  # element index -> coset id
    coset_reps: np.ndarray  # coset id -> smallest element index in the coset

    @property
    def kernel_size(self) -> int:
        return len(self.kernel)

    @property
    def index(self) -> int:
        return len(self.coset_reps)

    @cached_property
    def quotient_table(self) -> np.ndarray:
        """Multiplication table on coset ids."""
        Q = self.index
        a, b = np.divmod(np.arange(Q * Q, dtype=np.int64), Q)
        prod = self.total.mul(self.coset_reps[a], self.coset_reps[b])
        return self.coset_of[prod].reshape(Q, Q)

    def in_kernel(self) -> np.ndarray:
        mask = np.zeros(len(self.total), dtype=bool)
        mask[self.kernel] = True
        return mask


def _generating_subset(g: FiniteMatrixGroup, members: np.ndarray) -> np.ndarray:
    """Greedy generating set for the subgroup formed by ``members``."""
    gens: list[int] = []
    span = np.array([g.identity_index], dtype=np.int64)
    for x in members:
        if not np.isin(x, span):
            gens.append(int(x))
            span = subgroup_indices(g, gens)
            if len(span) == len(members):
                break
    return np.array(gens, dtype=np.int64)


def build_extension(g: FiniteMatrixGroup, kernel_predicate: Callable[[ModMatrix], bool]) -> FiniteExtension:
    """Kernel = elements satisfying the predicate; subgroup and normality are checked."""
    kernel = np.array([i for i in range(len(g)) if kernel_predicate(g.element(i))], dtype=np.int64)
    mask = np.zeros(len(g), dtype=bool)
    mask[kernel] = True
    if not mask[g.identity_index]:
        raise NotASubgroup("kernel does not contain the identity")
    bad_inv = kernel[~mask[g.inverse_index[kernel]]]
    if len(bad_inv):
        x = g.element(bad_inv[0])
        raise NotASubgroup(f"inverse of {x.tolist()} is not in the kernel", (x, None))
    gens = _generating_subset(g, kernel)
    if len(subgroup_indices(g, gens)) != len(kernel):
        raise NotASubgroup("kernel is not closed under multiplication")
    for s in g.generators:
        conj = g.mul(g.mul(s, kernel), g.inverse_index[s])
        off = np.flatnonzero(~mask[conj])
        if len(off):
            raise NotNormal(f"conjugate of {g.element(kernel[off[0]]).tolist()} by generator "
                            f"{g.element(s).tolist()} leaves the kernel",
                            (g.element(s), g.element(kernel[off[0]])))
    # cosets x N: join x with x h for kernel generators h
    moves = [g.mul(np.arange(len(g)), h) for h in gens]
    coset_of = orbit_labels(len(g), moves)
    _, reps = np.unique(coset_of, return_index=True)
    ext = FiniteExtension(g, kernel, gens, coset_of, reps.astype(np.int64))
    if ext.index * ext.kernel_size != len(g):
        raise NotASubgroup("cosets do not have kernel size")
    return ext


@dataclass
class DescendedMaps:
    total: np.ndarray  # phi on element indices
    kernel: np.ndarray  # phi restricted to N, on element indices of N
    quotient: np.ndarray  # induced map on coset ids


def restrict_and_descend(e: FiniteExtension, phi: Automorphism, seed: int = 0) -> DescendedMaps:
    g = e.total
    report = validate_automorphism(phi, g, seed=seed)
    if not report.ok:
        raise InvalidAutomorphism(report)
    img = image_indices(phi, g)
    mask = e.in_kernel()
    moved = e.kernel[~mask[img[e.kernel]]]
    if len(moved):
        raise NotInvariant(f"phi moves {g.element(moved[0]).tolist()} out of the kernel", g.element(moved[0]))
    quotient = e.coset_of[img[e.coset_reps]]
    if np.any(e.coset_of[img] != quotient[e.coset_of]):
        raise NotInvariant("induced map on cosets is not well defined")
    kernel_map = img[e.kernel]
    # phi(N) = N is checked above; the restriction inherits the homomorphism property
    if len(np.unique(kernel_map)) != e.kernel_size or len(np.unique(quotient)) != e.index:
        raise NotInvariant("restricted or induced map is not bijective")
    Qt = e.quotient_table
    if np.any(quotient[Qt] != Qt[quotient[:, None], quotient[None, :]]):
        raise NotInvariant("induced map on the quotient is not a homomorphism")
    return DescendedMaps(img, kernel_map, quotient)


def quotient_twisted_labels(e: FiniteExtension, maps: DescendedMaps) -> np.ndarray:
    """Twisted classes of the induced map on G/N, as labels on coset ids."""
    g = e.total
    moves = []
    for s in g.generators:
        right = g.inverse_index[maps.total[s]]
        prod = g.mul(g.mul(s, e.coset_reps), right)
        moves.append(e.coset_of[prod])
    return orbit_labels(e.index, moves)


def kernel_twisted_labels(e: FiniteExtension, maps: DescendedMaps) -> np.ndarray:
    """Twisted classes of the restriction to N, as labels on positions in ``e.kernel``."""
    g = e.total
    moves = []
    for h in e.kernel_generators:
        right = g.inverse_index[maps.total[h]]
        prod = g.mul(g.mul(h, e.kernel), right)
        moves.append(np.searchsorted(e.kernel, prod))
    return orbit_labels(e.kernel_size, moves)


@dataclass
class BoundsReport:
    R_total: int
    R_quotient: int
    R_kernel: int
    kernel_size: int
    index: int
    max_fiber_eta: int
    max_fiber_j: int
    eta_well_defined: bool
    eta_surjective: bool
    j_well_defined: bool

    @property
    def bounds_hold(self) -> bool:
        return (self.eta_well_defined and self.eta_surjective and self.j_well_defined
                and self.R_quotient <= self.R_total <= self.kernel_size * self.R_quotient
                and self.R_kernel <= self.index * self.R_total
                and self.max_fiber_eta <= self.kernel_size
                and self.max_fiber_j <= self.index)

    def to_dict(self) -> dict:
        return {
            "R_total": self.R_total, "R_quotient": self.R_quotient, "R_kernel": self.R_kernel,
            "kernel_size": self.kernel_size, "index": self.index,
            "max_fiber_eta": self.max_fiber_eta, "max_fiber_j": self.max_fiber_j,
            "bounds_hold": self.bounds_hold,
        }


def _class_map(src_labels: np.ndarray, dst_labels: np.ndarray):
    """Induced map on labels; returns (well_defined, image per source class)."""
    pairs = np.unique(np.stack([src_labels, dst_labels], axis=1), axis=0)
    well_defined = len(pairs) == len(np.unique(src_labels))
    image = np.empty(src_labels.max() + 1, dtype=np.int64)
    image[pairs[:, 0]] = pairs[:, 1]
    return well_defined, image


def fiber_bounds_check(e: FiniteExtension, phi: Automorphism, seed: int = 0) -> BoundsReport:
    maps = restrict_and_descend(e, phi, seed)
    total = twisted_partition(e.total, phi, validate=False).class_of
    quot = quotient_twisted_labels(e, maps)
    kern = kernel_twisted_labels(e, maps)
    R_total, R_quot, R_kern = total.max() + 1, quot.max() + 1, kern.max() + 1
    # eta~: [x] -> [xN]
    eta_ok, eta = _class_map(total, quot[e.coset_of])
    eta_fibers = np.bincount(eta, minlength=R_quot)
    # j~: [h]_N -> [h]_G
    j_ok, j = _class_map(kern, total[e.kernel])
    j_fibers = np.bincount(j, minlength=R_total)
    return BoundsReport(
        R_total=int(R_total), R_quotient=int(R_quot), R_kernel=int(R_kern),
        kernel_size=e.kernel_size, index=e.index,
        max_fiber_eta=int(eta_fibers.max()), max_fiber_j=int(j_fibers.max()),
        eta_well_defined=eta_ok, eta_surjective=bool(np.all(eta_fibers > 0)),
        j_well_defined=j_ok,
    )


def conjugacy_labels(g: FiniteMatrixGroup) -> np.ndarray:
    return twisted_partition(g, identity, validate=False).class_of


def inner_equals_conjugacy_check(g: FiniteMatrixGroup, gamma: int, samples: int = 100_000,
                                 seed: int = 0) -> bool:
    """x ~ y under the gamma-inner twist iff x gamma and y gamma are conjugate.

    All pairs are compared when |G| <= 500; otherwise random pairs plus a
    whole-partition comparison.
    """
    twisted = twisted_partition(g, Inner(g.element(gamma))).class_of
    shifted = conjugacy_labels(g)[g.mul(np.arange(len(g)), gamma)]
    N = len(g)
    if N <= 500:
        x, y = np.divmod(np.arange(N * N, dtype=np.int64), N)
    else:
        if not partitions_equal(twisted, shifted):
            return False
        rng = np.random.default_rng(seed)
        x, y = rng.integers(0, N, samples), rng.integers(0, N, samples)
    return bool(np.all((twisted[x] == twisted[y]) == (shifted[x] == shifted[y])))


def brauer_bound_check(g: FiniteMatrixGroup) -> bool:
    """Class number >= log(log |G|) (natural logarithm)."""
    if len(g) < 3:
        raise ValueError("bound needs |G| >= 3")
    classes = int(conjugacy_labels(g).max()) + 1
    return classes >= math.log(math.log(len(g)))
