"""Twisted conjugacy classes of a finite matrix group.

For an automorphism phi the group acts on itself by g.x = g x phi(g)^-1.
Orbits are found by joining x with s.x for every generator s; since this
is a group action, the components are exactly the orbits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .automorphisms import Automorphism, validate_automorphism
from .errors import InvalidAutomorphism, UsageError
from .groups import FiniteMatrixGroup, _chunks, matmul_mod
from .matrices import Matrix, ModMatrix


def orbit_labels(num_points: int, moves: Iterable[np.ndarray]) -> np.ndarray:
    """Connected components of the graph x -- move(x), relabelled by first point.

    Each move is an int array of targets of length ``num_points``.  Class ids
    ascend with the smallest point of each class.
    """
    src, dst = [], []
    points = np.arange(num_points, dtype=np.int64)
    for target in moves:
        target = np.asarray(target, dtype=np.int64)
        if len(target) != num_points or np.any(target < 0):
            raise ValueError("orbit move leaves the point set")
        src.append(points)
        dst.append(target)
    if src:
        rows, cols = np.concatenate(src), np.concatenate(dst)
    else:
        rows = cols = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)),
                       shape=(num_points, num_points)).tocsr()
    _, raw = connected_components(graph, directed=True, connection="weak")
    # first occurrence of each raw label is the minimum point of that component
    _, first = np.unique(raw, return_index=True)
    relabel = np.empty(len(first), dtype=np.int64)
    relabel[raw[first[np.argsort(first)]]] = np.arange(len(first))
    return relabel[raw]


@dataclass(frozen=True)
class TwistedPartition:
    group: FiniteMatrixGroup
    phi: Automorphism
    class_of: np.ndarray
    representatives: np.ndarray
    class_sizes: np.ndarray

    @property
    def reidemeister_number(self) -> int:
        return len(self.representatives)

    def class_id(self, x: ModMatrix | int) -> int:
        idx = x if isinstance(x, (int, np.integer)) else self.group.index_of(x)
        return int(self.class_of[idx])

    def same_class(self, x, y) -> bool:
        return self.class_id(x) == self.class_id(y)

    def members(self, class_id: int) -> np.ndarray:
        return np.flatnonzero(self.class_of == class_id)

    def to_dict(self, group_descriptor: str | None = None, automorphism_descriptor: str | None = None) -> dict:
        g = self.group
        return {
            "group": group_descriptor or g.descriptor,
            "automorphism": automorphism_descriptor or self.phi.descriptor,
            "reidemeister_number": self.reidemeister_number,
            "classes": [
                {"id": c, "size": int(self.class_sizes[c]),
                 "representative": g.element(int(r)).tolist()}
                for c, r in enumerate(self.representatives)
            ],
        }


def _partition_from_labels(g: FiniteMatrixGroup, phi: Automorphism, labels: np.ndarray) -> TwistedPartition:
    labels = np.asarray(labels, dtype=np.int64)
    _, reps = np.unique(labels, return_index=True)
    sizes = np.bincount(labels)
    return TwistedPartition(g, phi, labels, reps.astype(np.int64), sizes)


def action_targets(g: FiniteMatrixGroup, phi: Automorphism, s: int) -> np.ndarray:
    """Index of s x phi(s)^-1 for every element x."""
    m = g.modulus
    s_mat = g.element_array(s)
    phi_s = phi.apply_array(s_mat[None], m, g.batch_inverse)[0]
    right = g.batch_inverse(phi_s[None])[0]
    out = np.empty(len(g), dtype=np.int64)
    for sl in _chunks(len(g)):
        out[sl] = g.lookup(matmul_mod(matmul_mod(s_mat, g.elements[sl], m), right, m))
    return out


def twisted_partition(g: FiniteMatrixGroup, phi: Automorphism, validate: bool = True,
                      seed: int = 0) -> TwistedPartition:
    if validate:
        report = validate_automorphism(phi, g, seed=seed)
        if not report.ok:
            raise InvalidAutomorphism(report)
    moves = []
    for s in g.generators:
        target = action_targets(g, phi, s)
        if np.any(target < 0):
            raise UsageError(f"{phi.descriptor} does not preserve {g.descriptor}")
        moves.append(target)
    return _partition_from_labels(g, phi, orbit_labels(len(g), moves))


def brute_force_labels(g: FiniteMatrixGroup, phi: Automorphism) -> np.ndarray:
    """Orbit partition from the full double loop over all g in G (oracle).

    Uses the scalar matrix path for phi and a plain dict index, so it shares
    neither the batched automorphism code nor the sorted-code lookup.
    """
    m, N = g.modulus, len(g)
    index = g.index_map()
    mats = [g.element(i) for i in range(N)]
    left = np.array([x.tolist() for x in mats], dtype=np.int64)
    right = np.array([phi(x).inverse().tolist() for x in mats], dtype=np.int64)
    labels = np.full(N, -1, dtype=np.int64)
    next_id = 0
    for x in range(N):
        if labels[x] >= 0:
            continue
        orbit = (left @ left[x] @ right) % m
        for row in orbit.reshape(N, -1):
            labels[index[tuple(int(e) for e in row)]] = next_id
        next_id += 1
    return labels


def brute_force_partition(g: FiniteMatrixGroup, phi: Automorphism) -> TwistedPartition:
    return _partition_from_labels(g, phi, brute_force_labels(g, phi))


def same_twisted_class(p: TwistedPartition, x, y) -> bool:
    return p.same_class(x, y)


def inner_trace_invariant(x: Matrix, M: Matrix) -> int:
    """trace(x M); constant on the twisted classes of the inner automorphism by M."""
    return (x @ M).trace()


def sigma_trace_invariant(x: Matrix, J: Matrix) -> int:
    """trace(x J); constant on the twisted classes of conjugation by an involution J."""
    return (x @ J).trace()


def partitions_equal(a: np.ndarray, b: np.ndarray) -> bool:
    """True when two label arrays induce the same partition."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    pairs = np.unique(np.stack([a, b], axis=1), axis=0)
    return len(pairs) == len(np.unique(a)) == len(np.unique(b))


def export_json(p: TwistedPartition, group_descriptor: str | None = None,
                automorphism_descriptor: str | None = None) -> str:
    return json.dumps(p.to_dict(group_descriptor, automorphism_descriptor), indent=2)
