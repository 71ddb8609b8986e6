"""Witness matrices A(k), X(k), their identities, and distinctness certificates.

A certificate reduces two witnesses mod m and reads off their classes in
the twisted partition of the finite quotient.  Reduction commutes with the
automorphism, so different classes mod m mean different classes over Z.
The converse does not hold: a failure to separate is only inconclusive.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .automorphisms import Automorphism, ConjBySwap, induced_mod
from .errors import ResourceLimit, UsageError
from .groups import DEFAULT_ELEMENT_CAP, FiniteMatrixGroup, GroupFamily, build_quotient
from .matrices import IntMatrix
from .orbits import TwistedPartition, twisted_partition

WITNESS_KINDS = ("A", "X", "A_at", "X_at")


def make_witness(kind: str, n: int, k: int, i: int = 1, j: int = 2) -> IntMatrix:
    """A(k) = I + k E_21 and X(k) = diag(C(k), I) with C(k) = [[k^2+1, k], [k, 1]].

    The placed variants use 1-based positions: A_at(i, j)(k) = I + k E_ji and
    X_at(i, j)(k) = I + k^2 E_ii + k E_ij + k E_ji, so A = A_at(1, 2) and
    X = X_at(1, 2).
    """
    if kind not in WITNESS_KINDS:
        raise UsageError(f"unknown witness kind {kind!r}")
    if n < 2:
        raise UsageError(f"witnesses need n >= 2, got {n}")
    if kind in ("A", "X"):
        i, j = 1, 2
    if not (1 <= i <= n and 1 <= j <= n and i != j):
        raise UsageError(f"bad witness position ({i}, {j}) for n = {n}")
    rows = IntMatrix.identity(n).tolist()
    a, b = i - 1, j - 1
    if kind in ("A", "A_at"):
        rows[b][a] += k
    else:
        rows[a][a] += k * k
        rows[a][b] += k
        rows[b][a] += k
    return IntMatrix(rows)


def A(n: int, k: int) -> IntMatrix:
    return make_witness("A", n, k)


def X(n: int, k: int) -> IntMatrix:
    return make_witness("X", n, k)


# ---------------------------------------------------------------- identities

def column(x: IntMatrix, i: int) -> IntMatrix:
    """Column i (0-based) of x as an n x n matrix whose first column holds it."""
    return IntMatrix([[row[i] if c == 0 else 0 for c in range(x.n)] for row in x.rows])


def tau_action_identity_check(x: IntMatrix, k: int) -> bool:
    """X A(k) X^T == X X^T + k c_2 c_1^T, with c_i the i-th column of X."""
    lhs = x @ A(x.n, k) @ x.T
    rhs = x @ x.T + k * (column(x, 1) @ column(x, 0).T)
    return lhs == rhs


def random_sl_matrix(n: int, rng: np.random.Generator, steps: int = 12, max_mult: int = 3) -> IntMatrix:
    """Random word in elementary matrices I + c E_ij, so det = 1 by construction."""
    x = IntMatrix.identity(n)
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False)
        c = int(rng.integers(-max_mult, max_mult + 1))
        x = (IntMatrix.identity(n) + c * IntMatrix.unit(n, int(i), int(j))) @ x
    return x


def trace_formula_case1(k: int, M: IntMatrix) -> int:
    """(k^2+1) m11 + k (m12 + m21) + sum_{j >= 2} m_jj."""
    return (k * k + 1) * M[0, 0] + k * (M[0, 1] + M[1, 0]) + sum(M[j, j] for j in range(1, M.n))


# ---------------------------------------------------------------- brute force oracle

@dataclass
class SearchReport:
    k: int
    l: int
    n: int
    bound: int
    candidates: int  # matrices with det 1 inside the box
    solutions: list[IntMatrix] = field(default_factory=list)

    @property
    def found(self) -> int:
        return len(self.solutions)


def _batched_det(flat: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(len(flat), dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if perm[a] > perm[b]:
                    sign = -sign
        term = np.ones(len(flat), dtype=np.int64)
        for r in range(n):
            term = term * flat[:, r * n + perm[r]]
        out += sign * term
    return out


def tau_no_solution_oracle(k: int, l: int, n: int = 2, bound: int = 6,
                           cap: int = 10**7, chunk: int = 1 << 20) -> SearchReport:
    """Exhaustively search det-1 matrices with entries in [-bound, bound] for X A(k) X^T = A(l)."""
    side = 2 * bound + 1
    total = side ** (n * n)
    if total > cap:
        raise ResourceLimit(f"search space {total} exceeds cap {cap}", total)
    target = np.array(A(n, l).tolist(), dtype=np.int64)
    ak = np.array(A(n, k).tolist(), dtype=np.int64)
    report = SearchReport(k, l, n, bound, 0)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.int64)
        flat = np.empty((len(codes), n * n), dtype=np.int64)
        rest = codes
        for pos in range(n * n - 1, -1, -1):
            rest, digit = np.divmod(rest, side)
            flat[:, pos] = digit - bound
        flat = flat[_batched_det(flat, n) == 1]
        report.candidates += len(flat)
        mats = flat.reshape(-1, n, n)
        img = mats @ ak @ np.swapaxes(mats, 1, 2)
        hit = np.all(img == target, axis=(1, 2))
        report.solutions.extend(IntMatrix(x.tolist()) for x in mats[hit])
    return report


# ---------------------------------------------------------------- certificates

_GROUPS: dict[tuple[GroupFamily, int], FiniteMatrixGroup] = {}
_PARTITIONS: dict[tuple[str, str], TwistedPartition] = {}


def clear_caches() -> None:
    _GROUPS.clear()
    _PARTITIONS.clear()


def cached_quotient(family: GroupFamily, m: int, element_cap: int = DEFAULT_ELEMENT_CAP) -> FiniteMatrixGroup:
    key = (family, m)
    if key not in _GROUPS:
        _GROUPS[key] = build_quotient(family, m, element_cap)
    return _GROUPS[key]


def cached_partition(g: FiniteMatrixGroup, phi: Automorphism, seed: int = 0) -> TwistedPartition:
    key = (g.descriptor, phi.descriptor)
    if key not in _PARTITIONS:
        _PARTITIONS[key] = twisted_partition(g, phi, seed=seed)
    return _PARTITIONS[key]


@dataclass
class DistinctnessCertificate:
    family: str
    automorphism: str
    n: int
    k: int
    l: int
    modulus: int | None
    class_ids: list[int] | None
    verdict: str  # "distinct" or "inconclusive"
    moduli_tried: list[int] = field(default_factory=list)

    @property
    def distinct(self) -> bool:
        return self.verdict == "distinct"

    def to_dict(self) -> dict:
        return {
            "family": self.family, "automorphism": self.automorphism, "n": self.n,
            "k": self.k, "l": self.l, "modulus": self.modulus, "class_ids": self.class_ids,
            "verdict": self.verdict, "moduli_tried": self.moduli_tried,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def default_group_kind(phi: Automorphism) -> str:
    return "Sp" if any(isinstance(p, ConjBySwap) for p in phi.primitives) else "SL"


def certify_distinct(family: str, phi: Automorphism, n: int, k: int, l: int,
                     moduli: Sequence[int], group_kind: str | None = None,
                     element_cap: int = DEFAULT_ELEMENT_CAP, seed: int = 0,
                     automorphism_name: str | None = None) -> DistinctnessCertificate:
    """Search the moduli in order for a quotient whose twisted partition separates the two witnesses."""
    gfam = GroupFamily(group_kind or default_group_kind(phi), n)
    wk, wl = make_witness(family, n, k), make_witness(family, n, l)
    cert = DistinctnessCertificate(family, automorphism_name or phi.descriptor, n, k, l,
                                   None, None, "inconclusive")
    for m in moduli:
        cert.moduli_tried.append(m)
        xk, xl = wk.mod(m), wl.mod(m)
        if xk == xl:
            continue
        g = cached_quotient(gfam, m, element_cap)
        part = cached_partition(g, induced_mod(phi, m), seed)
        a, b = part.class_id(xk), part.class_id(xl)
        if a != b:
            cert.modulus, cert.class_ids, cert.verdict = m, [a, b], "distinct"
            return cert
    return cert


# ---------------------------------------------------------------- separating family

def separating_family(M: IntMatrix, m: int, count: int) -> list[IntMatrix]:
    """``count`` members of the level-m congruence subgroup with pairwise distinct trace(W M).

    If some diagonal entry m_ii is non-zero, emit X_at(i, j)(m k) for
    k >= k0; trace(X M) for parameters t != t' collide only when
    (t + t') m_ii + m_ij + m_ji = 0, which k0 rules out.  Otherwise pick
    m_ij != 0 and emit A_at(i, j)(m k), whose traces are k m m_ij.
    """
    n = M.n
    if n < 3:
        raise UsageError("separating families need n >= 3")
    if M.det() != 1:
        raise UsageError("M must lie in SL(n, Z)")
    if m < 2 or count < 1:
        raise UsageError("need level m >= 2 and count >= 1")
    diag = [i for i in range(n) if M[i, i] != 0]
    if diag:
        i = diag[0]
        j = 0 if i != 0 else 1
        off = M[i, j] + M[j, i]
        k0 = abs(off) // (m * abs(M[i, i])) + 1
        ks = range(k0, k0 + count)
        out = [make_witness("X_at", n, m * k, i + 1, j + 1) for k in ks]
        for a, b in itertools.combinations(ks, 2):
            assert (m * a + m * b) * M[i, i] + off != 0
    else:
        i, j = next((a, b) for a in range(n) for b in range(n) if a != b and M[a, b] != 0)
        out = [make_witness("A_at", n, m * k, i + 1, j + 1) for k in range(1, count + 1)]
    traces = [(w @ M).trace() for w in out]
    assert len(set(traces)) == len(traces)
    return out
