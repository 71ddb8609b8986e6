"""Integral membership tests and enumerated finite quotients SL/GL/Sp over Z/m.

A :class:`FiniteMatrixGroup` keeps its elements as one ``(N, n, n)`` array,
sorted lexicographically by entries.  Each matrix also gets an integer code
(its entries read as base-m digits, first entry most significant), so the
sorted code array doubles as the lookup index and element index order is
the order of canonical forms.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np
import sympy

from .errors import ResourceLimit, UsageError
from .matrices import IntMatrix, ModMatrix

DEFAULT_ELEMENT_CAP = 200_000
CHUNK = 1 << 18

KINDS = ("SL", "GL", "Sp")


def symplectic_form(dim: int) -> IntMatrix:
    """J0 = diag(j0, ..., j0) with j0 = [[0, 1], [-1, 0]]."""
    if dim % 2:
        raise UsageError(f"symplectic form needs even dimension, got {dim}")
    rows = [[0] * dim for _ in range(dim)]
    for b in range(0, dim, 2):
        rows[b][b + 1] = 1
        rows[b + 1][b] = -1
    return IntMatrix(rows)


@dataclass(frozen=True)
class GroupFamily:
    kind: str
    n: int  # matrix dimension; for Sp this is the even number 2n

    def __post_init__(self):
        kind = {"sl": "SL", "gl": "GL", "sp": "Sp"}.get(self.kind.lower())
        if kind is None:
            raise UsageError(f"unknown group kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        if self.n < 1:
            raise UsageError(f"dimension must be positive, got {self.n}")
        if kind == "Sp" and self.n % 2:
            raise UsageError(f"Sp needs even dimension, got {self.n}")

    @property
    def form(self) -> IntMatrix | None:
        return symplectic_form(self.n) if self.kind == "Sp" else None

    def descriptor(self, m: int) -> str:
        return f"{self.kind.lower()}:{self.n}:{m}"


def parse_group(descriptor: str) -> tuple[GroupFamily, int]:
    """Parse ``sl:n:m``, ``gl:n:m`` or ``sp:2n:m``."""
    parts = descriptor.strip().split(":")
    if len(parts) != 3:
        raise UsageError(f"group descriptor must look like sl:n:m, got {descriptor!r}")
    kind, n, m = parts
    try:
        n, m = int(n), int(m)
    except ValueError:
        raise UsageError(f"bad group descriptor {descriptor!r}") from None
    if m < 2:
        raise UsageError(f"modulus must be >= 2 in {descriptor!r}")
    return GroupFamily(kind, n), m


# ---------------------------------------------------------------- membership

def _check_dim(x, family: GroupFamily) -> None:
    if x.n != family.n:
        raise UsageError(f"{x.n}x{x.n} matrix tested against {family.kind}({family.n})")


def is_member_integral(x: IntMatrix, family: GroupFamily) -> bool:
    _check_dim(x, family)
    d = x.det()
    if family.kind == "GL":
        return d in (1, -1)
    if d != 1:
        return False
    if family.kind == "Sp":
        J0 = family.form
        return x.T @ J0 @ x == J0
    return True


def is_member_mod(x: ModMatrix, family: GroupFamily) -> bool:
    _check_dim(x, family)
    d = x.det()
    if family.kind == "GL":
        return math.gcd(d, x.m) == 1
    if d != 1:
        return False
    if family.kind == "Sp":
        J0 = family.form.mod(x.m)
        return x.T @ J0 @ x == J0
    return True


def in_congruence_subgroup(x: IntMatrix, m: int) -> bool:
    """True iff x reduces to the identity mod m (x in the principal congruence subgroup)."""
    return x.mod(m) == ModMatrix.identity(x.n, m)


# ---------------------------------------------------------------- orders

def _sl_order_prime(n: int, q: int) -> int:
    return math.prod(q**n - q**i for i in range(n)) // (q - 1)


def _gl_order_prime(n: int, q: int) -> int:
    return math.prod(q**n - q**i for i in range(n))


def _sp_order_prime(dim: int, q: int) -> int:
    h = dim // 2
    return q ** (h * h) * math.prod(q ** (2 * i) - 1 for i in range(1, h + 1))


def expected_order(family: GroupFamily, m: int) -> int:
    """Classical order of the family over Z/m.

    At a prime this is the textbook formula; other moduli use the Chinese
    remainder theorem and the p^(e-1)-fold fibres of reduction mod p.
    """
    n = family.n
    if family.kind == "SL":
        base, dim = _sl_order_prime, n * n - 1
    elif family.kind == "GL":
        base, dim = _gl_order_prime, n * n
    else:
        base, dim = _sp_order_prime, (n // 2) * (n + 1)
    total = 1
    for p, e in sympy.factorint(m).items():
        total *= base(n, p) * p ** ((e - 1) * dim)
    return total


# ---------------------------------------------------------------- encoding

def _storage_dtype(m: int):
    if m <= 256:
        return np.uint8
    if m <= 65536:
        return np.uint16
    return np.int64


def _fits_int64(m: int, n: int) -> bool:
    return m ** (n * n) < 2**62


def encode(arr: np.ndarray, m: int) -> np.ndarray:
    """Integer codes of a stack of reduced matrices; lexicographic order is preserved."""
    n = arr.shape[-1]
    flat = arr.reshape(-1, n * n)
    if _fits_int64(m, n):
        weights = np.array([m ** (n * n - 1 - j) for j in range(n * n)], dtype=np.int64)
        return flat.astype(np.int64) @ weights
    weights = np.array([m ** (n * n - 1 - j) for j in range(n * n)], dtype=object)
    return flat.astype(object) @ weights


def _search(sorted_codes: np.ndarray, codes: np.ndarray) -> np.ndarray:
    """Index of each code in sorted_codes, -1 if absent."""
    if len(sorted_codes) == 0:
        return np.full(len(codes), -1, dtype=np.int64)
    # sorted queries make the binary searches cache friendly
    order = np.argsort(codes, kind="stable")
    pos = np.empty(len(codes), dtype=np.int64)
    pos[order] = np.searchsorted(sorted_codes, codes[order])
    pos = np.minimum(pos, len(sorted_codes) - 1)
    return np.where(sorted_codes[pos] == codes, pos, -1)


def _isin_sorted(codes: np.ndarray, sorted_codes: np.ndarray) -> np.ndarray:
    return _search(sorted_codes, codes) >= 0


def matmul_mod(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    return np.matmul(a.astype(np.int64, copy=False), b.astype(np.int64, copy=False)) % m


def _chunks(total: int, size: int = CHUNK) -> Iterable[slice]:
    for start in range(0, total, size):
        yield slice(start, min(start + size, total))


def _to_array(mats: Sequence[ModMatrix], n: int) -> np.ndarray:
    if not mats:
        return np.zeros((0, n, n), dtype=np.int64)
    return np.array([mat.tolist() for mat in mats], dtype=np.int64).reshape(-1, n, n)


# ---------------------------------------------------------------- the group

class FiniteMatrixGroup:
    """Fully enumerated finite group of reduced n x n matrices mod m.

    ``elements[i]`` is the i-th element in lexicographic order of its
    entries; ``inverse_index[i]`` is the index of its inverse.
    """

    def __init__(self, elements: np.ndarray, m: int, *, generators: Sequence[np.ndarray],
                 inverses: np.ndarray | None = None, family: GroupFamily | None = None,
                 descriptor: str | None = None):
        elements = np.asarray(elements)
        if elements.ndim != 3 or elements.shape[1] != elements.shape[2]:
            raise UsageError("elements must be an (N, n, n) array")
        self.modulus = int(m)
        self.n = elements.shape[1]
        self.family = family
        self.descriptor = descriptor or f"group:{self.n}:{m}"
        codes = encode(elements % m, m)
        order = np.argsort(codes, kind="stable")
        self.codes = codes[order]
        if len(self.codes) > 1 and np.any(self.codes[1:] == self.codes[:-1]):
            raise UsageError("duplicate elements in group")
        self.elements = (elements[order] % m).astype(_storage_dtype(m))
        ident = np.eye(self.n, dtype=np.int64)[None]
        self.identity_index = int(self._lookup_or_raise(ident)[0])
        if inverses is None:
            inverses = np.array([self.element(i).inverse().tolist() for i in range(len(self))],
                                dtype=np.int64).reshape(-1, self.n, self.n)
        else:
            inverses = np.asarray(inverses)[order]
        inv_idx = self.lookup(inverses)
        if np.any(inv_idx < 0):
            raise UsageError("element set is not closed under inverses")
        self.inverse_index = inv_idx
        gens = np.asarray(generators, dtype=np.int64).reshape(-1, self.n, self.n) % m
        gen_idx = self.lookup(gens) if len(gens) else np.zeros(0, dtype=np.int64)
        if np.any(gen_idx < 0):
            raise UsageError("generator outside the element set")
        self.generators = tuple(int(g) for g in gen_idx)

    def __len__(self) -> int:
        return len(self.codes)

    @property
    def order(self) -> int:
        return len(self.codes)

    def __repr__(self) -> str:
        return f"FiniteMatrixGroup({self.descriptor}, order={self.order})"

    def element(self, i: int) -> ModMatrix:
        return ModMatrix(self.elements[int(i)].tolist(), self.modulus)

    def element_array(self, idx) -> np.ndarray:
        return self.elements[idx].astype(np.int64)

    @cached_property
    def generator_array(self) -> np.ndarray:
        return self.element_array(np.array(self.generators, dtype=np.int64)).reshape(-1, self.n, self.n)

    def lookup(self, arr: np.ndarray) -> np.ndarray:
        """Element indices for a stack of matrices; -1 where not in the group."""
        arr = np.asarray(arr)
        if arr.size == 0:
            return np.zeros(0, dtype=np.int64)
        arr = arr.reshape(-1, self.n, self.n)
        out = np.empty(len(arr), dtype=np.int64)
        for s in _chunks(len(arr)):
            codes = encode(np.asarray(arr[s], dtype=np.int64) % self.modulus, self.modulus)
            out[s] = _search(self.codes, codes)
        return out

    def _lookup_or_raise(self, arr):
        idx = self.lookup(arr)
        if np.any(idx < 0):
            raise KeyError("matrix not in group")
        return idx

    def index_of(self, x: ModMatrix | IntMatrix) -> int:
        if isinstance(x, ModMatrix) and x.m != self.modulus:
            raise UsageError(f"modulus mismatch: {x.m} vs {self.modulus}")
        if x.n != self.n:
            raise UsageError(f"dimension mismatch: {x.n} vs {self.n}")
        m = self.modulus
        idx = self.lookup(np.array([[e % m for e in row] for row in x.rows], dtype=np.int64))
        if idx[0] < 0:
            raise KeyError(f"{x!r} is not an element of {self.descriptor}")
        return int(idx[0])

    def __contains__(self, x) -> bool:
        try:
            self.index_of(x)
        except KeyError:
            return False
        return True

    def mul(self, i, j) -> np.ndarray:
        """Indices of products elements[i] @ elements[j] (elementwise over index arrays)."""
        i = np.atleast_1d(np.asarray(i, dtype=np.int64))
        j = np.atleast_1d(np.asarray(j, dtype=np.int64))
        i, j = np.broadcast_arrays(i, j)
        out = np.empty(len(i), dtype=np.int64)
        for s in _chunks(len(i)):
            out[s] = self.lookup(matmul_mod(self.elements[i[s]], self.elements[j[s]], self.modulus))
        return out

    def batch_inverse(self, arr: np.ndarray) -> np.ndarray:
        """Inverses of a stack of matrices, via the index when they are elements."""
        arr = np.asarray(arr, dtype=np.int64).reshape(-1, self.n, self.n) % self.modulus
        idx = self.lookup(arr)
        out = np.empty_like(arr)
        hit = idx >= 0
        out[hit] = self.elements[self.inverse_index[idx[hit]]]
        for k in np.flatnonzero(~hit):
            out[k] = ModMatrix(arr[k].tolist(), self.modulus).inverse().tolist()
        return out

    def index_map(self) -> dict[tuple[int, ...], int]:
        """Plain dict from entry tuple to index (for independent oracles)."""
        return {tuple(int(e) for e in self.elements[i].ravel()): i for i in range(len(self))}

    def check_closure(self, samples: int = 100_000, seed: int = 0, exhaustive_limit: int = 2000):
        """Return (pairs_checked, failures) for the product-closure property."""
        N = len(self)
        if N <= exhaustive_limit:
            i, j = np.divmod(np.arange(N * N, dtype=np.int64), N)
        else:
            rng = np.random.default_rng(seed)
            i = rng.integers(0, N, samples)
            j = rng.integers(0, N, samples)
        prod = self.mul(i, j)
        return len(i), int(np.count_nonzero(prod < 0))

    def check_inverses(self) -> bool:
        prod = self.mul(np.arange(len(self)), self.inverse_index)
        return bool(np.all(prod == self.identity_index))


# ---------------------------------------------------------------- construction

def quotient_generators(family: GroupFamily, m: int) -> list[ModMatrix]:
    """Generating set of the family mod m, as reductions of integral matrices."""
    n = family.n
    gens: list[IntMatrix] = []
    if family.kind in ("SL", "GL"):
        for i in range(n):
            for j in range(n):
                if i != j:
                    gens.append(IntMatrix.identity(n) + IntMatrix.unit(n, i, j))
        if family.kind == "GL":
            for u in range(1, m):
                if math.gcd(u, m) == 1 and u != 1:
                    gens.append(IntMatrix.diag(u, *([1] * (n - 1))))
    else:
        J0 = family.form
        basis = [[int(r == i) for r in range(n)] for i in range(n)]
        vectors = basis + [[a + b for a, b in zip(basis[i], basis[j])]
                           for i in range(n) for j in range(i + 1, n)]
        for v in vectors:
            gens.append(symplectic_transvection(v, J0))
    return [g.mod(m) for g in gens]


def symplectic_transvection(v: Sequence[int], form: IntMatrix) -> IntMatrix:
    """Matrix of x -> x + beta(x, v) v, where beta(x, y) = x^T form y."""
    col = IntMatrix([[vi if j == 0 else 0 for j in range(len(v))] for vi in v])
    outer = col @ col.T  # v v^T
    return IntMatrix.identity(len(v)) - outer @ form


def closure(generators: Sequence[ModMatrix], n: int, m: int,
            element_cap: int = DEFAULT_ELEMENT_CAP, family: GroupFamily | None = None,
            descriptor: str | None = None) -> FiniteMatrixGroup:
    """Breadth-first closure of the generators under left multiplication.

    The set reached contains the identity and is closed under left
    multiplication by every generator; in a finite group that is the
    subgroup they generate.  Inverses are tracked alongside each element
    (inverse of g*x is inverse(x)*inverse(g)).
    """
    gens = _to_array(list(generators), n)
    gens_inv = _to_array([g.inverse() for g in generators], n)
    dtype = _storage_dtype(m)
    ident = np.eye(n, dtype=np.int64)[None]
    seen = encode(ident, m)
    el_layers, inv_layers, code_layers = [ident.astype(dtype)], [ident.astype(dtype)], [seen]
    frontier, frontier_inv = ident, ident
    while len(frontier):
        cand_el, cand_inv, cand_codes = [], [], []
        for g, gi in zip(gens, gens_inv):
            for s in _chunks(len(frontier)):
                prod = matmul_mod(g, frontier[s], m)
                codes = encode(prod, m)
                fresh = ~_isin_sorted(codes, seen)
                if not fresh.any():
                    continue
                cand_el.append(prod[fresh].astype(dtype))
                cand_inv.append(matmul_mod(frontier_inv[s][fresh], gi, m).astype(dtype))
                cand_codes.append(codes[fresh])
        if not cand_codes:
            break
        codes = np.concatenate(cand_codes)
        codes, first = np.unique(codes, return_index=True)
        reached = len(seen) + len(codes)
        if reached > element_cap:
            raise ResourceLimit(
                f"closure exceeded element cap {element_cap} (reached {reached})", reached)
        frontier = np.concatenate(cand_el)[first].astype(np.int64)
        frontier_inv = np.concatenate(cand_inv)[first].astype(np.int64)
        seen = np.union1d(seen, codes)
        el_layers.append(frontier.astype(dtype))
        inv_layers.append(frontier_inv.astype(dtype))
        code_layers.append(codes)
    return FiniteMatrixGroup(np.concatenate(el_layers), m, generators=gens,
                             inverses=np.concatenate(inv_layers), family=family,
                             descriptor=descriptor)


def build_quotient(family: GroupFamily, m: int,
                   element_cap: int = DEFAULT_ELEMENT_CAP) -> FiniteMatrixGroup:
    if m < 2:
        raise UsageError(f"modulus must be >= 2, got {m}")
    gens = quotient_generators(family, m)
    group = closure(gens, family.n, m, element_cap, family=family,
                    descriptor=family.descriptor(m))
    if family.kind == "Sp" and sympy.isprime(m) and group.order != expected_order(family, m):
        # transvections along e_i and e_i + e_j fell short; all nonzero vectors generate over a field
        vectors = [v for v in np.ndindex(*([m] * family.n)) if any(v)]
        gens = [symplectic_transvection(list(v), family.form).mod(m) for v in vectors]
        group = closure(gens, family.n, m, element_cap, family=family,
                        descriptor=family.descriptor(m))
    return group


def trivial_group(n: int, m: int) -> FiniteMatrixGroup:
    return closure([], n, m, descriptor=f"trivial:{n}:{m}")


def _crt_embedding(a: int, big: int) -> Callable[[np.ndarray], np.ndarray]:
    """Unital ring embedding Z/a -> Z/big (a | big, gcd(a, big/a) = 1) applied to matrix stacks."""
    rest = big // a
    if math.gcd(a, rest) != 1:
        raise UsageError(f"no ring embedding Z/{a} -> Z/{big}")
    if rest == 1:
        return lambda arr: arr % big
    e = (rest * pow(rest, -1, a)) % big  # 1 mod a, 0 mod rest
    def embed(arr):
        arr = np.asarray(arr, dtype=np.int64)
        ident = np.eye(arr.shape[-1], dtype=np.int64)
        return (e * arr + (1 - e) * ident) % big
    return embed


def direct_product(g: FiniteMatrixGroup, h: FiniteMatrixGroup,
                   element_cap: int = DEFAULT_ELEMENT_CAP) -> FiniteMatrixGroup:
    """Block-diagonal direct product diag(x, y).

    Factors with different moduli are first carried into Z/lcm by the
    idempotent (CRT) ring embedding, which requires the moduli to be
    coprime or one to divide the other with a coprime cofactor.
    """
    big = math.lcm(g.modulus, h.modulus)
    total = g.order * h.order
    if total > element_cap:
        raise ResourceLimit(f"direct product of order {total} exceeds cap {element_cap}", total)
    eg, eh = _crt_embedding(g.modulus, big), _crt_embedding(h.modulus, big)
    xs, ys = eg(g.element_array(slice(None))), eh(h.element_array(slice(None)))
    xi, yi = eg(g.elements[g.inverse_index]), eh(h.elements[h.inverse_index])
    a, b = g.n, h.n
    n = a + b

    def blocks(left, right):
        ii, jj = np.divmod(np.arange(len(left) * len(right)), len(right))
        out = np.zeros((len(ii), n, n), dtype=np.int64)
        out[:, :a, :a] = left[ii]
        out[:, a:, a:] = right[jj]
        return out

    elements = blocks(xs, ys)
    inverses = blocks(xi, yi)
    gens = []
    id_a, id_b = np.eye(a, dtype=np.int64), np.eye(b, dtype=np.int64)
    for gen in g.generator_array:
        gens.append(blocks(eg(gen[None]), id_b[None])[0])
    for gen in h.generator_array:
        gens.append(blocks(id_a[None], eh(gen[None]))[0])
    return FiniteMatrixGroup(elements, big, generators=np.array(gens).reshape(-1, n, n),
                             inverses=inverses,
                             descriptor=f"({g.descriptor})x({h.descriptor})")


def element_cap_from_env(default: int = DEFAULT_ELEMENT_CAP) -> int:
    raw = os.environ.get("REIDEMEISTER_ELEMENT_CAP")
    if not raw:
        return default
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"REIDEMEISTER_ELEMENT_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise UsageError("REIDEMEISTER_ELEMENT_CAP must be positive")
    return cap
