"""Symbolic automorphisms: inner, transpose-inverse, the sign and swap conjugations,
scalar character twists, and right-to-left compositions of these.

Every primitive works on IntMatrix and ModMatrix values and on stacks of
reduced matrices (``apply_array``), which is what the orbit engine uses.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import NonDescending, UsageError
from .groups import FiniteMatrixGroup, GroupFamily, matmul_mod
from .matrices import IntMatrix, Matrix, ModMatrix, load_matrix

ArrayInverse = Callable[[np.ndarray], np.ndarray]


def _exact_inverse_array(arr: np.ndarray, m: int) -> np.ndarray:
    out = np.empty_like(arr)
    for k in range(len(arr)):
        out[k] = ModMatrix(arr[k].tolist(), m).inverse().tolist()
    return out


def sign_matrix(n: int) -> IntMatrix:
    """J = diag(1, ..., 1, -1)."""
    return IntMatrix.diag(*([1] * (n - 1)), -1)


def swap_matrix(n: int) -> IntMatrix:
    """J' = diag(I', I_{n-2}) with I' = [[0, 1], [1, 0]]."""
    if n < 2:
        raise UsageError("swap conjugation needs dimension >= 2")
    rows = IntMatrix.identity(n).tolist()
    rows[0][0] = rows[1][1] = 0
    rows[0][1] = rows[1][0] = 1
    return IntMatrix(rows)


class Automorphism:
    descriptor: str = "?"

    def __call__(self, x: Matrix) -> Matrix:
        raise NotImplementedError

    def apply_array(self, arr: np.ndarray, m: int, inverse: ArrayInverse | None = None) -> np.ndarray:
        raise NotImplementedError

    def induced_mod(self, m: int) -> "Automorphism":
        return self

    @property
    def primitives(self) -> tuple["Automorphism", ...]:
        return (self,)

    def __repr__(self) -> str:
        return f"<Automorphism {self.descriptor}>"


@dataclass(frozen=True, repr=False)
class Inner(Automorphism):
    """x -> M x M^-1."""

    matrix: Matrix

    @property
    def descriptor(self) -> str:
        return "inner:" + json.dumps(self.matrix.tolist(), separators=(",", ":"))

    def _conjugator(self, m: int | None):
        M = self.matrix
        if m is None:
            if isinstance(M, ModMatrix):
                raise UsageError("inner automorphism by a residue matrix cannot act over Z")
            return M, M.inverse()
        if isinstance(M, ModMatrix) and M.m != m:
            raise UsageError(f"inner conjugator is mod {M.m}, element is mod {m}")
        Mm = ModMatrix(M.rows, m)
        return Mm, Mm.inverse()

    def __call__(self, x: Matrix) -> Matrix:
        M, Minv = self._conjugator(x.m if isinstance(x, ModMatrix) else None)
        return M @ x @ Minv

    def apply_array(self, arr, m, inverse=None):
        M, Minv = self._conjugator(m)
        M = np.array(M.tolist(), dtype=np.int64)
        Minv = np.array(Minv.tolist(), dtype=np.int64)
        return matmul_mod(matmul_mod(M, arr, m), Minv, m)

    def induced_mod(self, m):
        if isinstance(self.matrix, ModMatrix):
            if self.matrix.m != m:
                raise UsageError(f"cannot reduce a mod-{self.matrix.m} conjugator mod {m}")
            return self
        return Inner(self.matrix.mod(m))


@dataclass(frozen=True, repr=False)
class TransposeInverse(Automorphism):
    """tau: x -> (x^T)^-1."""

    descriptor = "tau"

    def __call__(self, x):
        return x.inverse().T

    def apply_array(self, arr, m, inverse=None):
        inv = inverse(arr) if inverse is not None else _exact_inverse_array(arr, m)
        return np.swapaxes(inv, -1, -2) % m


@dataclass(frozen=True, repr=False)
class ConjByJ(Automorphism):
    """sigma: x -> J x J with J = diag(1, ..., 1, -1)."""

    descriptor = "sigma"

    def __call__(self, x):
        J = sign_matrix(x.n)
        if isinstance(x, ModMatrix):
            J = J.mod(x.m)
        return J @ x @ J

    def apply_array(self, arr, m, inverse=None):
        n = arr.shape[-1]
        s = np.ones(n, dtype=np.int64)
        s[-1] = -1
        return (arr * np.outer(s, s)) % m


@dataclass(frozen=True, repr=False)
class ConjBySwap(Automorphism):
    """theta: x -> J' x J' with J' = diag(I', I_{n-2}) (J' is its own inverse)."""

    descriptor = "theta"

    def __call__(self, x):
        J = swap_matrix(x.n)
        if isinstance(x, ModMatrix):
            J = J.mod(x.m)
        return J @ x @ J

    def apply_array(self, arr, m, inverse=None):
        n = arr.shape[-1]
        perm = np.arange(n)
        perm[[0, 1]] = [1, 0]
        return arr[:, perm][:, :, perm] % m


class Character:
    """A map from group elements to {+1, -1}.

    ``modulus`` is None for a character on integral matrices.  ``descend(m)``
    returns the character that the reduction mod m factors through, or None.
    """

    name = "chi"
    modulus: int | None = None

    def __call__(self, x: Matrix) -> int:
        raise NotImplementedError

    def values(self, arr: np.ndarray, m: int) -> np.ndarray:
        return np.array([self(ModMatrix(a.tolist(), m)) for a in arr], dtype=np.int64)

    def descend(self, m: int) -> "Character | None":
        return None


class DetSign(Character):
    """chi(x) = det(x) read as a sign; over Z/m the determinant must be +-1 mod m."""

    name = "detsign"

    def __call__(self, x):
        d = x.det()
        if isinstance(x, ModMatrix):
            if d == 1 % x.m:
                return 1
            if d == (-1) % x.m:
                return -1
            raise UsageError(f"det {d} mod {x.m} is not +-1")
        if d not in (1, -1):
            raise UsageError(f"det {d} is not +-1")
        return d

    def descend(self, m):
        return self


class CharacterTable(Character):
    """Character over Z/m given by an explicit element -> sign table."""

    def __init__(self, table: dict[tuple[int, ...], int], n: int, m: int, name: str = "table"):
        self.table = {tuple(int(e) % m for e in k): int(v) for k, v in table.items()}
        if any(v not in (1, -1) for v in self.table.values()):
            raise UsageError("character values must be +1 or -1")
        self.n, self.modulus, self.name = n, m, name

    def __call__(self, x):
        if not isinstance(x, ModMatrix) or x.m != self.modulus:
            raise UsageError(f"table character is defined mod {self.modulus} only")
        try:
            return self.table[x.entries()]
        except KeyError:
            raise UsageError(f"character table has no entry for {x!r}") from None

    def values(self, arr, m):
        if m != self.modulus:
            raise UsageError(f"table character is defined mod {self.modulus} only")
        keys = [tuple(int(e) for e in a.ravel()) for a in arr]
        try:
            return np.array([self.table[k] for k in keys], dtype=np.int64)
        except KeyError as exc:
            raise UsageError(f"character table has no entry for {exc.args[0]}") from None

    def descend(self, m):
        return self if m == self.modulus else None

    def to_json(self) -> str:
        rows = [{"matrix": [list(k[i * self.n:(i + 1) * self.n]) for i in range(self.n)], "value": v}
                for k, v in sorted(self.table.items())]
        return json.dumps({"modulus": self.modulus, "n": self.n, "entries": rows})

    @classmethod
    def from_json(cls, text: str, name: str = "table") -> "CharacterTable":
        try:
            data = json.loads(text)
            m, n = int(data["modulus"]), int(data["n"])
            table = {}
            for row in data["entries"]:
                mat = row["matrix"]
                if len(mat) != n or any(len(r) != n for r in mat):
                    raise UsageError("ragged matrix in character table")
                table[tuple(e for r in mat for e in r)] = row["value"]
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            if isinstance(exc, UsageError):
                raise
            raise UsageError(f"bad character table: {exc}") from None
        return cls(table, n, m, name)


@dataclass(frozen=True, repr=False)
class CharacterTwist(Automorphism):
    """x -> chi(x) x for a character chi into the central scalars {+1, -1}."""

    chi: Character

    @property
    def descriptor(self) -> str:
        return f"chartwist:{self.chi.name}"

    def __call__(self, x):
        return self.chi(x) * x

    def apply_array(self, arr, m, inverse=None):
        return (self.chi.values(arr, m)[:, None, None] * arr) % m

    def induced_mod(self, m):
        if self.chi.modulus == m:
            return self
        low = self.chi.descend(m)
        if low is None:
            raise NonDescending(f"character {self.chi.name} has no factorization mod {m}")
        return CharacterTwist(low)


@dataclass(frozen=True, repr=False)
class Composite(Automorphism):
    """parts[0] o parts[1] o ... (the last part is applied first)."""

    parts: tuple[Automorphism, ...] = field(default_factory=tuple)

    @property
    def descriptor(self) -> str:
        return ".".join(p.descriptor for p in self.parts) if self.parts else "id"

    @property
    def primitives(self):
        return tuple(q for p in self.parts for q in p.primitives)

    def __call__(self, x):
        for p in reversed(self.parts):
            x = p(x)
        return x

    def apply_array(self, arr, m, inverse=None):
        for p in reversed(self.parts):
            arr = p.apply_array(arr, m, inverse)
        return arr

    def induced_mod(self, m):
        return Composite(tuple(p.induced_mod(m) for p in self.parts))


def compose(*parts: Automorphism) -> Automorphism:
    flat = tuple(q for p in parts for q in (p.parts if isinstance(p, Composite) else (p,)))
    if not flat:
        return identity
    return flat[0] if len(flat) == 1 else Composite(flat)


identity = Composite(())
tau = TransposeInverse()
sigma = ConjByJ()
theta = ConjBySwap()


def apply(phi: Automorphism, x: Matrix) -> Matrix:
    return phi(x)


def induced_mod(phi: Automorphism, m: int) -> Automorphism:
    return phi.induced_mod(m)


def out_representatives(family: GroupFamily, chi: Character | None = None) -> list[Automorphism]:
    """Representatives of the non-trivial outer automorphism classes used in the arguments."""
    n = family.n
    if family.kind == "SL":
        if n % 2:
            return [tau]
        return [tau, sigma, compose(tau, sigma)]
    if family.kind == "Sp":
        if n > 4:
            return [theta]
        if n == 4:
            if chi is None:
                raise UsageError("Sp(4) needs a caller-supplied central character")
            phi = CharacterTwist(chi)
            return [theta, phi, compose(theta, phi)]
        raise UsageError("Sp(2) is SL(2); ask for the SL family")
    raise UsageError(f"no outer representatives for family {family.kind}")


# ---------------------------------------------------------------- validation

@dataclass
class ValidationReport:
    group: str
    automorphism: str
    closure: bool
    homomorphism: bool
    bijective: bool
    pairs_checked: int
    exhaustive: bool
    seed: int
    counterexample: str | None = None

    @property
    def ok(self) -> bool:
        return self.closure and self.homomorphism and self.bijective

    def summary(self) -> str:
        s = (f"{self.automorphism} on {self.group}: closure={self.closure} "
             f"homomorphism={self.homomorphism} bijective={self.bijective}")
        if self.counterexample:
            s += f" ({self.counterexample})"
        return s

    def to_dict(self) -> dict:
        return {
            "group": self.group, "automorphism": self.automorphism,
            "closure": self.closure, "homomorphism": self.homomorphism,
            "bijective": self.bijective, "pairs_checked": self.pairs_checked,
            "exhaustive": self.exhaustive, "seed": self.seed,
            "counterexample": self.counterexample,
        }


def image_indices(phi: Automorphism, g: FiniteMatrixGroup) -> np.ndarray:
    """Index of phi(x) for every element x; -1 where phi(x) leaves the group."""
    out = np.empty(len(g), dtype=np.int64)
    step = 1 << 17
    for start in range(0, len(g), step):
        s = slice(start, min(start + step, len(g)))
        img = phi.apply_array(g.element_array(s), g.modulus, g.batch_inverse)
        out[s] = g.lookup(img)
    return out


def validate_automorphism(phi: Automorphism, g: FiniteMatrixGroup, samples: int = 100_000,
                          seed: int = 0, exhaustive_limit: int = 2000) -> ValidationReport:
    N = len(g)
    img = image_indices(phi, g)
    exhaustive = N <= exhaustive_limit
    report = ValidationReport(g.descriptor, phi.descriptor, closure=bool(np.all(img >= 0)),
                              homomorphism=False, bijective=False, pairs_checked=0,
                              exhaustive=exhaustive, seed=seed)
    if not report.closure:
        bad = int(np.flatnonzero(img < 0)[0])
        report.counterexample = f"image of {g.element(bad).tolist()} is outside the group"
        return report
    report.bijective = len(np.unique(img)) == N
    if exhaustive:
        i, j = np.divmod(np.arange(N * N, dtype=np.int64), N)
    else:
        rng = np.random.default_rng(seed)
        i, j = rng.integers(0, N, samples), rng.integers(0, N, samples)
    lhs = img[g.mul(i, j)]
    rhs = g.mul(img[i], img[j])
    report.pairs_checked = len(i)
    bad = np.flatnonzero(lhs != rhs)
    report.homomorphism = len(bad) == 0
    if len(bad):
        a, b = int(i[bad[0]]), int(j[bad[0]])
        report.counterexample = (f"phi(xy) != phi(x)phi(y) for x={g.element(a).tolist()}, "
                                 f"y={g.element(b).tolist()}")
    return report


# ---------------------------------------------------------------- characters on finite groups

def subgroup_indices(g: FiniteMatrixGroup, gens: Sequence[int]) -> np.ndarray:
    """Sorted element indices of the subgroup generated by the given elements."""
    gens = np.unique(np.asarray(gens, dtype=np.int64))
    seen = np.array([g.identity_index], dtype=np.int64)
    frontier = seen
    while len(frontier):
        new = np.unique(np.concatenate([g.mul(s, frontier) for s in gens])) if len(gens) else frontier[:0]
        new = np.setdiff1d(new, seen, assume_unique=True)
        seen = np.union1d(seen, new)
        frontier = new
    return seen


def derived_subgroup(g: FiniteMatrixGroup) -> np.ndarray:
    """Normal closure of the generator commutators, as sorted element indices."""
    gens = np.array(g.generators, dtype=np.int64)
    inv = g.inverse_index
    comms = [int(g.mul(g.mul(a, b), g.mul(inv[a], inv[b]))[0]) for a in gens for b in gens]
    sub = subgroup_indices(g, comms)
    while True:
        conj = np.unique(np.concatenate([g.mul(g.mul(s, sub), inv[s]) for s in gens])) if len(gens) else sub
        if np.all(np.isin(conj, sub)):
            return sub
        sub = subgroup_indices(g, np.union1d(sub, conj))


def sign_character(g: FiniteMatrixGroup, name: str = "sign") -> CharacterTable:
    """The non-trivial character with kernel the derived subgroup; needs index 2."""
    der = derived_subgroup(g)
    if 2 * len(der) != len(g):
        raise UsageError(f"derived subgroup has index {len(g) // max(len(der), 1)}, not 2")
    inside = np.zeros(len(g), dtype=bool)
    inside[der] = True
    table = {tuple(int(e) for e in g.elements[i].ravel()): (1 if inside[i] else -1)
             for i in range(len(g))}
    return CharacterTable(table, g.n, g.modulus, name)


# ---------------------------------------------------------------- descriptors

_KEYWORD = r"(?:id|tau|sigma|theta|inner:|chartwist:)"


def parse_automorphism(descriptor: str, base_dir: str | Path | None = None) -> Automorphism:
    """Parse ``tau``, ``sigma``, ``theta``, ``id``, ``inner:<file>``, ``chartwist:<file>``
    (or ``chartwist:detsign``), joined by ``.`` and applied right to left."""
    descriptor = descriptor.strip()
    if not descriptor:
        raise UsageError("empty automorphism descriptor")
    tokens = re.split(rf"\.(?={_KEYWORD})", descriptor)
    base = Path(base_dir) if base_dir else Path.cwd()
    parts: list[Automorphism] = []
    for tok in tokens:
        if tok == "id":
            continue
        if tok == "tau":
            parts.append(tau)
        elif tok == "sigma":
            parts.append(sigma)
        elif tok == "theta":
            parts.append(theta)
        elif tok.startswith("inner:"):
            path = base / tok[len("inner:"):]
            if not path.is_file():
                raise UsageError(f"matrix file not found: {path}")
            parts.append(Inner(load_matrix(path)))
        elif tok.startswith("chartwist:"):
            ref = tok[len("chartwist:"):]
            if ref == "detsign":
                parts.append(CharacterTwist(DetSign()))
                continue
            path = base / ref
            if not path.is_file():
                raise UsageError(f"character table file not found: {path}")
            parts.append(CharacterTwist(CharacterTable.from_json(path.read_text(encoding="utf-8"),
                                                                 name=Path(ref).name)))
        else:
            raise UsageError(f"unknown automorphism token {tok!r}")
    if not parts:
        return identity
    return compose(*parts)
