"""Exact square matrices over the integers and over Z/m.

Entries are Python ints, so integer arithmetic never wraps.  A ModMatrix
always stores least non-negative residues; two ModMatrix values are equal
exactly when their entry tuples are equal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union

from .errors import NotInvertible, UsageError

Rows = tuple[tuple[int, ...], ...]


def _as_rows(entries: Iterable[Iterable[int]]) -> Rows:
    rows = tuple(tuple(int(e) for e in row) for row in entries)
    n = len(rows)
    if n == 0:
        raise UsageError("matrix must have at least one row")
    for r in rows:
        if len(r) != n:
            raise UsageError(f"matrix is not square: row of length {len(r)} in a {n}-row matrix")
    return rows


def _mul_rows(a: Rows, b: Rows) -> list[list[int]]:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def _bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    # fraction-free elimination; every division below is exact
    a = [list(r) for r in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _adjugate(rows: Rows) -> list[list[int]]:
    n = len(rows)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(rows) if k != i]
            # adj is the transposed cofactor matrix
            adj[j][i] = (-1) ** (i + j) * _bareiss_det(minor)
    return adj


class _Matrix:
    rows: Rows

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]

    def entries(self) -> tuple[int, ...]:
        return tuple(e for row in self.rows for e in row)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.tolist()}{self._repr_extra()})"

    def _repr_extra(self) -> str:
        return ""


@dataclass(frozen=True, repr=False)
class IntMatrix(_Matrix):
    rows: Rows

    def __init__(self, entries: Iterable[Iterable[int]]):
        object.__setattr__(self, "rows", _as_rows(entries))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int) -> "IntMatrix":
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def diag(cls, *values: int) -> "IntMatrix":
        n = len(values)
        return cls([[values[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def unit(cls, n: int, i: int, j: int) -> "IntMatrix":
        """Matrix unit E_ij (0-based indices)."""
        return cls([[int(r == i and c == j) for c in range(n)] for r in range(n)])

    def _check(self, other: "IntMatrix") -> None:
        if not isinstance(other, IntMatrix):
            raise UsageError(f"cannot combine IntMatrix with {type(other).__name__}")
        if other.n != self.n:
            raise UsageError(f"dimension mismatch: {self.n} vs {other.n}")

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        self._check(other)
        return IntMatrix(_mul_rows(self.rows, other.rows))

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._check(other)
        return IntMatrix([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._check(other)
        return IntMatrix([[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> "IntMatrix":
        return IntMatrix([[-x for x in r] for r in self.rows])

    def __rmul__(self, scalar: int) -> "IntMatrix":
        return IntMatrix([[scalar * x for x in r] for r in self.rows])

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(zip(*self.rows))

    def det(self) -> int:
        return _bareiss_det(self.rows)

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.n))

    def inverse(self) -> "IntMatrix":
        d = self.det()
        if d not in (1, -1):
            raise NotInvertible(d)
        return IntMatrix([[d * x for x in r] for r in _adjugate(self.rows)])

    def mod(self, m: int) -> "ModMatrix":
        return ModMatrix(self.rows, m)


@dataclass(frozen=True, repr=False)
class ModMatrix(_Matrix):
    rows: Rows
    m: int

    def __init__(self, entries: Iterable[Iterable[int]], m: int):
        m = int(m)
        if m < 2:
            raise UsageError(f"modulus must be >= 2, got {m}")
        rows = _as_rows(entries)
        object.__setattr__(self, "rows", tuple(tuple(e % m for e in r) for r in rows))
        object.__setattr__(self, "m", m)

    @classmethod
    def identity(cls, n: int, m: int) -> "ModMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], m)

    def _repr_extra(self) -> str:
        return f", m={self.m}"

    def _check(self, other: "ModMatrix") -> None:
        if not isinstance(other, ModMatrix):
            raise UsageError(f"cannot combine ModMatrix with {type(other).__name__}")
        if other.n != self.n:
            raise UsageError(f"dimension mismatch: {self.n} vs {other.n}")
        if other.m != self.m:
            raise UsageError(f"modulus mismatch: {self.m} vs {other.m}")

    def __matmul__(self, other: "ModMatrix") -> "ModMatrix":
        self._check(other)
        return ModMatrix(_mul_rows(self.rows, other.rows), self.m)

    def __add__(self, other: "ModMatrix") -> "ModMatrix":
        self._check(other)
        return ModMatrix([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.m)

    def __neg__(self) -> "ModMatrix":
        return ModMatrix([[-x for x in r] for r in self.rows], self.m)

    def __rmul__(self, scalar: int) -> "ModMatrix":
        return ModMatrix([[scalar * x for x in r] for r in self.rows], self.m)

    @property
    def T(self) -> "ModMatrix":
        return ModMatrix(zip(*self.rows), self.m)

    def det(self) -> int:
        return _bareiss_det(self.rows) % self.m

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(self.n)) % self.m

    def inverse(self) -> "ModMatrix":
        d = self.det()
        try:
            d_inv = pow(d, -1, self.m)
        except ValueError:
            raise NotInvertible(d, self.m) from None
        return ModMatrix([[d_inv * x for x in r] for r in _adjugate(self.rows)], self.m)

    def lift(self) -> IntMatrix:
        return IntMatrix(self.rows)


Matrix = Union[IntMatrix, ModMatrix]


# Function-style surface; each is a thin wrapper over the methods above.

def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    return a @ b


def transpose(a: Matrix) -> Matrix:
    return a.T


def det(a: IntMatrix) -> int:
    return a.det()


def det_mod(a: ModMatrix) -> int:
    return a.det()


def inverse(a: Matrix) -> Matrix:
    return a.inverse()


def trace(a: Matrix) -> int:
    return a.trace()


def reduce_mod(a: IntMatrix, m: int) -> ModMatrix:
    if m < 2:
        raise UsageError(f"modulus must be >= 2, got {m}")
    return ModMatrix(a.rows, m)


def identity_like(a: Matrix) -> Matrix:
    if isinstance(a, ModMatrix):
        return ModMatrix.identity(a.n, a.m)
    return IntMatrix.identity(a.n)


def block_diag(*blocks: Matrix) -> IntMatrix:
    """Block diagonal IntMatrix; ModMatrix blocks contribute their residues."""
    n = sum(b.n for b in blocks)
    out = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i in range(b.n):
            for j in range(b.n):
                out[off + i][off + j] = b.rows[i][j]
        off += b.n
    return IntMatrix(out)


def parse_matrix(text: str) -> IntMatrix:
    """Parse the JSON object form or the plain-text form (``n`` then n rows)."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad matrix JSON: {exc}") from None
        if not isinstance(data, dict) or "n" not in data or "entries" not in data:
            raise UsageError('matrix JSON needs keys "n" and "entries"')
        n, rows = data["n"], data["entries"]
    else:
        lines = [ln for ln in stripped.splitlines() if ln.strip()]
        if not lines:
            raise UsageError("empty matrix file")
        try:
            n = int(lines[0])
            rows = [[int(tok) for tok in ln.split()] for ln in lines[1:]]
        except ValueError as exc:
            raise UsageError(f"bad matrix text: {exc}") from None
    if not isinstance(n, int) or n < 1:
        raise UsageError(f"bad dimension {n!r}")
    if len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
        raise UsageError(f"expected {n} rows of {n} integers")
    if any(isinstance(e, bool) or not isinstance(e, int) for r in rows for e in r):
        raise UsageError("matrix entries must be integers")
    return IntMatrix(rows)


def load_matrix(path: str | Path) -> IntMatrix:
    return parse_matrix(Path(path).read_text(encoding="utf-8"))


def dump_matrix(a: Matrix) -> str:
    return json.dumps({"n": a.n, "entries": a.tolist()})
