"""Exact linear algebra over the rationals.

Every routine clears denominators row by row and runs fraction-free
Gauss-Jordan elimination on integers.  The elimination kernel is the
compiled ``_elim`` extension when it is importable, else the pure-Python
``_elim_py`` module; :data:`BACKEND` names the one in use.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .errors import DomainError

try:
    from ._elim import rref_int, BACKEND
except ImportError:  # extension not built
    from ._elim_py import rref_int, BACKEND

__all__ = [
    "BACKEND",
    "MatrixQ",
    "rank",
    "nullspace",
    "solve",
    "rref",
    "sparse_rank",
    "sparse_nullspace",
    "span_contains",
]


@dataclass(frozen=True)
class MatrixQ:
    """Dense rational matrix stored row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DomainError("entries length does not match rows*cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "MatrixQ":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise DomainError("ragged matrix rows")
        return cls(len(rows), cols, tuple(Fraction(v) for r in rows for v in r))

    @classmethod
    def identity(cls, n: int) -> "MatrixQ":
        return cls.from_rows([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "MatrixQ":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    def row(self, i: int) -> list:
        return list(self.entries[i * self.cols : (i + 1) * self.cols])

    def row_list(self) -> list:
        return [self.row(i) for i in range(self.rows)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def transpose(self) -> "MatrixQ":
        return MatrixQ.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], self.rows
        )

    def __matmul__(self, other):
        if isinstance(other, MatrixQ):
            if self.cols != other.rows:
                raise DomainError("dimension mismatch in matrix product")
            out = []
            for i in range(self.rows):
                r = self.row(i)
                out.append(
                    [sum((r[k] * other[k, j] for k in range(self.cols) if r[k]), Fraction(0))
                     for j in range(other.cols)]
                )
            return MatrixQ.from_rows(out, other.cols)
        v = list(other)
        if len(v) != self.cols:
            raise DomainError("dimension mismatch in matrix-vector product")
        return [sum((a * b for a, b in zip(self.row(i), v) if a and b), Fraction(0))
                for i in range(self.rows)]

    def __add__(self, other: "MatrixQ") -> "MatrixQ":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DomainError("dimension mismatch in matrix sum")
        return MatrixQ(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "MatrixQ") -> "MatrixQ":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DomainError("dimension mismatch in matrix difference")
        return MatrixQ(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, c) -> "MatrixQ":
        c = Fraction(c)
        return MatrixQ(self.rows, self.cols, tuple(c * a for a in self.entries))

    def power(self, k: int) -> "MatrixQ":
        if self.rows != self.cols:
            raise DomainError("matrix power needs a square matrix")
        out = MatrixQ.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out


def _integer_row(row: Iterable) -> list:
    row = [v if isinstance(v, Fraction) else Fraction(v) for v in row]
    den = 1
    for v in row:
        if v.denominator != 1:
            den = lcm(den, v.denominator)
    return [v.numerator * (den // v.denominator) for v in row]


def rref(rows: Sequence[Sequence], ncols: int) -> tuple[list, list]:
    """Reduced row echelon form with rational entries and unit pivots."""
    int_rows, pivots = rref_int([_integer_row(r) for r in rows], ncols)
    out = []
    for r, c in zip(int_rows, pivots):
        p = r[c]
        out.append([Fraction(v, p) for v in r])
    return out, pivots


def _kernel_from_rref(int_rows: list, pivots: list, ncols: int) -> list:
    pivot_set = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, c in zip(int_rows, pivots):
            if r[f]:
                v[c] = Fraction(-r[f], r[c])
        basis.append(v)
    return basis


def rank(M: MatrixQ) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    # eliminate along the shorter dimension
    if M.rows > M.cols:
        M = M.transpose()
    _, pivots = rref_int([_integer_row(r) for r in M.row_list()], M.cols)
    return len(pivots)


def nullspace(M: MatrixQ) -> list:
    """Basis of the right kernel, one vector per free column.

    Vector ``k`` has a 1 in the k-th free column, zeros in the other free
    columns, and is determined on the pivot columns by the reduced form.
    """
    if M.cols == 0:
        return []
    int_rows, pivots = rref_int([_integer_row(r) for r in M.row_list()], M.cols)
    return _kernel_from_rref(int_rows, pivots, M.cols)


def solve(M: MatrixQ, b: Sequence) -> list | None:
    """One solution of ``M v = b`` (free variables set to zero), or None."""
    if len(b) != M.rows:
        raise DomainError("right-hand side length does not match the matrix")
    aug = [r + [Fraction(bi)] for r, bi in zip(M.row_list(), b)]
    int_rows, pivots = rref_int([_integer_row(r) for r in aug], M.cols + 1)
    if pivots and pivots[-1] == M.cols:
        return None
    v = [Fraction(0)] * M.cols
    for r, c in zip(int_rows, pivots):
        v[c] = Fraction(r[M.cols], r[c])
    return v


# -- sparse systems -------------------------------------------------------

def _components(rows: Sequence[dict], ncols: int) -> list:
    """Group columns into connected blocks of the row/column incidence graph."""
    parent = list(range(ncols))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for r in rows:
        it = iter(r)
        first = next(it, None)
        if first is None:
            continue
        ra = find(first)
        for c in it:
            rc = find(c)
            if rc != ra:
                parent[rc] = ra
    blocks: dict = {}
    for c in range(ncols):
        blocks.setdefault(find(c), []).append(c)
    row_groups: dict = {k: [] for k in blocks}
    for r in rows:
        if r:
            row_groups[find(next(iter(r)))].append(r)
    return [(cols, row_groups[k]) for k, cols in blocks.items()]


def sparse_nullspace(rows: Sequence[dict], ncols: int) -> list:
    """Kernel basis of a sparse system ``{col: coeff}`` rows, as sparse dicts.

    The system is split into independent blocks first, which keeps the
    dense eliminations small for graded systems.
    """
    basis = []
    for cols, block_rows in sorted(_components(rows, ncols), key=lambda cb: cb[0][0]):
        local = {c: i for i, c in enumerate(cols)}
        dense = []
        for r in block_rows:
            row = [0] * len(cols)
            for c, v in r.items():
                row[local[c]] = v
            dense.append(_integer_row(row))
        int_rows, pivots = rref_int(dense, len(cols))
        for v in _kernel_from_rref(int_rows, pivots, len(cols)):
            basis.append({cols[i]: x for i, x in enumerate(v) if x})
    return basis


def sparse_rank(rows: Sequence[dict], ncols: int) -> int:
    total = 0
    for cols, block_rows in _components(rows, ncols):
        if not block_rows:
            continue
        local = {c: i for i, c in enumerate(cols)}
        dense = []
        for r in block_rows:
            row = [0] * len(cols)
            for c, v in r.items():
                row[local[c]] = v
            dense.append(_integer_row(row))
        if len(dense) > len(cols):
            dense = [list(col) for col in zip(*dense)]
            _, pivots = rref_int(dense, len(block_rows))
        else:
            _, pivots = rref_int(dense, len(cols))
        total += len(pivots)
    return total


def span_contains(basis_rows: Sequence[Sequence], v: Sequence) -> bool:
    """Whether ``v`` lies in the row span of ``basis_rows``."""
    if not any(v):
        return True
    if not basis_rows:
        return False
    n = len(v)
    r0 = len(rref_int([_integer_row(r) for r in basis_rows], n)[1])
    r1 = len(rref_int([_integer_row(r) for r in list(basis_rows) + [v]], n)[1])
    return r0 == r1
