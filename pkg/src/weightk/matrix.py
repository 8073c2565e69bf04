"""Dense exact matrices with an explicit shape.

Entries are Python ints (over Z and Z/m) or ``Fraction`` (over Q).  The shape is
stored separately so that 0 x n and n x 0 matrices keep their dimensions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class Matrix:
    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Sequence[Sequence] | None = None):
        if nrows < 0 or ncols < 0:
            raise ValueError("matrix dimensions must be non-negative")
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            self.rows = tuple((0,) * ncols for _ in range(nrows))
        else:
            rows = tuple(tuple(r) for r in rows)
            if len(rows) != nrows or any(len(r) != ncols for r in rows):
                raise ValueError(f"entries do not match shape {nrows}x{ncols}")
            self.rows = rows

    # construction

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
        rows = [list(r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("cannot infer the column count of an empty row list")
            ncols = len(rows[0])
        return cls(len(rows), ncols, rows)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> Matrix:
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> Matrix:
        return cls(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence, nrows: int | None = None, ncols: int | None = None) -> Matrix:
        n = len(entries)
        nrows = n if nrows is None else nrows
        ncols = n if ncols is None else ncols
        rows = [[0] * ncols for _ in range(nrows)]
        for i, e in enumerate(entries):
            rows[i][i] = e
        return cls(nrows, ncols, rows)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> Matrix:
        return cls(nrows, len(cols), [[c[i] for c in cols] for i in range(nrows)])

    @classmethod
    def block_diag(cls, *blocks: Matrix) -> Matrix:
        nr = sum(b.nrows for b in blocks)
        nc = sum(b.ncols for b in blocks)
        rows = [[0] * nc for _ in range(nr)]
        r0 = c0 = 0
        for b in blocks:
            for i, row in enumerate(b.rows):
                rows[r0 + i][c0:c0 + b.ncols] = row
            r0 += b.nrows
            c0 += b.ncols
        return cls(nr, nc, rows)

    @classmethod
    def hstack(cls, *blocks: Matrix) -> Matrix:
        nr = blocks[0].nrows
        if any(b.nrows != nr for b in blocks):
            raise ValueError("hstack: row counts differ")
        rows = [[] for _ in range(nr)]
        for b in blocks:
            for i, row in enumerate(b.rows):
                rows[i].extend(row)
        return cls(nr, sum(b.ncols for b in blocks), rows)

    @classmethod
    def vstack(cls, *blocks: Matrix) -> Matrix:
        nc = blocks[0].ncols
        if any(b.ncols != nc for b in blocks):
            raise ValueError("vstack: column counts differ")
        rows = [row for b in blocks for row in b.rows]
        return cls(len(rows), nc, rows)

    @classmethod
    def block(cls, grid: Sequence[Sequence[Matrix]]) -> Matrix:
        return cls.vstack(*(cls.hstack(*row) for row in grid))

    # access

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.ncols)]

    def to_lists(self) -> list[list]:
        return [list(r) for r in self.rows]

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> Matrix:
        rows = list(rows)
        cols = list(cols)
        return Matrix(len(rows), len(cols), [[self.rows[i][j] for j in cols] for i in rows])

    # arithmetic

    @property
    def T(self) -> Matrix:
        return Matrix(self.ncols, self.nrows, [self.column(j) for j in range(self.ncols)])

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.columns()
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append([sum(a * c[k] for k, a in nz) for c in cols])
        return Matrix(self.nrows, other.ncols, out)

    def apply(self, vec: Sequence) -> tuple:
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * v for a, v in zip(r, vec) if a) for r in self.rows)

    def __add__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix(self.nrows, self.ncols, [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: Matrix) -> Matrix:
        self._check_same(other)
        return Matrix(self.nrows, self.ncols, [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self) -> Matrix:
        return Matrix(self.nrows, self.ncols, [[-a for a in r] for r in self.rows])

    def scale(self, c) -> Matrix:
        return Matrix(self.nrows, self.ncols, [[c * a for a in r] for r in self.rows])

    def map(self, fn) -> Matrix:
        return Matrix(self.nrows, self.ncols, [[fn(a) for a in r] for r in self.rows])

    def reduce_mod(self, m: int) -> Matrix:
        return self.map(lambda a: a % m)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def _check_same(self, other: Matrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    # comparison / display

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.nrows, self.ncols, self.rows))

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}, {self.ncols}, {self.to_json()})"

    def to_json(self) -> list[list]:
        return [[_json_entry(a) for a in r] for r in self.rows]


def _json_entry(a):
    if isinstance(a, Fraction):
        return a.numerator if a.denominator == 1 else str(a)
    return a


def matrix_from_json(data, nrows: int | None = None, ncols: int | None = None) -> Matrix:
    """Build a matrix from nested lists; explicit dims are needed for empty matrices."""
    if not data:
        if nrows is None and ncols is None:
            return Matrix(0, 0)
        return Matrix(nrows or 0, ncols or 0)
    rows = [[_parse_entry(a) for a in r] for r in data]
    m = Matrix.from_rows(rows)
    if (nrows is not None and m.nrows != nrows) or (ncols is not None and m.ncols != ncols):
        raise ValueError(f"matrix has shape {m.shape}, expected {(nrows, ncols)}")
    return m


def _parse_entry(a):
    if isinstance(a, bool):
        raise ValueError("boolean matrix entry")
    if isinstance(a, int):
        return a
    if isinstance(a, str):
        f = Fraction(a)
        return f.numerator if f.denominator == 1 else f
    raise ValueError(f"unsupported matrix entry {a!r}")
