"""Exact linear systems over Z, Q and Z/m.

Over Z everything goes through Smith normal form.  Over fields (Q, Z/p) plain
Gauss-Jordan elimination is used.  Over a composite Z/m, ``A x = b (mod m)`` is
lifted to the integer system ``[A | m I] (x, y) = b``.
"""

from __future__ import annotations

from weightk import zmod
from weightk.errors import UnsupportedRing
from weightk.matrix import Matrix
from weightk.rings import Ring


def normalize(A: Matrix, ring: Ring) -> Matrix:
    return A.map(ring.normalize)


def _rref(A: Matrix, ring: Ring) -> tuple[list[list], list[int]]:
    rows = [[ring.normalize(x) for x in r] for r in A.rows]
    m, n = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ring.inverse(rows[r][c])
        rows[r] = [ring.normalize(x * inv) for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [ring.normalize(x - f * y) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return rows, pivots


def rank(A: Matrix, ring: Ring) -> int:
    if ring.is_integers:
        return zmod.integer_rank(A)
    if ring.is_field:
        return len(_rref(A, ring)[1])
    raise UnsupportedRing(f"rank over {ring} is not defined")


def kernel(A: Matrix, ring: Ring) -> Matrix:
    """Basis of the solution space of ``A x = 0`` as columns (saturated lattice over Z)."""
    if ring.is_integers:
        return zmod.integer_kernel(A)
    if not ring.is_field:
        raise UnsupportedRing(f"kernel over {ring}: not a free module in general")
    rows, pivots = _rref(A, ring)
    n = A.ncols
    free = [c for c in range(n) if c not in pivots]
    cols = []
    for fc in free:
        v = [ring.normalize(0)] * n
        v[fc] = ring.normalize(1)
        for r, pc in enumerate(pivots):
            v[pc] = ring.normalize(-rows[r][fc])
        cols.append(v)
    return Matrix.from_columns(cols, n)


def solve(A: Matrix, B: Matrix, ring: Ring) -> Matrix | None:
    """One solution X of ``A X = B`` over ``ring``, or None."""
    if ring.is_integers:
        return zmod.solve_integer(A, B)
    if ring.is_field:
        aug = Matrix.hstack(A, B)
        rows, pivots = _rref(aug, ring)
        n = A.ncols
        if any(p >= n for p in pivots):
            return None
        X = [[ring.normalize(0)] * B.ncols for _ in range(n)]
        for r, pc in enumerate(pivots):
            X[pc] = rows[r][n:]
        return Matrix(n, B.ncols, X)
    m = ring.modulus
    lifted = Matrix.hstack(A, Matrix.identity(A.nrows).scale(m))
    X = zmod.solve_integer(lifted, B)
    if X is None:
        return None
    return X.submatrix(range(A.ncols), range(B.ncols)).reduce_mod(m)


def is_zero(A: Matrix, ring: Ring) -> bool:
    return all(ring.is_zero(x) for r in A.rows for x in r)


def diagonalize(A: Matrix, ring: Ring) -> zmod.SmithForm:
    """``U A V = S`` with S diagonal; Smith form over Z, unit pivots over a field."""
    if ring.is_integers:
        return zmod.smith(A)
    if not ring.is_field:
        raise UnsupportedRing(f"diagonalization over {ring}")
    m, n = A.shape
    nz = ring.normalize
    a = [[nz(x) for x in r] for r in A.rows]
    one, zero = nz(1), nz(0)
    U = [[one if i == j else zero for j in range(m)] for i in range(m)]
    Ui = [[one if i == j else zero for j in range(m)] for i in range(m)]
    V = [[one if i == j else zero for j in range(n)] for i in range(n)]
    Vi = [[one if i == j else zero for j in range(n)] for i in range(n)]
    t = 0
    while t < min(m, n):
        piv = next(((i, j) for i in range(t, m) for j in range(t, n) if a[i][j] != 0), None)
        if piv is None:
            break
        i, j = piv
        a[i], a[t] = a[t], a[i]
        U[i], U[t] = U[t], U[i]
        for row in Ui:
            row[i], row[t] = row[t], row[i]
        for row in a:
            row[j], row[t] = row[t], row[j]
        for row in V:
            row[j], row[t] = row[t], row[j]
        Vi[j], Vi[t] = Vi[t], Vi[j]
        pv = a[t][t]
        c = ring.inverse(pv)
        a[t] = [nz(x * c) for x in a[t]]
        U[t] = [nz(x * c) for x in U[t]]
        for row in Ui:
            row[t] = nz(row[t] * pv)
        for i in range(m):
            if i != t and a[i][t] != 0:
                f = a[i][t]
                a[i] = [nz(x - f * y) for x, y in zip(a[i], a[t])]
                U[i] = [nz(x - f * y) for x, y in zip(U[i], U[t])]
                for row in Ui:
                    row[t] = nz(row[t] + f * row[i])
        for j in range(n):
            if j != t and a[t][j] != 0:
                f = a[t][j]
                for row in a:
                    row[j] = nz(row[j] - f * row[t])
                for row in V:
                    row[j] = nz(row[j] - f * row[t])
                Vi[t] = [nz(x + f * y) for x, y in zip(Vi[t], Vi[j])]
        t += 1
    diag = tuple(a[i][i] for i in range(min(m, n)) if a[i][i] != 0)
    return zmod.SmithForm(
        S=Matrix(m, n, a), U=Matrix(m, m, U), V=Matrix(n, n, V),
        U_inv=Matrix(m, m, Ui), V_inv=Matrix(n, n, Vi), diag=diag,
    )
