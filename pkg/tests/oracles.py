"""Independent reference computations used to freeze expected values.

Nothing here calls into the package's Smith-form or solver code.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd


def det(rows) -> int:
    n = len(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    sign, out = 1, Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        out *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return int(sign * out)


def invariant_factors(rows) -> list[int]:
    """Smith invariants from determinantal divisors: d_k = D_k / D_{k-1}, D_k = gcd of k-minors."""
    m = len(rows)
    n = len(rows[0]) if rows else 0
    D = [1]
    for k in range(1, min(m, n) + 1):
        g = 0
        for rs in itertools.combinations(range(m), k):
            for cs in itertools.combinations(range(n), k):
                g = gcd(g, det([[rows[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        D.append(g)
    return [D[k] // D[k - 1] for k in range(1, len(D))]


def rank_q(rows) -> int:
    a = [[Fraction(x) for x in r] for r in rows]
    if not a or not a[0]:
        return 0
    m, n, r = len(a), len(a[0]), 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def finite_group_order_from_cyclics(orders) -> int:
    out = 1
    for d in orders:
        out *= d
    return out


def _box_maps(A, B, shift, bound):
    """All degree-``shift`` families A^i -> B^{i+shift} with entries in [-bound, bound]."""
    from weightk.matrix import Matrix

    degs = [i for i in A.degrees() if A.rank(i) and B.rank(i + shift)]
    slots = [(i, r, c) for i in degs for r in range(B.rank(i + shift)) for c in range(A.rank(i))]
    for vals in itertools.product(range(-bound, bound + 1), repeat=len(slots)):
        rows = {i: [[0] * A.rank(i) for _ in range(B.rank(i + shift))] for i in degs}
        for (i, r, c), v in zip(slots, vals):
            rows[i][r][c] = v
        yield {i: Matrix(B.rank(i + shift), A.rank(i), rows[i]) for i in degs}


def homotopy_classes_bruteforce(A, B, bound=3) -> int:
    """Number of classes of chain maps (entries in the box) modulo boundaries d h + h d (box)."""
    from weightk.komplex import ChainMap, homotopy_boundary

    maps = []
    for comps in _box_maps(A, B, 0, bound):
        try:
            maps.append(ChainMap(A, B, comps))
        except Exception:
            continue
    nulls = {_key(homotopy_boundary(A, B, h)) for h in _box_maps(A, B, -1, bound)}
    classes: list[ChainMap] = []
    for f in maps:
        if not any(_key(f - g) in nulls for g in classes):
            classes.append(f)
    return len(classes)


def _key(f):
    return tuple(sorted((i, f[i]) for i in f.degrees() if not f[i].is_zero()))
