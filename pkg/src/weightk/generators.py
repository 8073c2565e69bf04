"""Seeded random complexes, chain maps and witnesses for the property suites.

Every complex is assembled from elementary blocks (a single ``R`` in one degree, or
``R -a-> R`` in two adjacent degrees) and then conjugated by random unimodular basis
changes.  The block form doubles as an oracle: ranks, contractible parts and chain
maps are known by construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd

from weightk.komplex import Block, ChainMap, Complex, block_complex, homotopy_boundary
from weightk.matrix import Matrix
from weightk import zmod
from weightk.rings import ZZ, Ring, Zmod


@dataclass(frozen=True)
class BlockComplex:
    """A complex in block form plus the basis change that produced ``complex``."""

    blocks: tuple[Block, ...]
    complex: Complex
    P: dict[int, Matrix]  # complex = P . block_form . P^{-1}
    P_inv: dict[int, Matrix]


def case_rng(seed: int, suite: str, index: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{index}")


def random_unimodular(n: int, rng: random.Random, steps: int | None = None) -> tuple[Matrix, Matrix]:
    """A random ``P`` in GL_n(Z) together with its inverse."""
    P = [[int(i == j) for j in range(n)] for i in range(n)]
    Q = [[int(i == j) for j in range(n)] for i in range(n)]
    if n >= 2:
        for _ in range(steps if steps is not None else 2 * n):
            i, j = rng.sample(range(n), 2)
            c = rng.choice((-2, -1, 1, 2))
            # P <- E P with E = 1 + c e_ij ; Q <- Q E^{-1}
            P[i] = [a + c * b for a, b in zip(P[i], P[j])]
            for row in Q:
                row[j] -= c * row[i]
    for i in range(n):
        if rng.random() < 0.3:
            P[i] = [-a for a in P[i]]
            for row in Q:
                row[i] = -row[i]
    return Matrix(n, n, P), Matrix(n, n, Q)


def random_blocks(rng: random.Random, lo: int, hi: int, max_rank: int = 4,
                  mults=(1, 1, 2, 3, 4, 6), n_blocks: int | None = None,
                  one_term: bool = True, two_term: bool = True) -> tuple[Block, ...]:
    """Blocks supported in ``[lo, hi]`` with every term of rank <= max_rank."""
    n_blocks = rng.randint(1, 4) if n_blocks is None else n_blocks
    used: dict[int, int] = {}
    out = []
    for _ in range(n_blocks * 3):
        if len(out) == n_blocks:
            break
        kinds = [k for k, ok in (("one", one_term), ("two", two_term and hi > lo)) if ok]
        kind = rng.choice(kinds)
        if kind == "one":
            blk = Block(rng.randint(lo, hi), None)
        else:
            blk = Block(rng.randint(lo, hi - 1), rng.choice(mults))
        if any(used.get(i, 0) >= max_rank for i in blk.degrees):
            continue
        for i in blk.degrees:
            used[i] = used.get(i, 0) + 1
        out.append(blk)
    return tuple(out)


def conjugate(C: Complex, rng: random.Random) -> tuple[Complex, dict[int, Matrix], dict[int, Matrix]]:
    P, P_inv = {}, {}
    for i in range(C.support[0] - 1, C.support[1] + 2) if C.support else ():
        P[i], P_inv[i] = random_unimodular(C.rank(i), rng)
    if not P:
        return C, P, P_inv
    return C.change_basis(P, P_inv), P, P_inv


def random_block_complex(rng: random.Random, lo: int = -2, hi: int = 2, max_rank: int = 4,
                         ring: Ring = ZZ, **kw) -> BlockComplex:
    blocks = random_blocks(rng, lo, hi, max_rank, **kw)
    base, _ = block_complex(blocks, ring)
    C, P, P_inv = conjugate(base, rng)
    return BlockComplex(blocks, C, P, P_inv)


def random_complex(rng: random.Random, lo: int = -2, hi: int = 2, max_rank: int = 4, ring: Ring = ZZ) -> Complex:
    return random_block_complex(rng, lo, hi, max_rank, ring).complex


def random_contractible(rng: random.Random, lo: int = -2, hi: int = 2, max_rank: int = 4) -> BlockComplex:
    """Sum of identity cones ``R -1-> R`` in random positions, conjugated."""
    return random_block_complex(rng, lo, hi, max_rank, mults=(1,), one_term=False)


def _transport(P: dict[int, Matrix], i: int, n: int) -> Matrix:
    return P.get(i, Matrix.identity(n))


def random_block_map(rng: random.Random, A: BlockComplex, B: BlockComplex, coeff: int = 3) -> ChainMap:
    """A random chain map between the underlying complexes, built on block forms."""
    Ab, la = block_complex(A.blocks, A.complex.ring)
    Bb, lb = block_complex(B.blocks, B.complex.ring)
    comps: dict[int, list[list[int]]] = {
        i: [[0] * Ab.rank(i) for _ in range(Bb.rank(i))] for i in set(la) & set(lb)
    }

    def put(i, bb, bs, ab, as_, v):
        r = lb[i].index((bb, bs))
        c = la[i].index((ab, as_))
        comps[i][r][c] += v

    for ai, ablk in enumerate(A.blocks):
        for bi, bblk in enumerate(B.blocks):
            t = rng.randint(-coeff, coeff)
            if not t:
                continue
            if ablk.mult is None and bblk.mult is None and ablk.degree == bblk.degree:
                put(ablk.degree, bi, 0, ai, 0, t)
            elif ablk.mult is None and bblk.mult is not None and ablk.degree == bblk.degree + 1:
                put(ablk.degree, bi, 1, ai, 0, t)
            elif ablk.mult is not None and bblk.mult is None and ablk.degree == bblk.degree:
                put(ablk.degree, bi, 0, ai, 0, t)
            elif ablk.mult is not None and bblk.mult is not None and ablk.degree == bblk.degree:
                g = gcd(ablk.mult, bblk.mult)
                put(ablk.degree, bi, 0, ai, 0, t * ablk.mult // g)
                put(ablk.degree + 1, bi, 1, ai, 1, t * bblk.mult // g)
    f = {i: Matrix(Bb.rank(i), Ab.rank(i), rows) for i, rows in comps.items()}
    # random null-homotopic part d h + h d
    h = {}
    for i in Ab.degrees():
        r, c = Bb.rank(i - 1), Ab.rank(i)
        if r and c:
            h[i] = Matrix(r, c, [[rng.randint(-1, 1) for _ in range(c)] for _ in range(r)])
    nh = homotopy_boundary(Ab, Bb, h)
    comps_total = {i: f.get(i, Matrix.zeros(Bb.rank(i), Ab.rank(i))) + nh[i] for i in nh.degrees()}
    # transport to the conjugated complexes: B.P f A.P^{-1}
    out = {}
    for i, m in comps_total.items():
        if m.nrows and m.ncols:
            out[i] = _transport(B.P, i, m.nrows) @ m @ _transport(A.P_inv, i, m.ncols)
    return ChainMap(A.complex, B.complex, out)


def random_chain_map(rng: random.Random, lo: int = -2, hi: int = 2, max_rank: int = 4) -> ChainMap:
    A = random_block_complex(rng, lo, hi, max_rank)
    B = random_block_complex(rng, lo, hi, max_rank)
    return random_block_map(rng, A, B)


@dataclass(frozen=True)
class Equivalence:
    """``f: C -> D`` and ``g: D -> C`` with ``g f = id_C``; D is C plus a contractible summand."""

    f: ChainMap
    g: ChainMap


def random_equivalence(rng: random.Random, lo: int = -2, hi: int = 2, max_rank: int = 4) -> Equivalence:
    core = random_blocks(rng, lo, hi, max(1, max_rank - 1), n_blocks=rng.randint(1, 3))
    extra = random_blocks(rng, lo, hi, 1, mults=(1,), one_term=False, n_blocks=rng.randint(1, 2))
    Cb, lc = block_complex(core, ZZ)
    Db, ld = block_complex(core + extra, ZZ)
    C, Pc, Pci = conjugate(Cb, rng)
    D, Pd, Pdi = conjugate(Db, rng)
    f, g = {}, {}
    for i in Cb.degrees():
        inc = Matrix(Db.rank(i), Cb.rank(i), [[int(ld[i][r] == lc[i][c]) for c in range(Cb.rank(i))]
                                              for r in range(Db.rank(i))])
        if inc.nrows and inc.ncols:
            f[i] = _transport(Pd, i, inc.nrows) @ inc @ _transport(Pci, i, inc.ncols)
            g[i] = _transport(Pc, i, inc.ncols) @ inc.T @ _transport(Pdi, i, inc.nrows)
    return Equivalence(ChainMap(C, D, f), ChainMap(D, C, g))


def random_chain_complex_mod(rng: random.Random, m: int, p: int, lo: int = -2, hi: int = 2,
                             max_rank: int = 3) -> Complex:
    """A complex over ``Z/m`` mixing reduced integer blocks with chains ``R -p-> R -p-> R``.

    With ``m = p^2`` the chains do not lift to complexes over Z and do not split.
    """
    ring = Zmod(m)
    pieces: list[Complex] = []
    used: dict[int, int] = {}
    for _ in range(rng.randint(1, 3)):
        if rng.random() < 0.5 and hi - lo >= 1:
            length = rng.randint(1, min(2, hi - lo))
            start = rng.randint(lo, hi - length)
            degs = range(start, start + length + 1)
            piece = Complex({i: 1 for i in degs},
                            {i: Matrix(1, 1, [[p]]) for i in degs if i + 1 in degs}, ring)
        else:
            blk = random_blocks(rng, lo, hi, 1, n_blocks=1)
            if not blk:
                continue
            piece = block_complex(blk, ring)[0]
        if any(used.get(i, 0) + piece.rank(i) > max_rank for i in piece.degrees()):
            continue
        for i in piece.degrees():
            used[i] = used.get(i, 0) + piece.rank(i)
        pieces.append(piece)
    if not pieces:
        pieces.append(Complex.one_term(1, 0, ring))
    C = pieces[0]
    for piece in pieces[1:]:
        C = C + piece
    return conjugate(C, rng)[0]


def _random_matrix(rng: random.Random, r: int, c: int, bound: int = 2) -> Matrix:
    return Matrix(r, c, [[rng.randint(-bound, bound) for _ in range(c)] for _ in range(r)])


def _kernel_generators(d: Matrix, ring: Ring) -> Matrix:
    """Columns generating ``{x : d x = 0}`` over Z or Z/m."""
    n = d.ncols
    if not d.nrows:
        return Matrix.identity(n)
    if ring.is_integers:
        return zmod.integer_kernel(d)
    m = ring.modulus
    K = zmod.integer_kernel(Matrix.hstack(d, Matrix.identity(d.nrows).scale(m)))
    return K.submatrix(range(n), range(K.ncols)).reduce_mod(m)


def _random_k(rng: random.Random, A: Complex, B: Complex, i: int) -> Matrix:
    """A map ``k: A^i -> B^{i-1}`` with ``d_B k d_A = 0``."""
    r, c = B.rank(i - 1), A.rank(i)
    if rng.random() < 0.5:
        ker = _kernel_generators(B.d(i - 1), B.ring)  # columns u with d_B u = 0
        if ker.ncols:
            u = ker @ _random_matrix(rng, ker.ncols, 1)
            return u @ _random_matrix(rng, 1, c)
    else:
        coker = _kernel_generators(A.d(i - 1).T, A.ring)  # rows v with v d_A = 0
        if coker.ncols:
            v = coker @ _random_matrix(rng, coker.ncols, 1)
            return _random_matrix(rng, r, 1) @ v.T
    return Matrix.zeros(r, c)


def weak_perturbation(rng: random.Random, m2: ChainMap) -> ChainMap:
    """``m2 + d h + j d`` with ``j = h + k`` and ``d_B k d_A = 0``, so the result is a chain map."""
    A, B = m2.source, m2.target
    h, j = {}, {}
    for i in A.degrees():
        r, c = B.rank(i - 1), A.rank(i)
        if r and c:
            h[i] = _random_matrix(rng, r, c)
            j[i] = h[i] + _random_k(rng, A, B, i)
    m1 = m2 + homotopy_boundary(A, B, h, j)
    return ChainMap(A, B, {i: m1[i] for i in m1.degrees()})


def random_weak_pair(rng: random.Random, lo: int = -2, hi: int = 2, max_rank: int = 3,
                     modulus: int | None = None) -> tuple[ChainMap, ChainMap]:
    """A weakly homotopic pair ``(m1, m2)``; over Z, or over ``Z/p^2`` when ``modulus`` is given."""
    if modulus is None:
        A = random_block_complex(rng, lo, hi, max_rank)
        B = random_block_complex(rng, lo, hi, max_rank)
        m2 = random_block_map(rng, A, B)
    else:
        p = next(q for q in range(2, modulus + 1) if modulus % q == 0)
        A_c = random_chain_complex_mod(rng, modulus, p, lo, hi, max_rank)
        if rng.random() < 0.5:
            B_c = A_c
            c = rng.randint(0, modulus - 1)
            base = ChainMap(A_c, A_c, {i: Matrix.identity(A_c.rank(i)).scale(c) for i in A_c.degrees()})
        else:
            B_c = random_chain_complex_mod(rng, modulus, p, lo, hi, max_rank)
            base = ChainMap.zero(A_c, B_c)
        h = {i: _random_matrix(rng, B_c.rank(i - 1), A_c.rank(i)) for i in A_c.degrees()
             if B_c.rank(i - 1) and A_c.rank(i)}
        m2 = base + homotopy_boundary(A_c, B_c, h)
        m2 = ChainMap(A_c, B_c, {i: m2[i] for i in m2.degrees()})
    return weak_perturbation(rng, m2), m2


def weak_not_homotopic_fixture() -> tuple[ChainMap, ChainMap]:
    """``A = B = (Z/4 -2-> Z/4)`` in degrees 0, 1 with ``m1 = (0, 2)`` and ``m2 = 0``.

    ``m1 = d h + j d`` with ``h = 1, j = 0``; a single ``h`` would need ``2h = 0`` and ``2h = 2``.
    """
    ring = Zmod(4)
    A = Complex({0: 1, 1: 1}, {0: Matrix(1, 1, [[2]])}, ring)
    m1 = ChainMap(A, A, {1: Matrix(1, 1, [[2]])})
    return m1, ChainMap.zero(A, A)


def shifted_support(rng: random.Random, C: Complex, lo: int, hi: int) -> Complex:
    """Conjugate of ``C`` plus identity cones placed anywhere in ``[lo, hi]``."""
    extra = random_blocks(rng, lo, hi, 1, mults=(1,), one_term=False, n_blocks=rng.randint(0, 2))
    if not extra:
        return C
    Eb, _ = block_complex(extra, C.ring)
    return conjugate(C + Eb, rng)[0]


def weight_le_sample(rng: random.Random, n: int = 0, width: int = 3) -> Complex:
    """A complex homotopy equivalent to one supported in degrees ``>= -n``."""
    core = random_complex(rng, -n, -n + width - 1)
    return shifted_support(rng, core, -n - 2, -n + width)


def weight_ge_sample(rng: random.Random, n: int = 1, width: int = 3) -> Complex:
    """A complex homotopy equivalent to one supported in degrees ``<= -n``."""
    core = random_complex(rng, -n - width + 1, -n)
    return shifted_support(rng, core, -n - width, -n + 2)
