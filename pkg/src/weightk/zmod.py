"""Finitely generated abelian groups in Smith-normal canonical form.

A module ``Z^r + Z/d1 + ... + Z/dk`` is stored as its free rank and divisor chain
``d1 | d2 | ... | dk`` (each ``di >= 2``), so isomorphism is field equality.  Its
canonical generators are ordered free ones first, then the torsion ones in chain
order; a ``ModuleMap`` is an integer matrix on these generators.

Everything here is exact integer arithmetic driven by one Smith normal form
routine.  Modules stand in for finitely generated Z_l-modules: l-localization is
applied only when extracting Grothendieck-group classes (``k0_class(..., ell=l)``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Mapping, Sequence

from weightk.classes import K0Class
from weightk.errors import CompositionNonzero, IncompatibleMap
from weightk.matrix import Matrix

# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == S`` with ``S`` diagonal; ``diag`` lists the nonzero entries."""

    S: Matrix
    U: Matrix
    V: Matrix
    U_inv: Matrix
    V_inv: Matrix
    diag: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.diag)


def smith(A: Matrix) -> SmithForm:
    m, n = A.shape
    a = [list(r) for r in A.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_add(i, t, c):  # R_i += c R_t
        ai, at = a[i], a[t]
        for j in range(n):
            if at[j]:
                ai[j] += c * at[j]
        ui, ut = U[i], U[t]
        for j in range(m):
            if ut[j]:
                ui[j] += c * ut[j]
        for row in Ui:  # column t -= c column i
            if row[i]:
                row[t] -= c * row[i]

    def col_add(j, t, c):  # C_j += c C_t
        for row in a:
            if row[t]:
                row[j] += c * row[t]
        for row in V:
            if row[t]:
                row[j] += c * row[t]
        vt, vj = Vi[t], Vi[j]  # row t -= c row j
        for k in range(n):
            if vj[k]:
                vt[k] -= c * vj[k]

    def swap_rows(i, t):
        a[i], a[t] = a[t], a[i]
        U[i], U[t] = U[t], U[i]
        for row in Ui:
            row[i], row[t] = row[t], row[i]

    def swap_cols(j, t):
        for row in a:
            row[j], row[t] = row[t], row[j]
        for row in V:
            row[j], row[t] = row[t], row[j]
        Vi[j], Vi[t] = Vi[t], Vi[j]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = a[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, bi, bj = best
        if bi != t:
            swap_rows(bi, t)
        if bj != t:
            swap_cols(bj, t)
        while True:
            p = a[t][t]
            restart = False
            for i in range(t + 1, m):
                if a[i][t]:
                    row_add(i, t, -(a[i][t] // p))
                    if a[i][t]:
                        swap_rows(i, t)
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, n):
                if a[t][j]:
                    col_add(j, t, -(a[t][j] // p))
                    if a[t][j]:
                        swap_cols(j, t)
                        restart = True
                        break
            if restart:
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(a[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            row_add(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]
            for row in Ui:
                row[t] = -row[t]
        t += 1
    diag = tuple(a[i][i] for i in range(min(m, n)) if a[i][i])
    return SmithForm(
        S=Matrix(m, n, a),
        U=Matrix(m, m, U),
        V=Matrix(n, n, V),
        U_inv=Matrix(m, m, Ui),
        V_inv=Matrix(n, n, Vi),
        diag=diag,
    )


def smith_normal_form(A: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return ``(S, U, V)`` with ``U @ A @ V == S`` and S's diagonal a divisor chain."""
    sf = smith(A)
    return sf.S, sf.U, sf.V


def invariant_factors(A: Matrix) -> tuple[int, ...]:
    return smith(A).diag


def integer_kernel(A: Matrix) -> Matrix:
    """Basis (as columns) of the saturated lattice ``{x in Z^n : A x = 0}``."""
    sf = smith(A)
    return sf.V.submatrix(range(A.ncols), range(sf.rank, A.ncols))


def lattice_basis(G: Matrix) -> Matrix:
    """Basis (as columns) of the lattice spanned by the columns of ``G``."""
    sf = smith(G)
    cols = [tuple(s * x for x in sf.U_inv.column(i)) for i, s in enumerate(sf.diag)]
    return Matrix.from_columns(cols, G.nrows)


def solve_integer(A: Matrix, B: Matrix) -> Matrix | None:
    """One integer solution X of ``A X = B``, or None when none exists."""
    if A.nrows != B.nrows:
        raise ValueError("solve_integer: row mismatch")
    sf = smith(A)
    C = sf.U @ B
    r = sf.rank
    Y = []
    for i in range(A.ncols):
        if i < r:
            s = sf.diag[i]
            row = []
            for c in C.rows[i]:
                if c % s:
                    return None
                row.append(c // s)
            Y.append(row)
        else:
            Y.append([0] * B.ncols)
    for i in range(r, A.nrows):
        if any(C.rows[i]):
            return None
    return sf.V @ Matrix(A.ncols, B.ncols, Y)


def integer_rank(A: Matrix) -> int:
    return smith(A).rank


# ---------------------------------------------------------------------------
# Modules


def factorize(n: int) -> dict[int, int]:
    """Trial-division factorization; inputs are desk-scale."""
    n = abs(n)
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_powers(n: int) -> list[int]:
    return [p**k for p, k in sorted(factorize(n).items())]


def _chain_from_orders(orders: Sequence[int]) -> tuple[int, ...]:
    """Invariant factors of the direct sum of cyclic groups of the given orders."""
    by_prime: dict[int, list[int]] = {}
    for d in orders:
        if d == 0:
            raise ValueError("use free_rank for infinite cyclic summands")
        for p, k in factorize(d).items():
            by_prime.setdefault(p, []).append(p**k)
    if not by_prime:
        return ()
    length = max(len(v) for v in by_prime.values())
    chain = [1] * length
    for p, powers in by_prime.items():
        powers.sort(reverse=True)
        for i, q in enumerate(powers):
            chain[length - 1 - i] *= q
    return tuple(d for d in chain if d > 1)


@dataclass(frozen=True)
class FgModule:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("free rank must be >= 0")
        for d in self.torsion:
            if d < 2:
                raise ValueError(f"torsion divisor {d} < 2")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"torsion {self.torsion} is not a divisor chain")

    @classmethod
    def from_cyclics(cls, free_rank: int = 0, orders: Sequence[int] = ()) -> FgModule:
        """Canonical form of ``Z^free_rank`` plus cyclic groups of the given orders."""
        return cls(free_rank, _chain_from_orders([d for d in orders if d != 1]))

    @classmethod
    def free(cls, r: int) -> FgModule:
        return cls(r, ())

    @classmethod
    def cyclic(cls, d: int) -> FgModule:
        return cls(1, ()) if d == 0 else cls.from_cyclics(0, [d])

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion)

    @property
    def orders(self) -> tuple[int, ...]:
        """Order of each canonical generator, 0 meaning infinite."""
        return (0,) * self.free_rank + self.torsion

    def relation_matrix(self) -> Matrix:
        cols = []
        for j, d in enumerate(self.torsion):
            col = [0] * self.ngens
            col[self.free_rank + j] = d
            cols.append(col)
        return Matrix.from_columns(cols, self.ngens)

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int | None:
        if self.free_rank:
            return None
        return reduce(lambda x, y: x * y, self.torsion, 1)

    def exponent(self) -> int | None:
        if self.free_rank:
            return None
        return self.torsion[-1] if self.torsion else 1

    def elementary_divisors(self) -> list[int]:
        return sorted(q for d in self.torsion for q in prime_powers(d))

    def __add__(self, other: FgModule) -> FgModule:
        return FgModule.from_cyclics(self.free_rank + other.free_rank, self.torsion + other.torsion)

    def __mul__(self, k: int) -> FgModule:
        return FgModule.from_cyclics(self.free_rank * k, self.torsion * k)

    __rmul__ = __mul__

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"

    @classmethod
    def parse(cls, text: str) -> FgModule:
        """Inverse of ``str``; also accepts non-canonical sums like ``Z/2 + Z/3 + Z``."""
        text = text.strip()
        if text in ("0", ""):
            return cls()
        free = 0
        orders: list[int] = []
        for part in text.split("+"):
            part = part.strip().replace(" ", "")
            if part == "Z":
                free += 1
            elif part.startswith("Z^"):
                free += int(part[2:])
            elif part.startswith("Z/"):
                d = int(part[2:])
                if d < 1:
                    raise ValueError(f"bad cyclic order in {part!r}")
                orders.append(d)
            elif part == "0":
                continue
            else:
                raise ValueError(f"cannot parse module summand {part!r}")
        return cls.from_cyclics(free, orders)


ZERO = FgModule()
Z = FgModule(1)


def direct_sum(*mods: FgModule) -> FgModule:
    return reduce(lambda a, b: a + b, mods, ZERO)


def cokernel(A: Matrix) -> FgModule:
    """``Z^rows / colspan(A)`` in canonical form."""
    diag = smith(A).diag
    return FgModule(A.nrows - len(diag), tuple(d for d in diag if d > 1))


def torsion_part(M: FgModule) -> FgModule:
    return FgModule(0, M.torsion)


def free_part(M: FgModule) -> FgModule:
    return FgModule(M.free_rank, ())


def tensor_mod(M: FgModule, n: int) -> FgModule:
    """``M (x) Z/n``."""
    if n < 2:
        raise ValueError("modulus must be >= 2")
    return FgModule.from_cyclics(0, [n] * M.free_rank + [gcd(d, n) for d in M.torsion])


def ell_torsion(M: FgModule, n: int) -> FgModule:
    """The n-torsion submodule ``{x : n x = 0}``."""
    if n < 2:
        raise ValueError("modulus must be >= 2")
    return FgModule.from_cyclics(0, [gcd(d, n) for d in M.torsion])


def tensor(M: FgModule, N: FgModule) -> FgModule:
    orders = [0] * M.free_rank + list(M.torsion)
    other = [0] * N.free_rank + list(N.torsion)
    free = 0
    tors: list[int] = []
    for a in orders:
        for b in other:
            g = gcd(a, b)
            if g == 0:
                free += 1
            else:
                tors.append(g)
    return FgModule.from_cyclics(free, tors)


def tor1(M: FgModule, N: FgModule) -> FgModule:
    return FgModule.from_cyclics(0, [gcd(a, b) for a in M.torsion for b in N.torsion])


def mod_ln_cohomology(H_i: FgModule, H_next: FgModule, n: int, ell: int) -> FgModule:
    """Middle term of ``0 -> H_i / l^n -> X -> H_next[l^n] -> 0``.

    The extension is resolved as split; only the order of X is extension-independent.
    """
    if n < 1:
        raise ValueError("exponent must be >= 1")
    q = ell**n
    return tensor_mod(H_i, q) + ell_torsion(H_next, q)


# ---------------------------------------------------------------------------
# Module maps and homology


@dataclass(frozen=True)
class ModuleMap:
    """A homomorphism given on canonical generators (column j = image of generator j)."""

    source: FgModule
    target: FgModule
    matrix: Matrix
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self):
        if self.matrix.shape != (self.target.ngens, self.source.ngens):
            raise IncompatibleMap(
                f"matrix shape {self.matrix.shape} does not fit {self.source} -> {self.target}"
            )
        if self.check and not self._respects_relations():
            raise IncompatibleMap(f"matrix does not respect the relations of {self.source}")

    def _respects_relations(self) -> bool:
        t_orders = self.target.orders
        for j, d in enumerate(self.source.orders):
            if d == 0:
                continue
            for i, e in enumerate(t_orders):
                x = d * self.matrix[i, j]
                if (e == 0 and x != 0) or (e and x % e):
                    return False
        return True

    @classmethod
    def zero(cls, source: FgModule, target: FgModule) -> ModuleMap:
        return cls(source, target, Matrix.zeros(target.ngens, source.ngens))

    @classmethod
    def identity(cls, M: FgModule) -> ModuleMap:
        return cls(M, M, Matrix.identity(M.ngens))

    def reduced(self) -> Matrix:
        """Matrix with torsion-target rows reduced mod the generator order."""
        orders = self.target.orders
        return Matrix(
            self.matrix.nrows,
            self.matrix.ncols,
            [[x % e if e else x for x in row] for row, e in zip(self.matrix.rows, orders)],
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModuleMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and self.reduced() == other.reduced()
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.reduced()))

    def compose(self, first: ModuleMap) -> ModuleMap:
        """``self o first``."""
        if first.target != self.source:
            raise IncompatibleMap("composition: target/source mismatch")
        return ModuleMap(first.source, self.target, self.matrix @ first.matrix)

    def __sub__(self, other: ModuleMap) -> ModuleMap:
        return ModuleMap(self.source, self.target, self.matrix - other.matrix)

    def is_zero(self) -> bool:
        return self.reduced().is_zero()


def _in_relations(M: FgModule, vecs: Matrix) -> bool:
    orders = M.orders
    return all(
        (x == 0) if e == 0 else (x % e == 0) for row, e in zip(vecs.rows, orders) for x in row
    )


@dataclass(frozen=True)
class HomologyData:
    """``ker / im`` with explicit canonical generators.

    ``reps`` holds one cycle (in the middle module's generator coordinates) per canonical
    generator of ``module``; ``coordinates`` maps any cycle to canonical coordinates.
    """

    module: FgModule
    middle: FgModule
    kernel_basis: Matrix
    reps: Matrix
    _U: Matrix
    _rows: tuple[int, ...]

    def coordinates(self, cycles: Matrix) -> Matrix:
        c = solve_integer(self.kernel_basis, cycles)
        if c is None:
            raise ValueError("vector is not a cycle")
        y = self._U @ c
        orders = self.module.orders
        return Matrix(
            len(self._rows),
            cycles.ncols,
            [[x % e if e else x for x in y.rows[i]] for i, e in zip(self._rows, orders)],
        )


def homology_data(d_in: ModuleMap, d_out: ModuleMap) -> HomologyData:
    if d_in.target != d_out.source:
        raise IncompatibleMap("homology: d_in target differs from d_out source")
    B = d_in.target
    if not _in_relations(d_out.target, d_out.matrix @ d_in.matrix):
        raise CompositionNonzero("d_out o d_in != 0")
    # ker(d_out) = projection of the integer kernel of [G | R_C]
    big = Matrix.hstack(d_out.matrix, d_out.target.relation_matrix())
    kern = integer_kernel(big)
    proj = kern.submatrix(range(B.ngens), range(kern.ncols))
    K = lattice_basis(proj) if proj.ncols else Matrix(B.ngens, 0)
    images = Matrix.hstack(d_in.matrix, B.relation_matrix())
    W = solve_integer(K, images)
    if W is None:  # pragma: no cover - guarded by the composition check
        raise CompositionNonzero("image does not lie in the kernel")
    sf = smith(W)
    k = K.ncols
    r = sf.rank
    free_rows = tuple(range(r, k))
    tors_rows = tuple(i for i, s in enumerate(sf.diag) if s > 1)
    module = FgModule(len(free_rows), tuple(sf.diag[i] for i in tors_rows))
    rows = free_rows + tors_rows
    reps = K @ sf.U_inv.submatrix(range(k), rows)
    return HomologyData(module, B, K, reps, sf.U, rows)


def homology(d_in: ModuleMap, d_out: ModuleMap) -> FgModule:
    """``ker(d_out) / im(d_in)`` in canonical form."""
    return homology_data(d_in, d_out).module


def presented_homology(d_in: Matrix, d_out: Matrix, rel_mid: Matrix, rel_out: Matrix) -> FgModule:
    """Homology at a middle module given by generators and relation columns ``rel_mid``.

    The middle is ``Z^n / rel_mid``, the next term ``Z^m / rel_out``; ``d_in`` maps into
    the middle generators and ``d_out`` maps them to the next generators.
    """
    n = d_out.ncols
    kern = integer_kernel(Matrix.hstack(d_out, rel_out))
    K = lattice_basis(kern.submatrix(range(n), range(kern.ncols))) if kern.ncols else Matrix(n, 0)
    W = solve_integer(K, Matrix.hstack(d_in, rel_mid))
    if W is None:
        raise CompositionNonzero("d_out o d_in != 0")
    diag = smith(W).diag
    return FgModule(K.ncols - len(diag), tuple(d for d in diag if d > 1))


def induced_map(f: ModuleMap, src: HomologyData, tgt: HomologyData) -> ModuleMap:
    """Map on homology induced by a chain-level map ``f`` between the middle modules."""
    images = f.matrix @ src.reps
    coords = tgt.coordinates(images)
    return ModuleMap(src.module, tgt.module, coords)


# ---------------------------------------------------------------------------
# Grothendieck-group classes of modules


class K0ModClass(K0Class):
    """Class in K_0^add of f.g. modules: basis ``[Z]`` (key 0) and ``[Z/p^k]`` (key p^k)."""

    @property
    def coeff_free(self) -> int:
        return self.coeff(0)

    @property
    def coeff_torsion(self) -> dict[int, int]:
        return {k: v for k, v in self.items() if k != 0}


def k0_class(M: FgModule, ell: int | None = None) -> K0ModClass:
    coeffs: dict[int, int] = {}
    if M.free_rank:
        coeffs[0] = M.free_rank
    for q in M.elementary_divisors():
        if ell is not None and q % ell:
            continue
        coeffs[q] = coeffs.get(q, 0) + 1
    return K0ModClass(coeffs)


def module_of_key(key: int) -> FgModule:
    return Z if key == 0 else FgModule(0, (key,))


# ---------------------------------------------------------------------------
# Graded tables


GradedModule = Mapping[int, FgModule]


def kunneth(M: GradedModule, N: GradedModule) -> dict[int, FgModule]:
    """Cohomological Kunneth: ``H^n = (+)_{p+q=n} H^p (x) H^q  (+)  (+)_{p+q=n+1} Tor(H^p, H^q)``."""
    out: dict[int, FgModule] = {}
    for p, A in M.items():
        for q, B in N.items():
            t = tensor(A, B)
            if not t.is_zero():
                out[p + q] = out.get(p + q, ZERO) + t
            tt = tor1(A, B)
            if not tt.is_zero():
                out[p + q - 1] = out.get(p + q - 1, ZERO) + tt
    return {k: v for k, v in sorted(out.items()) if not v.is_zero()}
