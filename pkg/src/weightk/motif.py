"""Tabulated effective motives: graded cohomology tables standing in for Chow motives.

A motive is recorded only through its l-adic realization, a table ``q -> H^q`` of finitely
generated abelian groups.  This is enough for Grothendieck-group classes, realizations and
the functors ``E^n, H^n, F^n = Tor H^n, G^n = H^n / Tor`` below.  It is not a model of Chow
groups or correspondences: a ``MotiveMap`` only records the induced maps on cohomology.

Conventions:

* the Tate twist ``M<k>`` shifts tables up by ``2k``;
* a ``MotiveMap`` ``f: M -> N`` stores the pullbacks ``H^q(N) -> H^q(M)``;
* graded Grothendieck-group keys are ``(q, key)`` with ``key`` 0 for ``Z`` or a prime power;
* duality on classes of a smooth variety of dimension ``d`` sends ``(q, Z)`` to ``(2d - q, Z)``
  and ``(q, Z/p^k)`` to ``(2d + 1 - q, Z/p^k)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from weightk import k0, linalg, zmod
from weightk.classes import FunctorTag, K0Class
from weightk.errors import (
    CompositionNonzero,
    IncompatibleMap,
    InvalidTable,
    MalformedExpression,
    Mismatch,
    MissingGysinMap,
    NoDualityFlag,
    NonFreeClass,
    NotCellular,
    UncountableAtom,
)
from weightk.k0 import CheckResult
from weightk.matrix import Matrix
from weightk.rings import QQ, is_prime
from weightk.zmod import FgModule, K0ModClass, ModuleMap, k0_class

Table = dict[int, FgModule]


def _clean(table: Mapping[int, FgModule]) -> Table:
    return {q: M for q, M in sorted(table.items()) if not M.is_zero()}


def shift_table(table: Mapping[int, FgModule], k: int) -> Table:
    return {q + k: M for q, M in table.items()}


def sum_tables(*tables: Mapping[int, FgModule]) -> Table:
    out: dict[int, FgModule] = {}
    for t in tables:
        for q, M in t.items():
            out[q] = out.get(q, zmod.ZERO) + M
    return _clean(out)


def format_table(table: Mapping[int, FgModule]) -> str:
    if not table:
        return "{}"
    return "{" + ", ".join(f"{q}: {M}" for q, M in sorted(table.items())) + "}"


# ---------------------------------------------------------------------------
# tables and motives


@dataclass(frozen=True)
class CohTable:
    """Cohomology table of a smooth projective variety of dimension ``dim``."""

    ell: int
    dim: int
    components: int
    H: Table
    duality: bool = True

    def __post_init__(self):
        object.__setattr__(self, "H", _clean(self.H))

    def validate(self) -> CohTable:
        d, H = self.dim, self.H
        if not is_prime(self.ell):
            raise InvalidTable("ell-prime", f"ell = {self.ell}")
        if d < 0 or self.components < 0:
            raise InvalidTable("nonnegative-dims")
        outside = [q for q in H if not 0 <= q <= 2 * d]
        if outside:
            raise InvalidTable("support", f"nonzero H^{outside[0]} outside [0, {2 * d}]")
        h0 = self.h(0)
        if h0.torsion or h0.free_rank != self.components:
            raise InvalidTable("H0-free-of-rank-c", f"H^0 = {h0}, c = {self.components}")
        if self.h(1).torsion:
            raise InvalidTable("H1-torsion-free", f"H^1 = {self.h(1)}")
        if self.duality:
            for q in range(0, 2 * d + 1):
                if self.h(q).free_rank != self.h(2 * d - q).free_rank:
                    raise InvalidTable("duality-betti", f"b_{q} != b_{2 * d - q}")
                if zmod.torsion_part(self.h(q)) != zmod.torsion_part(self.h(2 * d + 1 - q)):
                    raise InvalidTable("duality-torsion", f"Tor H^{q} != Tor H^{2 * d + 1 - q}")
        return self

    def h(self, q: int) -> FgModule:
        return self.H.get(q, zmod.ZERO)

    def __add__(self, other: CohTable) -> CohTable:
        return CohTable(self.ell, max(self.dim, other.dim), self.components + other.components,
                        sum_tables(self.H, other.H), self.duality and other.duality and self.dim == other.dim)

    def __mul__(self, other: CohTable) -> CohTable:
        return CohTable(self.ell, self.dim + other.dim, self.components * other.components,
                        zmod.kunneth(self.H, other.H), self.duality and other.duality)


@dataclass(frozen=True)
class PureMotive:
    """``base<twist>``; its realization is the base table shifted up by ``2 * twist``."""

    name: str
    base: CohTable
    twist: int = 0

    def __post_init__(self):
        if self.twist < 0:
            raise ValueError("twists of effective motives are non-negative")

    @property
    def ell(self) -> int:
        return self.base.ell

    @property
    def table(self) -> Table:
        return shift_table(self.base.H, 2 * self.twist)

    def h(self, q: int) -> FgModule:
        return self.table.get(q, zmod.ZERO)

    def __str__(self) -> str:
        return self.name if not self.twist else f"{self.name}<{self.twist}>"


def tate_twist(M: PureMotive, k: int = 1) -> PureMotive:
    return PureMotive(M.name, M.base, M.twist + k)


def motive_sum(a: PureMotive, b: PureMotive) -> PureMotive:
    k = min(a.twist, b.twist)
    H = sum_tables(shift_table(a.base.H, 2 * (a.twist - k)), shift_table(b.base.H, 2 * (b.twist - k)))
    dim = max(a.base.dim + a.twist - k, b.base.dim + b.twist - k)
    base = CohTable(a.ell, dim, a.base.components + b.base.components, H, duality=False)
    if a.twist == b.twist and a.base.dim == b.base.dim:
        base = a.base + b.base
    return PureMotive(f"{a}+{b}", base, k)


def motive_product(a: PureMotive, b: PureMotive) -> PureMotive:
    return PureMotive(f"{a}x{b}", a.base * b.base, a.twist + b.twist)


def dual_compact_table(M: PureMotive | CohTable, d: int | None = None) -> Table:
    """Compact-support table: free rank ``b_{2d-q}`` and torsion ``Tor H^{2d+1-q}`` in degree q."""
    table = M if isinstance(M, CohTable) else M.base
    if isinstance(M, PureMotive) and M.twist:
        raise NoDualityFlag(f"{M} is twisted; dualize the untwisted table")
    if not table.duality:
        raise NoDualityFlag(f"table of dimension {table.dim} carries no duality flag")
    d = table.dim if d is None else d
    out = {}
    for q in range(0, 2 * d + 2):
        free = table.h(2 * d - q).free_rank
        tors = zmod.torsion_part(table.h(2 * d + 1 - q))
        out[q] = FgModule.free(free) + tors
    return _clean(out)


# ---------------------------------------------------------------------------
# atom registry


PT_TABLE = CohTable(2, 0, 1, {0: zmod.Z})
P1_TABLE = CohTable(2, 1, 1, {0: zmod.Z, 2: zmod.Z})


@dataclass(frozen=True)
class Atom:
    motive: PureMotive
    count_poly: tuple[int, ...] | None = None


class AtomRegistry:
    def __init__(self, builtins: bool = True) -> None:
        self._atoms: dict[str, Atom] = {}
        if builtins:
            self.register_atom("pt", PT_TABLE, (1,))
            self.register_atom("P1", P1_TABLE, (1, 1))

    def register_atom(self, name: str, table: CohTable, count_poly: Iterable[int] | None = None) -> PureMotive:
        table.validate()
        M = PureMotive(name, table)
        self._atoms[name] = Atom(M, None if count_poly is None else tuple(count_poly))
        return M

    def __getitem__(self, name: str) -> Atom:
        try:
            return self._atoms[name]
        except KeyError:
            raise MalformedExpression(f"unknown atom {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._atoms

    def names(self) -> list[str]:
        return sorted(self._atoms)

    def motives(self) -> list[PureMotive]:
        return [self._atoms[n].motive for n in self.names()]

    def __len__(self) -> int:
        return len(self._atoms)


# ---------------------------------------------------------------------------
# functors E^n, H^n, F^n, G^n


def functor_eval(tag: FunctorTag | str, M: PureMotive) -> FgModule:
    """``H^n`` lookup, ``F^n = Tor H^n``, ``G^n = H^n / Tor``, ``E^n[d] = H^{2d-n}``."""
    tag = FunctorTag.parse(tag) if isinstance(tag, str) else tag
    n = tag.params[0]
    if tag.name == "E":
        d = tag.params[1] if len(tag.params) > 1 else M.base.dim + M.twist
        return M.h(2 * d - n) if n >= 0 else zmod.ZERO
    if n < 0:
        return zmod.ZERO
    H = M.h(n)
    if tag.name == "H":
        return H
    if tag.name == "F":
        return zmod.torsion_part(H)
    if tag.name == "G":
        return zmod.free_part(H)
    raise ValueError(f"not a motif functor: {tag}")


_SAMPLE_MOTIVES = [PureMotive("pt", PT_TABLE), PureMotive("P1", P1_TABLE), PureMotive("pt", PT_TABLE, 1)]
for _name in ("E", "H", "F", "G"):
    k0.REGISTRY.register(
        _name, lambda M, tag: functor_eval(tag, M), motive_sum,
        [(m, FunctorTag(_name, n, 1) if _name == "E" else FunctorTag(_name, n))
         for m in _SAMPLE_MOTIVES for n in range(0, 4)],
    )


def functor_class(tag: FunctorTag | str, cls: K0Class, ell: int | None = None) -> K0ModClass:
    """``F_K0`` on a graded class, keys read as the indecomposable tables ``key`` placed in degree q."""
    tag = FunctorTag.parse(tag) if isinstance(tag, str) else tag
    n = tag.params[0]
    if n < 0:
        return K0ModClass.zero()
    if tag.name == "E":
        d = tag.params[1] if len(tag.params) > 1 else getattr(cls, "dim", 0)
        target, want = 2 * d - n, "any"
    else:
        target, want = n, {"H": "any", "F": "torsion", "G": "free"}[tag.name]
    out: dict[int, int] = {}
    for (q, key), c in cls.items():
        if q != target or (want == "torsion" and key == 0) or (want == "free" and key != 0):
            continue
        if ell is not None and key and key % ell:
            continue
        out[key] = out.get(key, 0) + c
    return K0ModClass(out)


def probe_motives(atoms: AtomRegistry) -> list[PureMotive]:
    """Registered atoms and their pairwise products (the registry's degree-2 tensor closure)."""
    base = atoms.motives()
    prods = [motive_product(a, b) for i, a in enumerate(base) for b in base[i:]]
    return base + prods


def twist_kill_check(tag: FunctorTag | str, atoms: AtomRegistry, twists: Iterable[int] = (1, 2)) -> list[CheckResult]:
    tag = FunctorTag.parse(tag) if isinstance(tag, str) else tag
    out = []
    for M in probe_motives(atoms):
        for k in twists:
            value = functor_eval(tag, tate_twist(M, k))
            out.append(CheckResult(f"{tag}({M.name}<{k}>)", value.is_zero(), str(value), "0"))
    return out


def birational_predicate(tag: FunctorTag | str, atoms: AtomRegistry) -> bool:
    """True iff the functor kills every once-twisted registered motive (atoms and products)."""
    return all(functor_eval(tag, tate_twist(M, 1)).is_zero() for M in probe_motives(atoms))


def audit_family(max_n: int = 5) -> list[FunctorTag]:
    return [FunctorTag(name, n) for name in ("F", "G", "H") for n in range(0, max_n + 1)]


def birational_classes(atoms: AtomRegistry, max_n: int = 5) -> dict[FunctorTag, list[FunctorTag]]:
    """Birational tags of the audit family, grouped into functors on the table category.

    Tags vanishing on every test motive and twist act as the zero functor and dropped.  Tags of the
    same degree with identical values on all test motives and their twists are the same functor
    (``H^0 = G^0`` and ``H^1 = G^1`` because those groups are torsion-free); the smallest
    tag represents its group.
    """
    def signature(tag):
        return tuple(str(functor_eval(tag, tate_twist(M, k))) for M in motives for k in (0, 1, 2))

    motives = probe_motives(atoms)
    groups: dict[tuple, list[FunctorTag]] = {}
    for tag in audit_family(max_n):
        if all(functor_eval(tag, tate_twist(M, k)).is_zero() for M in motives for k in (0, 1, 2)):
            continue
        if birational_predicate(tag, atoms):
            groups.setdefault((tag.params[0], signature(tag)), []).append(tag)
    return {min(tags): sorted(tags) for tags in groups.values()}


# ---------------------------------------------------------------------------
# graded classes


class GrK0Class(K0Class):
    """Class over graded keys ``(q, key)`` with the dimension of the variety it came from."""

    __slots__ = ("dim",)

    def __init__(self, coeffs=None, free_label: str = "Z", dim: int = 0):
        super().__init__(coeffs, free_label)
        self.dim = dim

    def _new(self, coeffs) -> GrK0Class:
        return GrK0Class(coeffs, self.free_label, self.dim)

    def with_dim(self, dim: int) -> GrK0Class:
        return GrK0Class(dict(self), self.free_label, dim)

    @classmethod
    def of_table(cls, table: Mapping[int, FgModule], dim: int = 0) -> GrK0Class:
        out: dict = {}
        for q, M in table.items():
            for key, c in k0_class(M).items():
                out[(q, key)] = out.get((q, key), 0) + c
        return cls(out, dim=dim)

    def twist(self, k: int) -> GrK0Class:
        return GrK0Class({(q + 2 * k, key): c for (q, key), c in self.items()}, self.free_label, self.dim + k)

    def times(self, other: GrK0Class) -> GrK0Class:
        prod = k0.k0_product(self, other, "motif")
        return GrK0Class(dict(prod), self.free_label, self.dim + other.dim)

    def dual(self, d: int | None = None) -> GrK0Class:
        d = self.dim if d is None else d
        out = {}
        for (q, key), c in self.items():
            out[(2 * d - q if key == 0 else 2 * d + 1 - q, key)] = c
        return GrK0Class(out, self.free_label, d)


# ---------------------------------------------------------------------------
# variety expressions


class VarietyExpr:
    def dim(self, atoms: AtomRegistry) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class AtomExpr(VarietyExpr):
    name: str

    def dim(self, atoms):
        return atoms[self.name].motive.base.dim


@dataclass(frozen=True)
class Product(VarietyExpr):
    left: VarietyExpr
    right: VarietyExpr

    def dim(self, atoms):
        return self.left.dim(atoms) + self.right.dim(atoms)


@dataclass(frozen=True)
class DisjointUnion(VarietyExpr):
    left: VarietyExpr
    right: VarietyExpr

    def dim(self, atoms):
        return max(self.left.dim(atoms), self.right.dim(atoms))


@dataclass(frozen=True)
class MotiveMap:
    """Graded pullbacks ``H^q(target) -> H^q(source)`` of a map ``source -> target``."""

    source: PureMotive
    target: PureMotive
    components: dict[int, Matrix] = field(default_factory=dict)

    def __post_init__(self):
        for q, m in self.components.items():
            ModuleMap(self.target.h(q), self.source.h(q), m)

    def pullback(self, q: int) -> ModuleMap:
        src, tgt = self.target.h(q), self.source.h(q)
        m = self.components.get(q)
        if m is None:
            return ModuleMap.zero(src, tgt)
        return ModuleMap(src, tgt, m)


@dataclass(frozen=True)
class Complement(VarietyExpr):
    ambient: VarietyExpr
    closed: VarietyExpr
    codim: int
    gysin: dict[int, Matrix] | None = None

    def dim(self, atoms):
        return self.ambient.dim(atoms)


def is_pure_dimensional(expr: VarietyExpr, atoms: AtomRegistry) -> bool:
    if isinstance(expr, AtomExpr):
        return True
    if isinstance(expr, Product):
        return is_pure_dimensional(expr.left, atoms) and is_pure_dimensional(expr.right, atoms)
    if isinstance(expr, DisjointUnion):
        return (is_pure_dimensional(expr.left, atoms) and is_pure_dimensional(expr.right, atoms)
                and expr.left.dim(atoms) == expr.right.dim(atoms))
    if isinstance(expr, Complement):
        return is_pure_dimensional(expr.ambient, atoms)
    raise MalformedExpression(f"unknown node {expr!r}")


def validate_expr(expr: VarietyExpr, atoms: AtomRegistry) -> None:
    if isinstance(expr, AtomExpr):
        atoms[expr.name]
    elif isinstance(expr, (Product, DisjointUnion)):
        validate_expr(expr.left, atoms)
        validate_expr(expr.right, atoms)
    elif isinstance(expr, Complement):
        validate_expr(expr.ambient, atoms)
        validate_expr(expr.closed, atoms)
        if expr.codim < 1:
            raise MalformedExpression("complement codimension must be >= 1")
        if not is_pure_dimensional(expr.closed, atoms):
            raise MalformedExpression("closed part is not equidimensional")
        if expr.closed.dim(atoms) != expr.ambient.dim(atoms) - expr.codim:
            raise MalformedExpression(
                f"closed part has dimension {expr.closed.dim(atoms)}, expected "
                f"{expr.ambient.dim(atoms) - expr.codim}")
    else:
        raise MalformedExpression(f"unknown node {expr!r}")


MODES = ("motive", "compact_support")


def class_of(expr: VarietyExpr, atoms: AtomRegistry, mode: str = "motive") -> GrK0Class:
    """``[M(X)]`` (Gysin relation) or ``[M^c(X)]`` (scissors relation) as a graded class."""
    if mode in ("m", "motive"):
        mode = "motive"
    elif mode in ("c", "compact", "compact_support"):
        mode = "compact_support"
    else:
        raise MalformedExpression(f"unknown mode {mode!r}")
    validate_expr(expr, atoms)
    return _class(expr, atoms, mode)


def _class(expr, atoms, mode) -> GrK0Class:
    if isinstance(expr, AtomExpr):
        base = atoms[expr.name].motive.base
        return GrK0Class.of_table(base.H, base.dim)
    if isinstance(expr, Product):
        return _class(expr.left, atoms, mode).times(_class(expr.right, atoms, mode))
    if isinstance(expr, DisjointUnion):
        a, b = _class(expr.left, atoms, mode), _class(expr.right, atoms, mode)
        return (a + b).with_dim(max(a.dim, b.dim))
    if isinstance(expr, Complement):
        P = _class(expr.ambient, atoms, mode)
        Z = _class(expr.closed, atoms, mode)
        if mode == "motive":
            Z = Z.twist(expr.codim)
        return (P - Z).with_dim(P.dim)
    raise MalformedExpression(f"unknown node {expr!r}")


def pure_motive_of(expr: VarietyExpr, atoms: AtomRegistry) -> PureMotive:
    """The motive of a smooth projective expression (atoms, products, disjoint unions)."""
    if isinstance(expr, AtomExpr):
        return atoms[expr.name].motive
    if isinstance(expr, Product):
        return motive_product(pure_motive_of(expr.left, atoms), pure_motive_of(expr.right, atoms))
    if isinstance(expr, DisjointUnion):
        return motive_sum(pure_motive_of(expr.left, atoms), pure_motive_of(expr.right, atoms))
    raise MalformedExpression("complements are not smooth projective")


# ---------------------------------------------------------------------------
# point counts


def _eval_poly(coeffs: Iterable[int], q: int) -> int:
    return sum(c * q ** i for i, c in enumerate(coeffs))


def point_count(expr: VarietyExpr, atoms: AtomRegistry, q: int) -> int:
    if isinstance(expr, AtomExpr):
        atom = atoms[expr.name]
        if atom.count_poly is None:
            raise UncountableAtom(f"atom {expr.name!r} has no counting polynomial")
        return _eval_poly(atom.count_poly, q)
    if isinstance(expr, Product):
        return point_count(expr.left, atoms, q) * point_count(expr.right, atoms, q)
    if isinstance(expr, DisjointUnion):
        return point_count(expr.left, atoms, q) + point_count(expr.right, atoms, q)
    if isinstance(expr, Complement):
        return point_count(expr.ambient, atoms, q) - point_count(expr.closed, atoms, q)
    raise MalformedExpression(f"unknown node {expr!r}")


def lefschetz_specialize(c: K0Class, q: int) -> int:
    """``[Z in degree 2i] -> q^i``; torsion keys contribute 0."""
    total = 0
    for (deg, key), coeff in c.items():
        if key != 0:
            continue
        if deg % 2:
            raise NotCellular(f"free class in odd degree {deg}")
        total += coeff * q ** (deg // 2)
    return total


def is_cellular(expr: VarietyExpr, atoms: AtomRegistry) -> bool:
    """Torsion-free, even-degree compact class and counting data on every atom."""
    try:
        cls = class_of(expr, atoms, "compact_support")
        point_count(expr, atoms, 2)
    except UncountableAtom:
        return False
    return all(key == 0 and deg % 2 == 0 for (deg, key) in cls)


# ---------------------------------------------------------------------------
# complexes of motives


class MotiveComplex:
    """Bounded complex of pure motives; differentials are ``MotiveMap`` pullback data."""

    def __init__(self, terms: Mapping[int, PureMotive], diffs: Mapping[int, MotiveMap] | None = None,
                 name: str = ""):
        self.terms = dict(sorted(terms.items()))
        self.diffs = dict(diffs or {})
        self.name = name
        for i, f in self.diffs.items():
            if f.source != self.terms.get(i) or f.target != self.terms.get(i + 1):
                raise IncompatibleMap(f"d^{i} does not connect the terms in degrees {i}, {i + 1}")
        for i in self.diffs:
            if i + 1 in self.diffs:
                for q in self.weights():
                    comp = self.pullback(i, q).compose(self.pullback(i + 1, q))
                    if not comp.is_zero():
                        raise CompositionNonzero(f"d^{i + 1} d^{i} != 0 on H^{q}")

    @property
    def ell(self) -> int:
        return next(iter(self.terms.values())).ell if self.terms else 2

    def degrees(self) -> list[int]:
        return list(self.terms)

    def term(self, i: int) -> PureMotive:
        return self.terms[i]

    def weights(self) -> list[int]:
        return sorted({q for M in self.terms.values() for q in M.table})

    def h(self, i: int, q: int) -> FgModule:
        M = self.terms.get(i)
        return zmod.ZERO if M is None else M.h(q)

    def pullback(self, i: int, q: int) -> ModuleMap:
        """``H^q(N^{i+1}) -> H^q(N^i)``."""
        f = self.diffs.get(i)
        if f is None:
            return ModuleMap.zero(self.h(i + 1, q), self.h(i, q))
        return f.pullback(q)

    def k0_class(self) -> GrK0Class:
        total = GrK0Class()
        for i, M in self.terms.items():
            c = GrK0Class.of_table(M.table)
            total = total + (c if i % 2 == 0 else -c)
        return total


def weight_complex_of_complement(P: PureMotive, Z: PureMotive | None, codim: int,
                                 gysin: Mapping[int, Matrix] | None = None) -> MotiveComplex:
    """``[P -> Z<codim>]`` in degrees 0, 1; Z None or empty gives the one-term ``[P]``."""
    if Z is None or not Z.table:
        return MotiveComplex({0: P})
    Zt = tate_twist(Z, codim)
    if gysin is None:
        gysin = default_gysin(P, Z, codim)
    return MotiveComplex({0: P, 1: Zt}, {0: MotiveMap(P, Zt, dict(gysin))})


def default_gysin(P: PureMotive, Z: PureMotive, codim: int) -> dict[int, Matrix]:
    """For points Z in P of dimension ``codim``: degree maps, all ones on top cohomology."""
    d = P.base.dim + P.twist
    points = set(Z.table) == {0} and Z.h(0).torsion == ()
    top = P.h(2 * d)
    if not points or Z.twist or codim != P.base.dim or top != zmod.Z:
        raise MissingGysinMap(f"no default Gysin map for {Z} in {P} (codim {codim})")
    k = Z.h(0).free_rank
    return {2 * d: Matrix(1, k, [[1] * k])}


def weight_complex_of(expr: VarietyExpr, atoms: AtomRegistry) -> MotiveComplex:
    """Motive-mode weight complex for smooth projective expressions and their complements."""
    validate_expr(expr, atoms)
    if isinstance(expr, Complement):
        P = pure_motive_of(expr.ambient, atoms)
        Z = pure_motive_of(expr.closed, atoms)
        return weight_complex_of_complement(P, Z, expr.codim, expr.gysin)
    return MotiveComplex({0: pure_motive_of(expr, atoms)})


# ---------------------------------------------------------------------------
# weight spectral sequence


@dataclass(frozen=True)
class WeightSS:
    """``E_1^{p,q} = H^q(N^{-p})`` with ``d_1: E_1^{p,q} -> E_1^{p+1,q}``."""

    E1: dict[tuple[int, int], FgModule]
    E2: dict[tuple[int, int], FgModule]
    abutment: dict[int, FgModule]
    degenerate: bool
    rational: bool

    def render(self) -> str:
        lines = []
        for name, page in (("E1", self.E1), ("E2", self.E2)):
            for (p, q), M in sorted(page.items()):
                lines.append(f"{name}[{p},{q}] = {_fmt(M, self.rational)}")
        for n, M in sorted(self.abutment.items()):
            lines.append(f"H^{n} = {_fmt(M, self.rational)}")
        lines.append(f"degenerate at E2: {'yes' if self.degenerate else 'no'}")
        return "\n".join(lines)


def _fmt(M: FgModule, rational: bool) -> str:
    if rational:
        return "0" if not M.free_rank else ("Q" if M.free_rank == 1 else f"Q^{M.free_rank}")
    return str(M)


def _rationalize(M: FgModule) -> FgModule:
    return FgModule.free(M.free_rank)


def weight_ss(N: MotiveComplex, rational: bool = False) -> WeightSS:
    E1: dict[tuple[int, int], FgModule] = {}
    E2: dict[tuple[int, int], FgModule] = {}
    for q in N.weights():
        for i in N.degrees():
            p = -i
            M = N.h(i, q)
            if not M.is_zero():
                E1[(p, q)] = _rationalize(M) if rational else M
            # E_2^{p,q}: homology at H^q(N^i) of  H^q(N^{i+1}) -> H^q(N^i) -> H^q(N^{i-1})
            d_in = N.pullback(i, q)
            d_out = N.pullback(i - 1, q)
            if rational:
                H = _rational_homology(d_in, d_out)
            else:
                H = zmod.homology(d_in, d_out)
            if not H.is_zero():
                E2[(p, q)] = H
    abutment = _total_homology(N, rational)
    degenerate = all(
        sum(M.free_rank for (p, q), M in E2.items() if p + q == n) == abutment.get(n, zmod.ZERO).free_rank
        for n in set(abutment) | {p + q for p, q in E2}
    )
    return WeightSS(E1, E2, abutment, degenerate, rational)


def _rational_homology(d_in: ModuleMap, d_out: ModuleMap) -> FgModule:
    """Dimension of ``ker / im`` after tensoring with Q (torsion generators drop out)."""
    mid = d_in.target.free_rank
    A = d_in.matrix.submatrix(range(mid), range(d_in.source.free_rank))
    B = d_out.matrix.submatrix(range(d_out.target.free_rank), range(mid))
    return FgModule.free(mid - _qrank(B) - _qrank(A))


def _total_homology(N: MotiveComplex, rational: bool) -> dict[int, FgModule]:
    """Homology of the total realization ``T^n = (+)_{q - i = n} H^q(N^i)``.

    Every total degree is presented by concatenated generators and relations and its
    homology computed in one pass, independently of the row-by-row E_2 computation.
    """
    cells: dict[int, list[tuple[int, int]]] = {}
    for q in N.weights():
        for i in N.degrees():
            if not N.h(i, q).is_zero():
                cells.setdefault(q - i, []).append((i, q))
    out = {}
    for n in sorted(cells):
        d_in = _total_map(N, cells, n - 1, rational)
        d_out = _total_map(N, cells, n, rational)
        if rational:
            H = FgModule.free(d_out.ncols - _qrank(d_out) - _qrank(d_in))
        else:
            H = zmod.presented_homology(d_in, d_out, _relations(N, cells.get(n, [])),
                                        _relations(N, cells.get(n + 1, [])))
        if not H.is_zero():
            out[n] = H
    return out


def _cell_gens(N: MotiveComplex, cell, rational: bool) -> list[int]:
    M = N.h(*cell)
    return list(range(M.free_rank)) if rational else list(range(M.ngens))


def _relations(N: MotiveComplex, cells) -> Matrix:
    return Matrix.block_diag(*[N.h(i, q).relation_matrix() for i, q in cells]) if cells else Matrix(0, 0)


def _total_map(N: MotiveComplex, cells, n: int, rational: bool) -> Matrix:
    """``T^n -> T^{n+1}``: the cell (i, q) maps to (i - 1, q) by the pullback of d^{i-1}."""
    src, tgt = cells.get(n, []), cells.get(n + 1, [])
    grid = []
    for ti, tq in tgt:
        rows = _cell_gens(N, (ti, tq), rational)
        row = []
        for si, sq in src:
            cols = _cell_gens(N, (si, sq), rational)
            if sq == tq and ti == si - 1:
                row.append(N.pullback(ti, tq).matrix.submatrix(rows, cols))
            else:
                row.append(Matrix.zeros(len(rows), len(cols)))
        grid.append(row)
    nrows = sum(len(_cell_gens(N, c, rational)) for c in tgt)
    ncols = sum(len(_cell_gens(N, c, rational)) for c in src)
    return Matrix.block(grid) if grid and src else Matrix.zeros(nrows, ncols)


def _qrank(A: Matrix) -> int:
    return linalg.rank(A, QQ) if A.nrows and A.ncols else 0


def deligne_graded(N: MotiveComplex, n: int, j: int) -> FgModule:
    """``Gr^W_n H^j := E_2^{j-n, n}`` over Q (dimension as the free rank)."""
    return weight_ss(N, rational=True).E2.get((j - n, n), zmod.ZERO)


def grW_euler(N: MotiveComplex, n: int) -> int:
    """``sum_j (-1)^(j-n) dim Gr^W_n H^j``."""
    ss = weight_ss(N, rational=True)
    return sum((-1) ** ((p) % 2) * M.free_rank for (p, q), M in ss.E2.items() if q == n)


def g_k0_vs_m_check(N: MotiveComplex, n: int) -> CheckResult:
    cls = k0.f_k0(N, FunctorTag("G", n), N.ell)
    if any(key != 0 for key in cls):
        raise NonFreeClass(f"G^{n} class {cls.render()} has torsion keys")
    m = grW_euler(N, n)
    ok = cls.coeff(0) == m
    return CheckResult(f"G{n}_K0 vs grW m ({N.name or 'complex'})", ok, cls.render(),
                       K0ModClass({0: m}).render() if m else "0")


# ---------------------------------------------------------------------------
# identities


def euler_identity_check(expr: VarietyExpr, atoms: AtomRegistry, n: int, ell: int | None = None) -> CheckResult:
    """``E^n_K0([M^c(X)]) = F^{n+1}_K0([M(X)]) + G^n_K0([M(X)])``.

    The left side is computed from the scissors class and, independently, from the termwise
    dual of the motive class; both must agree.
    """
    if not is_pure_dimensional(expr, atoms):
        raise MalformedExpression("the identity needs a variety of pure dimension")
    d = expr.dim(atoms)
    mot = class_of(expr, atoms, "motive").with_dim(d)
    comp = class_of(expr, atoms, "compact_support").with_dim(d)
    tag_e = FunctorTag("E", n, d)
    lhs = functor_class(tag_e, comp, ell)
    lhs_dual = functor_class(tag_e, mot.dual(d), ell)
    rhs = functor_class(FunctorTag("F", n + 1), mot, ell) + functor_class(FunctorTag("G", n), mot, ell)
    ok = lhs == rhs and lhs_dual == lhs
    detail = "" if lhs_dual == lhs else f"dual-side value {lhs_dual.render()}"
    return CheckResult(f"E{n} = F{n + 1} + G{n}", ok, lhs.render(), rhs.render(), detail)


def euler_identity_all(expr: VarietyExpr, atoms: AtomRegistry, ell: int | None = None) -> list[CheckResult]:
    d = expr.dim(atoms)
    return [euler_identity_check(expr, atoms, n, ell) for n in range(0, 2 * d + 1)]


def first_failure(results: list[CheckResult]) -> CheckResult | None:
    return next((r for r in results if not r.ok), None)


def brauer_finite_exponent_check(M: PureMotive, brauer_input: FgModule, ell: int | None = None) -> CheckResult:
    """A finite-exponent Brauer input forces ``c_M = 0`` and must match ``F^3(M)`` in K_0."""
    ell = M.ell if ell is None else ell
    if brauer_input.free_rank:
        raise Mismatch(f"Brauer input {brauer_input} is not of finite exponent")
    lhs = k0_class(brauer_input, ell)
    rhs = k0_class(functor_eval(FunctorTag("F", 3), M), ell)
    if lhs != rhs:
        raise Mismatch(f"[Br] = {lhs.render()} but [F^3] = {rhs.render()}")
    return CheckResult(f"Br vs F3 ({M})", True, lhs.render(), rhs.render(), "c_M = 0")


def mod_ln_realization(M: PureMotive, i: int, n: int) -> FgModule:
    return zmod.mod_ln_cohomology(M.h(i), M.h(i + 1), n, M.ell)


def mod_ln_order_law(M: PureMotive, i: int, n: int) -> CheckResult:
    ell = M.ell
    X = mod_ln_realization(M, i, n)
    a = zmod.tensor_mod(M.h(i), ell ** n).order()
    b = zmod.ell_torsion(M.h(i + 1), ell ** n).order()
    return CheckResult(f"|H^{i}({M}, Z/{ell}^{n})|", X.order() == a * b, str(X.order()), f"{a}*{b}")
