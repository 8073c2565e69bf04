"""Named check suites: seeded property suites over generated complexes and corpus checks.

A suite returns a ``Report``: one entry per check, sorted by name, each with status
``pass``, ``fail`` or ``skip``.  Property checks aggregate their cases into one entry and
record the first failing case.  With a fixed corpus, config and seed the rendering is
byte-identical; timings are recorded but only rendered on request.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Iterable

from weightk import generators as gen
from weightk import k0, komplex, motif, zmod
from weightk.classes import FunctorTag
from weightk.corpus import Corpus, builtin_config_path, builtin_corpus_dir, load_corpus
from weightk.errors import InputError, SchemaError, UnknownSuite, WeightKError
from weightk.komplex import Complex, MatObject
from weightk.matrix import Matrix
from weightk.rings import QQ, ZZ, is_prime

SUITES = ("khom", "k0", "thm234", "measures")
CASE_KEYS = ("k0", "weak", "orthogonality", "contractible", "weight_decomposition", "weight_ss")


@dataclass(frozen=True)
class RunConfig:
    ell: int = 2
    rational: bool = False
    ell_local: bool = True
    corpus: tuple[str, ...] | None = None  # None: the built-in corpus
    seed: int = 1
    cases: dict[str, int] = field(default_factory=lambda: dict.fromkeys(CASE_KEYS, 100))
    max_rank: int = 4
    support: tuple[int, int] = (-2, 2)
    q_values: tuple[int, ...] = (2, 3, 4, 5)

    def __post_init__(self):
        if not is_prime(self.ell):
            raise InputError(f"ell = {self.ell} is not prime")
        if any(v < 1 for v in self.cases.values()) or self.max_rank < 1:
            raise InputError("case counts and rank bounds must be >= 1")
        if self.support[0] > self.support[1]:
            raise InputError("empty support window")

    def n(self, key: str) -> int:
        return self.cases.get(key, 100)

    def with_cases(self, k: int) -> RunConfig:
        return replace(self, cases=dict.fromkeys(self.cases or CASE_KEYS, k))

    def corpus_paths(self) -> list[str]:
        return [str(builtin_corpus_dir())] if self.corpus is None else list(self.corpus)

    @classmethod
    def from_json(cls, data: dict, path="<config>") -> RunConfig:
        known = {"ell", "rational", "ell_local", "corpus", "seed", "cases", "max_rank", "support", "q_values"}
        extra = set(data) - known
        if extra:
            raise SchemaError(path, sorted(extra)[0], "unknown config field")
        kw = dict(data)
        if kw.get("corpus") is not None:
            kw["corpus"] = tuple(kw["corpus"])
        if "support" in kw:
            kw["support"] = tuple(kw["support"])
        if "q_values" in kw:
            kw["q_values"] = tuple(kw["q_values"])
        if "cases" in kw:
            kw["cases"] = {**dict.fromkeys(CASE_KEYS, 100), **kw["cases"]}
        try:
            return cls(**kw)
        except TypeError as exc:
            raise SchemaError(path, "config", str(exc)) from None

    @classmethod
    def load(cls, path: str | Path | None = None) -> RunConfig:
        path = Path(path) if path else builtin_config_path()
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaError(path, "json", str(exc)) from None
        return cls.from_json(data, path)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Entry:
    name: str
    status: str  # pass | fail | skip
    lhs: str = ""
    rhs: str = ""
    detail: str = ""
    seconds: float = 0.0


@dataclass
class Report:
    entries: list[Entry] = field(default_factory=list)

    def add(self, entry: Entry) -> None:
        self.entries.append(entry)

    def extend(self, other: Report) -> None:
        self.entries.extend(other.entries)

    def sorted(self) -> list[Entry]:
        return sorted(self.entries, key=lambda e: e.name)

    @property
    def ok(self) -> bool:
        return all(e.status != "fail" for e in self.entries)

    def counts(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "skip": 0}
        for e in self.entries:
            out[e.status] += 1
        return out

    def render(self, fmt: str = "human", timings: bool = False) -> str:
        rows = self.sorted()
        if fmt == "json":
            items = []
            for e in rows:
                d = {"name": e.name, "status": e.status, "lhs": e.lhs, "rhs": e.rhs, "detail": e.detail}
                if timings:
                    d["seconds"] = round(e.seconds, 4)
                items.append(d)
            return json.dumps({"entries": items, "counts": self.counts(), "ok": self.ok}, indent=2)
        width = max((len(e.name) for e in rows), default=4)
        lines = []
        for e in rows:
            line = f"{e.status.upper():4}  {e.name:<{width}}"
            if e.lhs or e.rhs:
                line += f"  {e.lhs} | {e.rhs}"
            if e.detail:
                line += f"  ({e.detail})"
            if timings:
                line += f"  [{e.seconds:.3f}s]"
            lines.append(line.rstrip())
        c = self.counts()
        lines.append(f"{c['pass']} passed, {c['fail']} failed, {c['skip']} skipped")
        return "\n".join(lines)


def _timed(name: str, fn: Callable[[], Entry]) -> Entry:
    t0 = time.perf_counter()
    try:
        e = fn()
    except WeightKError as exc:
        e = Entry(name, "fail", detail=f"{type(exc).__name__}: {exc}")
    return replace(e, name=name, seconds=time.perf_counter() - t0)


def _cases(name: str, cfg: RunConfig, key: str, case: Callable[[random.Random], str | None]) -> Entry:
    """Run ``case`` on ``cfg.n(key)`` seeded generators; a returned string describes a failure."""
    n = cfg.n(key)
    for i in range(n):
        msg = case(gen.case_rng(cfg.seed, name, i))
        if msg:
            return Entry(name, "fail", f"case {i}", "", msg)
    return Entry(name, "pass", f"{n}/{n} cases")


def _check(name: str, ok: bool, lhs="", rhs="", detail="") -> Entry:
    return Entry(name, "pass" if ok else "fail", str(lhs), str(rhs), detail)


# ---------------------------------------------------------------------------
# khom: homotopy-category properties


HOMOLOGY_FUNCTORS = ("id", "Z/2", "Z/4", "Q")


def _weak_case(cfg: RunConfig):
    lo, hi = cfg.support

    def case(rng):
        modulus = rng.choice((None, None, 4, 9))
        m1, m2 = gen.random_weak_pair(rng, lo, hi, min(3, cfg.max_rank), modulus)
        if komplex.find_weak_homotopy(m1, m2) is None:
            return "generated pair has no weak-homotopy witness"
        degs = sorted(set(m1.source.degrees()) | set(m1.target.degrees()))
        for A in HOMOLOGY_FUNCTORS:
            for i in degs:
                if komplex.induced_on_homology(m1, A, i) != komplex.induced_on_homology(m2, A, i):
                    return f"induced maps differ for {A} in degree {i}"
        return None
    return case


def _weak_contains_case(cfg: RunConfig):
    lo, hi = cfg.support

    def case(rng):
        f = gen.random_chain_map(rng, lo, hi, min(3, cfg.max_rank))
        A, B = f.source, f.target
        h = {i: gen._random_matrix(rng, B.rank(i - 1), A.rank(i)) for i in A.degrees()
             if B.rank(i - 1) and A.rank(i)}
        g = f + komplex.homotopy_boundary(A, B, h)
        if komplex.find_homotopy(f, g) is None:
            return "homotopic pair not detected"
        if komplex.find_weak_homotopy(f, g) is None:
            return "homotopy found but no weak homotopy"
        return None
    return case


def _orthogonality_case(cfg: RunConfig):
    def case(rng):
        C = gen.weight_le_sample(rng, 0)
        D = gen.weight_ge_sample(rng, 1)
        if not komplex.in_weight_le(C, 0) or not komplex.in_weight_ge(D, 1):
            return "sample outside its weight class"
        H = komplex.hom_group_mod_homotopy(C, D)
        return None if H.is_zero() else f"Hom = {H}"
    return case


def _contractible_case(cfg: RunConfig):
    lo, hi = cfg.support

    def case(rng):
        bc = gen.random_contractible(rng, lo, hi, cfg.max_rank)
        C = bc.complex
        pieces = dict(komplex.split_contractible(C))
        expected = {}
        for b in bc.blocks:
            expected[b.degree] = expected.get(b.degree, 0) + 1
        got = {i: o.rank for i, o in pieces.items()}
        if got != expected:
            return f"split ranks {got} != block counts {expected}"
        for i, o in pieces.items():
            p = o.idempotent
            if p @ p != p:
                return f"O^{i} is not an idempotent image"
        for i in C.degrees():
            if C.rank(i) != got.get(i, 0) + got.get(i - 1, 0):
                return f"C^{i} != O^{i} + O^{i - 1}"
        even = zmod.direct_sum(*[komplex.module_of_term(C.rank(i), ZZ, "Z/4")[0] for i in C.degrees() if i % 2 == 0])
        odd = zmod.direct_sum(*[komplex.module_of_term(C.rank(i), ZZ, "Z/4")[0] for i in C.degrees() if i % 2])
        from_split = zmod.direct_sum(*[o.tensor_mod(4) for o in pieces.values()])
        if not (even == odd == from_split):
            return f"F(C^even) = {even}, F(C^odd) = {odd}, F(O) = {from_split}"
        return None
    return case


def _cone_case(cfg: RunConfig):
    lo, hi = cfg.support

    def case(rng):
        f = gen.random_chain_map(rng, lo, hi, cfg.max_rank)
        c = komplex.cone(f)  # the constructor checks d^2 = 0
        lhs, rhs = c.euler_characteristic(), f.target.euler_characteristic() - f.source.euler_characteristic()
        return None if lhs == rhs else f"chi(cone) = {lhs} != {rhs}"
    return case


def _decomposition_case(cfg: RunConfig):
    lo, hi = cfg.support

    def case(rng):
        C = gen.random_complex(rng, lo, hi, cfg.max_rank)
        n = rng.randint(-hi, -lo)
        wd = komplex.weight_decomposition(C, n)
        if not komplex.in_weight_le(wd.L, n) or not komplex.in_weight_ge(wd.R, n + 1):
            return f"truncations violate the weight bounds at n = {n}"
        if not komplex.verify_decomposition_triangle(wd):
            return f"cone(L -> C) is not equivalent to R at n = {n}"
        return None
    return case


def khom_suite(cfg: RunConfig, corpus: Corpus | None = None) -> Report:
    r = Report()
    r.add(_timed("khom.cone_euler", lambda: _cases("khom.cone_euler", cfg, "k0", _cone_case(cfg))))
    r.add(_timed("khom.contractible_split",
                 lambda: _cases("khom.contractible_split", cfg, "contractible", _contractible_case(cfg))))
    r.add(_timed("khom.orthogonality",
                 lambda: _cases("khom.orthogonality", cfg, "orthogonality", _orthogonality_case(cfg))))
    r.add(_timed("khom.weak_contains_homotopy",
                 lambda: _cases("khom.weak_contains_homotopy", cfg, "weak", _weak_contains_case(cfg))))
    r.add(_timed("khom.weak_homotopy_induced",
                 lambda: _cases("khom.weak_homotopy_induced", cfg, "weak", _weak_case(cfg))))
    r.add(_timed("khom.weak_not_homotopic_fixture", _fixture_entry))
    r.add(_timed("khom.weight_decomposition",
                 lambda: _cases("khom.weight_decomposition", cfg, "weight_decomposition", _decomposition_case(cfg))))
    return r


def _fixture_entry() -> Entry:
    m1, m2 = gen.weak_not_homotopic_fixture()
    h = komplex.find_homotopy(m1, m2)
    w = komplex.find_weak_homotopy(m1, m2)
    ok = h is None and w is not None
    return _check("", ok, f"homotopy {'absent' if h is None else 'present'}",
                  f"weak homotopy {'present' if w is not None else 'absent'}", "over Z/4")


# ---------------------------------------------------------------------------
# k0: Euler-characteristic classes


MATRIX_FUNCTORS = ("id", "Z/2", "Z/4", "Q")


def _invariance_case(cfg: RunConfig):
    lo, hi = cfg.support

    def case(rng):
        eq = gen.random_equivalence(rng, lo, hi, cfg.max_rank)
        if eq.g.compose(eq.f) != komplex.ChainMap.identity(eq.f.source):
            return "generated g o f != id"
        if not komplex.is_homotopy_equivalence(eq.f):
            return "generated map is not a homotopy equivalence"
        for F in MATRIX_FUNCTORS:
            a, b = k0.f_k0(eq.f.source, F), k0.f_k0(eq.f.target, F)
            if a != b:
                return f"{F}: {a.render()} != {b.render()}"
        return None
    return case


def _triangle_case(cfg: RunConfig):
    lo, hi = cfg.support

    def case(rng):
        f = gen.random_chain_map(rng, lo, hi, cfg.max_rank)
        for F in MATRIX_FUNCTORS:
            if not k0.triangle_additivity_check(f, F):
                return f"{F}: cone class is not target - source"
        return None
    return case


def _sum_case(cfg: RunConfig):
    lo, hi = cfg.support

    def case(rng):
        C = gen.random_complex(rng, lo, hi, cfg.max_rank)
        D = gen.random_complex(rng, lo, hi, cfg.max_rank)
        for F in MATRIX_FUNCTORS:
            if k0.f_k0(C + D, F) != k0.f_k0(C, F) + k0.f_k0(D, F):
                return f"{F}: not additive on direct sums"
        return None
    return case


def _semisimple_case(cfg: RunConfig):
    lo, hi = cfg.support

    def case(rng):
        C = gen.random_complex(rng, lo, hi, cfg.max_rank, ring=QQ)
        lhs, rhs = k0.semisimple_formula(C)
        return None if lhs == rhs else f"{lhs.render()} != {rhs.render()}"
    return case


def _section_entry(cfg: RunConfig) -> Entry:
    objs = [MatObject(r, ZZ) for r in range(0, cfg.max_rank + 1)]
    for F in MATRIX_FUNCTORS:
        bad = [c for c in k0.section_isomorphism_check(objs, (), F) if not c.ok]
        if bad:
            return Entry("", "fail", bad[0].lhs, bad[0].rhs, f"{F}: {bad[0].name}")
    return Entry("", "pass", f"ranks 0..{cfg.max_rank}", "one-term classes recovered")


def _product_entry() -> Entry:
    keys = [0, 2, 4, 3, 9]
    samples = [zmod.K0ModClass({a: 1, b: -2}) for a in keys for b in keys if a != b][:8]
    for x in samples:
        for y in samples:
            if k0.k0_product(x, y) != k0.k0_product(y, x):
                return Entry("", "fail", x.render(), y.render(), "not commutative")
            for z in samples[:4]:
                if k0.k0_product(k0.k0_product(x, y), z) != k0.k0_product(x, k0.k0_product(y, z)):
                    return Entry("", "fail", x.render(), y.render(), "not associative")
    return Entry("", "pass", f"{len(samples)} classes", "commutative, associative")


def k0_suite(cfg: RunConfig, corpus: Corpus | None = None) -> Report:
    r = Report()
    r.add(_timed("k0.direct_sum", lambda: _cases("k0.direct_sum", cfg, "k0", _sum_case(cfg))))
    r.add(_timed("k0.invariance", lambda: _cases("k0.invariance", cfg, "k0", _invariance_case(cfg))))
    r.add(_timed("k0.product_ring", _product_entry))
    r.add(_timed("k0.section", lambda: _section_entry(cfg)))
    r.add(_timed("k0.semisimple", lambda: _cases("k0.semisimple", cfg, "k0", _semisimple_case(cfg))))
    r.add(_timed("k0.triangle_additivity", lambda: _cases("k0.triangle_additivity", cfg, "k0", _triangle_case(cfg))))
    return r


# ---------------------------------------------------------------------------
# thm234: corpus identities for the functors E, H, F, G


def _euler_entry(name: str, expr, corpus: Corpus, ell: int | None) -> Entry:
    results = motif.euler_identity_all(expr, corpus.atoms, ell)
    bad = motif.first_failure(results)
    if bad:
        return Entry(name, "fail", bad.lhs, bad.rhs, f"first failure: {bad.name}")
    return Entry(name, "pass", f"n = 0..{len(results) - 1}", "E = F + G")


def _calibration_entry(N: motif.MotiveComplex) -> Entry:
    g0, g2 = motif.g_k0_vs_m_check(N, 0), motif.g_k0_vs_m_check(N, 2)
    gr = motif.deligne_graded(N, 2, 1)
    ok = (g0.ok and g2.ok and g0.lhs == "+1[Z]" and g2.lhs == "-1[Z]"
          and motif.grW_euler(N, 0) == 1 and motif.grW_euler(N, 2) == -1 and gr.free_rank == 1)
    return Entry("", "pass" if ok else "fail", f"G0 = {g0.lhs}, G2 = {g2.lhs}",
                 f"m0 = {motif.grW_euler(N, 0)}, m2 = {motif.grW_euler(N, 2)}, GrW2 H1 = Q^{gr.free_rank}")


def _structural_entry(corpus: Corpus) -> Entry:
    motives = motif.probe_motives(corpus.atoms)
    for M in corpus.atoms.motives():
        for n in (0, 1):
            if not motif.functor_eval(FunctorTag("F", n), M).is_zero():
                return Entry("", "fail", f"F{n}({M})", "0")
    for tag in ("F2", "F3", "G0", "G1"):
        bad = [c for c in motif.twist_kill_check(tag, corpus.atoms) if not c.ok]
        if bad:
            return Entry("", "fail", bad[0].name, bad[0].lhs)
    return Entry("", "pass", f"{len(motives)} motives", "F0 = F1 = 0; F2, F3, G0, G1 kill twists")


def _birational_entry(corpus: Corpus) -> Entry:
    classes = motif.birational_classes(corpus.atoms)
    got = sorted(str(t) for t in classes)
    want = sorted(str(FunctorTag.parse(t)) for t in ("F2", "F3", "G0", "G1"))
    merged = "; ".join("{" + ", ".join(str(t) for t in v) + "}" for _, v in sorted(classes.items()) if len(v) > 1)
    merged = f"identified: {merged}" if merged else ""
    return _check("", got == want, ", ".join(got), ", ".join(want), merged)


def _order_entry(corpus: Corpus) -> Entry:
    count = 0
    for M in corpus.atoms.motives():
        for n in (1, 2):
            for i in range(-1, 2 * M.base.dim + 2):
                c = motif.mod_ln_order_law(M, i, n)
                count += 1
                if not c.ok:
                    return Entry("", "fail", c.lhs, c.rhs, c.name)
    return Entry("", "pass", f"{count} groups", "|X| = |H/l^n| |H'[l^n]|")


def _wss_entry(N: motif.MotiveComplex) -> Entry:
    ss = motif.weight_ss(N, rational=True)
    return _check("", ss.degenerate, f"E2 total dims {_e2_dims(ss)}",
                  f"H dims {dict((n, M.free_rank) for n, M in sorted(ss.abutment.items()))}")


def _e2_dims(ss: motif.WeightSS) -> dict[int, int]:
    out: dict[int, int] = {}
    for (p, q), M in ss.E2.items():
        out[p + q] = out.get(p + q, 0) + M.free_rank
    return dict(sorted(out.items()))


def _grw_entry(N: motif.MotiveComplex) -> Entry:
    for n in N.weights():
        c = motif.g_k0_vs_m_check(N, n)
        if not c.ok:
            return Entry("", "fail", c.lhs, c.rhs, f"n = {n}")
    return Entry("", "pass", f"weights {N.weights()}", "G_K0 = m [Z]")


def _random_motive_complex(rng: random.Random, atoms: motif.AtomRegistry) -> motif.MotiveComplex:
    """Two-term complex of pure motives with random integral maps on the free parts."""
    ms = atoms.motives()
    M0 = rng.choice(ms)
    M1 = rng.choice(ms)
    M0 = motif.tate_twist(M0, rng.randint(0, 1)) if rng.random() < 0.3 else M0
    M1 = motif.tate_twist(M1, rng.randint(0, 1))
    comps = {}
    for q in sorted(set(M0.table) & set(M1.table)):
        src, tgt = M1.h(q), M0.h(q)
        m = [[0] * src.ngens for _ in range(tgt.ngens)]
        for a in range(tgt.free_rank):
            for b in range(src.free_rank):
                m[a][b] = rng.randint(-2, 2)
        comps[q] = Matrix(tgt.ngens, src.ngens, m)
    return motif.MotiveComplex({0: M0, 1: M1}, {0: motif.MotiveMap(M0, M1, comps)}, "random")


def _wss_random_case(corpus: Corpus):
    def case(rng):
        N = _random_motive_complex(rng, corpus.atoms)
        ss = motif.weight_ss(N, rational=True)
        if not ss.degenerate:
            return f"E2 dims {_e2_dims(ss)} vs abutment {ss.abutment}"
        for n in N.weights():
            c = motif.g_k0_vs_m_check(N, n)
            if not c.ok:
                return f"G{n}: {c.lhs} != {c.rhs}"
        return None
    return case


def thm234_suite(cfg: RunConfig, corpus: Corpus) -> Report:
    r = Report()
    ell = cfg.ell if cfg.ell_local else None
    if corpus.is_empty():
        for name in ("thm234.birational", "thm234.brauer", "thm234.calibration_Gm", "thm234.euler",
                     "thm234.order_law", "thm234.structural", "thm234.wss", "thm234.wss_random"):
            r.add(Entry(name, "skip", detail="empty corpus"))
        return r
    for name, expr in sorted(corpus.expressions.items()):
        if motif.is_pure_dimensional(expr, corpus.atoms):
            r.add(_timed(f"thm234.euler.{name}", lambda e=expr, n=name: _euler_entry(n, e, corpus, ell)))
        else:
            r.add(Entry(f"thm234.euler.{name}", "skip", detail="not of pure dimension"))
    Gm = corpus.complexes.get("Gm")
    r.add(_timed("thm234.calibration_Gm", lambda: _calibration_entry(Gm)) if Gm is not None
          else Entry("thm234.calibration_Gm", "skip", detail="no Gm complex in corpus"))
    r.add(_timed("thm234.structural", lambda: _structural_entry(corpus)))
    r.add(_timed("thm234.birational", lambda: _birational_entry(corpus)))
    r.add(_timed("thm234.order_law", lambda: _order_entry(corpus)))
    for name, fx in sorted(corpus.brauer.items()):
        def brauer(fx=fx):
            c = motif.brauer_finite_exponent_check(fx.motive, fx.input, cfg.ell)
            return Entry("", "pass", c.lhs or "0", c.rhs or "0", c.detail)
        r.add(_timed(f"thm234.brauer.{name}", brauer))
    for name, N in sorted(corpus.complexes.items()):
        r.add(_timed(f"thm234.wss.{name}", lambda N=N: _wss_entry(N)))
        r.add(_timed(f"thm234.grw.{name}", lambda N=N: _grw_entry(N)))
    r.add(_timed("thm234.wss_random", lambda: _cases("thm234.wss_random", cfg, "weight_ss", _wss_random_case(corpus))))
    return r


# ---------------------------------------------------------------------------
# measures: classes of varieties against point counts


def _count_entry(expr, corpus: Corpus, qs: Iterable[int]) -> Entry:
    cls = motif.class_of(expr, corpus.atoms, "compact_support")
    counts = [motif.point_count(expr, corpus.atoms, q) for q in qs]
    specs = [motif.lefschetz_specialize(cls, q) for q in qs]
    return _check("", counts == specs, f"counts {counts}", f"class {specs}")


def _ring_entry(corpus: Corpus) -> Entry:
    names = sorted(corpus.expressions)
    n = 0
    for a in names:
        for b in names:
            x, y = corpus.expressions[a], corpus.expressions[b]
            for mode in motif.MODES:
                ca, cb = motif.class_of(x, corpus.atoms, mode), motif.class_of(y, corpus.atoms, mode)
                if motif.class_of(motif.Product(x, y), corpus.atoms, mode) != ca.times(cb):
                    return Entry("", "fail", f"{a} x {b}", mode, "product class is not the product")
                if motif.class_of(motif.DisjointUnion(x, y), corpus.atoms, mode) != ca + cb:
                    return Entry("", "fail", f"{a} + {b}", mode, "union class is not the sum")
                n += 1
    return Entry("", "pass", f"{n} pairs", "products and unions")


def _mode_entry(corpus: Corpus) -> Entry:
    for name in corpus.atoms.names():
        e = motif.AtomExpr(name)
        if motif.class_of(e, corpus.atoms, "motive") != motif.class_of(e, corpus.atoms, "compact_support"):
            return Entry("", "fail", name, "", "modes disagree")
    return Entry("", "pass", f"{len(corpus.atoms)} atoms", "modes agree")


def _scissors_entry(corpus: Corpus, qs) -> Entry:
    n = 0
    for name, e in sorted(corpus.expressions.items()):
        if not isinstance(e, motif.Complement):
            continue
        A = corpus.atoms
        U, P, Z = (motif.class_of(x, A, "compact_support") for x in (e, e.ambient, e.closed))
        if P != U + Z:
            return Entry("", "fail", name, "", "compact classes")
        try:
            for q in qs:
                if motif.point_count(e.ambient, A, q) != motif.point_count(e, A, q) + motif.point_count(e.closed, A, q):
                    return Entry("", "fail", name, f"q = {q}", "point counts")
        except motif.UncountableAtom:
            pass
        n += 1
    return Entry("", "pass", f"{n} complements", "[P] = [U] + [Z]")


def measures_suite(cfg: RunConfig, corpus: Corpus) -> Report:
    r = Report()
    if corpus.is_empty():
        for name in ("measures.count", "measures.mode_agreement", "measures.ring_hom", "measures.scissors"):
            r.add(Entry(name, "skip", detail="empty corpus"))
        return r
    for name, expr in sorted(corpus.expressions.items()):
        if motif.is_cellular(expr, corpus.atoms):
            r.add(_timed(f"measures.count.{name}", lambda e=expr: _count_entry(e, corpus, cfg.q_values)))
        else:
            r.add(Entry(f"measures.count.{name}", "skip", detail="not torsion-free cellular"))
    r.add(_timed("measures.mode_agreement", lambda: _mode_entry(corpus)))
    r.add(_timed("measures.ring_hom", lambda: _ring_entry(corpus)))
    r.add(_timed("measures.scissors", lambda: _scissors_entry(corpus, cfg.q_values)))
    return r


# ---------------------------------------------------------------------------


_RUNNERS = {"khom": khom_suite, "k0": k0_suite, "thm234": thm234_suite, "measures": measures_suite}


def run_suite(name: str, cfg: RunConfig | None = None, corpus: Corpus | None = None) -> Report:
    cfg = cfg or RunConfig.load()
    if name != "all" and name not in _RUNNERS:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
    if corpus is None:
        corpus = load_corpus(cfg.corpus_paths())
    names = SUITES if name == "all" else (name,)
    report = Report()
    for n in names:
        report.extend(_RUNNERS[n](cfg, corpus))
    return report
