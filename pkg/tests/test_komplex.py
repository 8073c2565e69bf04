from __future__ import annotations

import random

import pytest

from oracles import homotopy_classes_bruteforce, rank_q
from weightk import generators as gen
from weightk import komplex as K
from weightk.errors import CompositionNonzero, NotContractible, UnsupportedRing
from weightk.komplex import Block, ChainMap, Complex, block_complex
from weightk.matrix import Matrix
from weightk.rings import QQ, ZZ, Zmod
from weightk.zmod import FgModule


def m(rows):
    return Matrix.from_rows(rows)


def one(rank=1, deg=0, ring=ZZ):
    return Complex.one_term(rank, deg, ring)


def times(a, lo=0, ring=ZZ):
    return Complex({lo: 1, lo + 1: 1}, {lo: m([[a]])}, ring)


def rng(i=0):
    return gen.case_rng(7, "test", i)


# construction


def test_composition_checked():
    with pytest.raises(CompositionNonzero):
        Complex({0: 1, 1: 1, 2: 1}, {0: m([[1]]), 1: m([[1]])})


def test_shift_convention():
    C = times(2)
    S = C.shift(1)
    assert S.ranks == {-1: 1, 0: 1}
    assert S.d(-1) == m([[-2]])
    assert K.shift(C, -1).ranks == {1: 1, 2: 1}


def test_json_round_trip():
    C = times(3, -1)
    assert Complex.from_json(C.to_json()) == C
    with pytest.raises(ValueError):
        Complex.from_json({"ring": "Z", "support": [0, 0], "terms": {"1": 1}})


# cones


def test_cone_of_identity_is_contractible():
    C = K.cone(ChainMap.identity(one()))
    assert C.ranks == {-1: 1, 0: 1}
    assert K.is_contractible(C) is not None


def test_cone_of_zero_is_shift_plus_target():
    A, B = times(2), one(2, 1)
    C = K.cone(ChainMap.zero(A, B))
    W = K.direct_sum(A.shift(1), B)
    assert C.ranks == W.ranks
    for i in C.degrees():
        assert rank_q(C.d(i).to_lists()) == rank_q(W.d(i).to_lists())


def test_cone_of_times_two():
    f = ChainMap(one(), one(), {0: m([[2]])})
    C = K.cone(f)
    assert K.homology(C, 0) == FgModule(0, (2,))
    assert K.homology(C, -1) == FgModule(0, ())


@pytest.mark.parametrize("i", range(30))
def test_cone_squares_to_zero_and_euler_additive(i):
    f = gen.random_chain_map(rng(i))
    C = K.cone(f)  # raises if d^2 != 0
    assert C.euler_characteristic() == f.target.euler_characteristic() - f.source.euler_characteristic()


# truncations and weight decompositions


def test_truncation_one_term():
    C = one()
    wd = K.weight_decomposition(C, 0)
    assert wd.L == C and wd.R.is_zero()
    wd = K.weight_decomposition(C, -1)
    assert wd.L.is_zero() and wd.R == C


def test_decomposition_of_times_two():
    C = times(2)
    # weight boundary between the two terms: L = degree 1 piece, R = degree 0 piece
    wd = K.weight_decomposition(C, -1)
    assert wd.L.ranks == {1: 1} and wd.R.ranks == {0: 1}
    assert wd.connecting[0] == m([[2]])
    assert K.verify_decomposition_triangle(wd)


def test_truncation_supports():
    C = K.direct_sum(times(1, -2), times(3, 0), one(2, 2))
    assert C.support == (-2, 2)
    assert K.stupid_truncate_le(C, 0).support == (0, 2)
    assert K.stupid_truncate_ge(C, 1).support == (-2, -1)


@pytest.mark.parametrize("i", range(20))
def test_random_decompositions(i):
    r = rng(100 + i)
    C = gen.random_complex(r)
    n = r.randint(-3, 3)
    wd = K.weight_decomposition(C, n)
    assert K.in_weight_le(wd.L, n) and K.in_weight_ge(wd.R, n + 1)
    assert K.verify_decomposition_triangle(wd)


# homotopies


def test_find_homotopy_trivial_and_absent():
    f = ChainMap(one(), one(), {0: m([[2]])})
    h = K.find_homotopy(f, f)
    assert h is not None and all(c.is_zero() for c in h.components.values())
    assert K.find_homotopy(f, ChainMap.zero(one(), one())) is None


@pytest.mark.parametrize("i", range(20))
def test_find_homotopy_recovers_constructed(i):
    r = rng(200 + i)
    A, B = gen.random_complex(r, max_rank=3), gen.random_complex(r, max_rank=3)
    h = {k: gen._random_matrix(r, B.rank(k - 1), A.rank(k)) for k in A.degrees() if B.rank(k - 1)}
    f = K.homotopy_boundary(A, B, h)
    w = K.find_homotopy(f, ChainMap.zero(A, B))
    assert w is not None
    assert K.homotopy_boundary(A, B, w.components) == f
    weak = K.find_weak_homotopy(f, ChainMap.zero(A, B))
    assert weak is not None


@pytest.mark.parametrize("i", range(20))
def test_weak_from_one_sided(i):
    r = rng(300 + i)
    A, B = gen.random_complex(r, max_rank=3), gen.random_complex(r, max_rank=3)
    h = {k: gen._random_matrix(r, B.rank(k - 1), A.rank(k)) for k in A.degrees() if B.rank(k - 1)}
    m1 = K.homotopy_boundary(A, B, h, {})
    w = K.find_weak_homotopy(m1, ChainMap.zero(A, B))
    assert w is not None
    assert K.homotopy_boundary(A, B, w.h, w.j) == m1 - ChainMap.zero(A, B)


def test_weak_not_homotopic_fixture():
    m1, m2 = gen.weak_not_homotopic_fixture()
    assert K.find_homotopy(m1, m2) is None
    w = K.find_weak_homotopy(m1, m2)
    assert w is not None
    assert K.homotopy_boundary(m1.source, m1.target, w.h, w.j) == m1 - m2


# Hom in the homotopy category


def test_hom_endomorphisms_of_unit():
    assert K.hom_group_mod_homotopy(one(), one()) == FgModule(1, ())


def test_hom_orthogonality_example():
    C = K.direct_sum(times(3, -2), one(2, 0))
    assert K.hom_group_mod_homotopy(C, one(1, 1)) == FgModule(0, ())


@pytest.mark.parametrize("C,D,expected", [
    (times(2), one(1, 0), FgModule(0, (2,))),
    (times(2), one(1, 1), FgModule(0, ())),
    (one(1, 1), times(2), FgModule(0, (2,))),
    (one(1, 0), times(2), FgModule(0, ())),
    (times(2), times(2), FgModule(0, (2,))),
    (times(2), times(3), FgModule(0, ())),
])
def test_hom_against_bruteforce(C, D, expected):
    got = K.hom_group_mod_homotopy(C, D)
    assert got == expected
    assert homotopy_classes_bruteforce(C, D, 3) == expected.order()


@pytest.mark.parametrize("i", range(25))
def test_block_hom_matches_generic_solver(i):
    r = rng(400 + i)
    C, D = gen.random_complex(r, -1, 1, 3), gen.random_complex(r, -1, 1, 3)
    assert K.hom_group_mod_homotopy(C, D) == K._hom_group_generic(C, D)


def test_hom_over_prime_field_and_composite_rejected():
    F3 = Zmod(3)
    assert K.hom_group_mod_homotopy(one(2, 0, F3), one(1, 0, F3)) == FgModule(2, ())
    with pytest.raises(UnsupportedRing):
        K.hom_group_mod_homotopy(one(1, 0, Zmod(4)), one(1, 0, Zmod(4)))


# contractibility and splitting


def test_split_identity_cone():
    C = K.cone(ChainMap.identity(one()))
    parts = K.split_contractible(C)
    assert len(parts) == 1
    deg, obj = parts[0]
    assert deg == -1 and obj.rank == 1


def test_split_two_cones():
    C, _ = block_complex([Block(-1, 1), Block(1, 1)])
    parts = K.split_contractible(C)
    assert [d for d, _ in parts] == [-1, 1]


def test_split_requires_contractible():
    with pytest.raises(NotContractible):
        K.split_contractible(times(2))


@pytest.mark.parametrize("i", range(20))
def test_split_random_recovers_ranks(i):
    bc = gen.random_contractible(rng(500 + i))
    parts = K.split_contractible(bc.complex)
    expected: dict[int, int] = {}
    for b in bc.blocks:
        expected[b.degree] = expected.get(b.degree, 0) + 1
    assert {d: o.rank for d, o in parts} == expected
    even = FgModule(0, ())
    odd = FgModule(0, ())
    for k in bc.complex.degrees():
        Mk = FgModule.from_cyclics(0, [4] * bc.complex.rank(k))
        if k % 2 == 0:
            even = even + Mk
        else:
            odd = odd + Mk
    assert even == odd


# weight complexes


def test_weight_complex_examples():
    C = times(2)
    assert K.weight_complex(one(3)) == one(3)
    assert K.weight_complex(K.direct_sum(C, K.cone(ChainMap.identity(one(1, 2))))).ranks == C.ranks


@pytest.mark.parametrize("i", range(20))
def test_weight_complex_shift_compatible(i):
    r = rng(600 + i)
    C = gen.random_complex(r)
    n = r.randint(-2, 2)
    assert K.weight_complex(C.shift(n)).ranks == K.weight_complex(C).shift(n).ranks
    W = K.weight_complex(C)
    mm = K.minimal_model(C)
    assert K.is_homotopy_equivalence(mm.incl)
    assert W.euler_characteristic() == C.euler_characteristic()


def test_weight_complex_support_bounds():
    r = random.Random(3)
    for _ in range(10):
        C = gen.weight_le_sample(r, 0)
        s = K.weight_complex(C).support
        assert s is None or s[0] >= 0
        D = gen.weight_ge_sample(r, 1)
        s = K.weight_complex(D).support
        assert s is None or s[1] <= -1


# pure functors


def test_pure_functor_one_term():
    C = one(3)
    assert K.pure_functor_H("id", C, 0) == FgModule(3, ())
    assert K.pure_functor_H("id", C, 1) == FgModule(0, ())
    assert K.pure_functor_H("id", C, -1) == FgModule(0, ())


def test_pure_functor_times_ell():
    C = times(2)
    assert K.functor_homology(C, "id", 1) == FgModule(0, (2,))
    assert K.functor_homology(C, "id", 0) == FgModule(0, ())
    assert K.functor_homology(C, "Z/2", 0) == FgModule(0, (2,))
    assert K.functor_homology(C, "Z/2", 1) == FgModule(0, (2,))
    assert K.functor_homology(C, "Q", 1) == FgModule(0, ())


def test_rational_complex():
    C = Complex({0: 2, 1: 1}, {0: m([[1, 1]])}, QQ)
    assert K.ranks_over_field(C) == {0: 1, 1: 0}


def test_induced_maps_equal_for_weak_pair():
    m1, m2 = gen.weak_not_homotopic_fixture()
    for tag in ("id", "Z/2", "Z/4"):
        for i in (0, 1):
            assert K.induced_on_homology(m1, tag, i) == K.induced_on_homology(m2, tag, i)
