from __future__ import annotations

import pytest

from weightk import generators as gen
from weightk import k0
from weightk import komplex as K
from weightk.classes import FunctorTag, K0Class
from weightk.errors import Mismatch, NoTensorRegistered, NotPure, UnregisteredFunctor
from weightk.komplex import ChainMap, Complex, MatObject
from weightk.matrix import Matrix
from weightk.rings import QQ, ZZ
from weightk.zmod import FgModule, K0ModClass

TAGS = ["id", FunctorTag("tensor_mod", 2), FunctorTag("tensor_mod", 4), "rational"]


def one(rank=1, deg=0, ring=ZZ):
    return Complex.one_term(rank, deg, ring)


def unit_cone(deg=0, ring=ZZ):
    return K.cone(ChainMap.identity(one(1, deg + 1, ring)))


def rng(i):
    return gen.case_rng(11, "test_k0", i)


# f_k0


@pytest.mark.parametrize("F", TAGS)
def test_f_k0_trivial_cases(F):
    assert not k0.f_k0(Complex.zero(), F)
    assert not k0.f_k0(unit_cone(), F)


def test_f_k0_one_term():
    assert k0.f_k0(one(3), "id") == K0ModClass({0: 3})
    assert k0.f_k0(one(2, 1), "id") == K0ModClass({0: -2})
    assert k0.f_k0(one(2), "Z/4") == K0ModClass({4: 2})
    assert k0.f_k0(one(2), "Z/6") == K0ModClass({2: 2, 3: 2})


def test_unregistered_functor():
    with pytest.raises(UnregisteredFunctor):
        k0.f_k0(one(), FunctorTag("nope"))


def test_registration_audits_additivity():
    reg = k0.FunctorRegistry()
    bad = lambda obj, tag: FgModule(1, ())  # noqa: E731  constant, hence not additive
    with pytest.raises(ValueError):
        reg.register("const", bad, k0._matrix_sum, [(MatObject(r), FunctorTag("const")) for r in (0, 1)])
    reg.register("id", k0._matrix_eval, k0._matrix_sum, [(MatObject(1), FunctorTag("id"))])
    with pytest.raises(ValueError):
        reg.register("id", k0._matrix_eval, k0._matrix_sum)
    assert reg.names() == ["id"]


@pytest.mark.parametrize("i", range(40))
def test_f_k0_direct_sum_homomorphism(i):
    r = rng(i)
    C, D = gen.random_complex(r), gen.random_complex(r)
    for F in TAGS:
        assert k0.f_k0(K.direct_sum(C, D), F) == k0.f_k0(C, F) + k0.f_k0(D, F)


@pytest.mark.parametrize("i", range(40))
def test_f_k0_invariance(i):
    eq = gen.random_equivalence(rng(100 + i))
    assert K.is_homotopy_equivalence(eq.f)
    for F in TAGS:
        assert k0.f_k0(eq.f.source, F) == k0.f_k0(eq.f.target, F)


# triangles


def test_triangle_trivial():
    A = K.direct_sum(one(2, 0), one(1, 1))
    B = one(3, 0)
    assert k0.triangle_additivity_check(ChainMap.zero(A, B))
    assert k0.triangle_additivity_check(ChainMap.identity(A))


@pytest.mark.parametrize("i", range(100))
def test_triangle_random(i):
    f = gen.random_chain_map(rng(200 + i))
    for F in TAGS:
        assert k0.triangle_additivity_check(f, F)


# section


def test_section_check():
    objs = [MatObject(r) for r in range(4)]
    eqs = [gen.random_equivalence(rng(300 + i)).f for i in range(10)]
    results = k0.section_isomorphism_check(objs, eqs)
    assert len(results) == 14 and all(r.ok for r in results)
    assert k0.f_k0(one(3), "id") == 3 * K0ModClass({0: 1})


def test_section_with_unit_cone_summand():
    C = gen.random_complex(rng(400))
    D = K.direct_sum(C, unit_cone(1))
    assert k0.f_k0(C, "id") == k0.f_k0(D, "id")


# semisimple formula


def test_semisimple_examples():
    lhs, rhs = k0.semisimple_formula(one(2, 0, QQ))
    assert lhs == rhs == K0ModClass({0: 2}, "Q")
    lhs, rhs = k0.semisimple_formula(unit_cone(0, QQ))
    assert not lhs and not rhs


@pytest.mark.parametrize("i", range(30))
def test_semisimple_random(i):
    C = gen.random_complex(rng(500 + i), -2, 2, 4)
    lhs, rhs = k0.semisimple_formula(C, "rational")
    assert lhs == rhs


# purity shortcut


def test_pure_shortcut():
    assert k0.pure_object_shortcut(one(2, 0)) == K0ModClass({0: 2})
    assert k0.pure_object_shortcut(one(2, 1)) == K0ModClass({0: -2})
    C = K.direct_sum(one(2, 1), unit_cone(-1))
    assert k0.pure_object_shortcut(C) == K0ModClass({0: -2})


def test_pure_shortcut_rejects_mixed():
    C = Complex({0: 1, 1: 1}, {0: Matrix.from_rows([[2]])})
    with pytest.raises(NotPure):
        k0.pure_object_shortcut(C)


def test_mismatch_is_identity_failure():
    from weightk.errors import IdentityFailure

    assert issubclass(Mismatch, IdentityFailure)


# products


def test_matrix_products():
    x = K0Class({0: 3, 2: -1})
    unit = K0Class({k0.tensor_unit("matrix"): 1})
    assert k0.k0_product(x, unit) == x
    assert k0.k0_product(K0Class({0: 2}), K0Class({0: 3})) == K0Class({0: 6})
    assert k0.k0_product(K0Class({4: 1}), K0Class({2: 1})) == K0Class({2: 1})


def test_motif_product_lefschetz():
    L = K0Class({(2, 0): 1})
    assert k0.k0_product(L, L, "motif") == K0Class({(4, 0): 1})
    unit = K0Class({k0.tensor_unit("motif"): 1})
    x = K0Class({(0, 0): 1, (2, 0): 10, (2, 2): 1, (3, 2): 1, (4, 0): 1})
    assert k0.k0_product(x, unit, "motif") == x


def test_no_tensor_rule():
    with pytest.raises(NoTensorRegistered):
        k0.k0_product(K0Class({0: 1}), K0Class({0: 1}), "sheaf")
    with pytest.raises(NoTensorRegistered):
        k0.tensor_unit("sheaf")


@pytest.mark.parametrize("rule,keys", [
    ("matrix", [0, 2, 3, 4]),
    ("motif", [(0, 0), (2, 0), (2, 2), (3, 2), (1, 4)]),
])
def test_product_commutative_associative(rule, keys):
    import random

    r = random.Random(5)
    for _ in range(30):
        x, y, z = (K0Class({k: r.randint(-2, 2) for k in r.sample(keys, 2)}) for _ in range(3))
        assert k0.k0_product(x, y, rule) == k0.k0_product(y, x, rule)
        assert k0.k0_product(k0.k0_product(x, y, rule), z, rule) == \
            k0.k0_product(x, k0.k0_product(y, z, rule), rule)
