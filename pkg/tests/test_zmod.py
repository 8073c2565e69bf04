from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import det, invariant_factors, rank_q
from weightk import zmod
from weightk.errors import CompositionNonzero
from weightk.matrix import Matrix
from weightk.zmod import FgModule, K0ModClass, ModuleMap

ELL = 2
Z = FgModule.free(1)


def M(rows):
    return Matrix.from_rows(rows)


def _check_snf(rows):
    A = M(rows)
    S, U, V = zmod.smith_normal_form(A)
    assert U @ A @ V == S
    assert abs(det(U.to_lists())) == 1 and abs(det(V.to_lists())) == 1
    diag = [S[i, i] for i in range(min(S.shape)) if S[i, i]]
    for a, b in zip(diag, diag[1:]):
        assert b % a == 0
    for i in range(S.nrows):
        for j in range(S.ncols):
            if i != j:
                assert S[i, j] == 0
    return diag


# smith normal form


def test_snf_zero_fixed_point():
    S, U, V = zmod.smith_normal_form(M([[0]]))
    assert S == M([[0]]) and U == M([[1]]) and V == M([[1]])


def test_snf_identity():
    S, _, _ = zmod.smith_normal_form(Matrix.identity(3))
    assert S == Matrix.identity(3)


def test_snf_two_by_two_matches_minor_oracle():
    assert invariant_factors([[2, 4], [6, 8]]) == [2, 4]
    assert _check_snf([[2, 4], [6, 8]]) == [2, 4]


small_rows = st.integers(1, 3).flatmap(
    lambda m: st.integers(1, 3).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=150, deadline=None)
@given(small_rows)
def test_snf_divisor_chain_and_minor_oracle(rows):
    assert _check_snf(rows) == invariant_factors(rows)


# cokernel


def test_cokernel_examples():
    assert zmod.cokernel(M([[0]])) == FgModule(1, ())
    assert zmod.cokernel(M([[ELL**2]])) == FgModule(0, (4,))
    assert zmod.cokernel(M([[2, 4], [6, 8]])) == FgModule(0, (2, 4))


@settings(max_examples=100, deadline=None)
@given(small_rows, st.randoms(use_true_random=False))
def test_cokernel_presentation_invariant(rows, rnd):
    base = zmod.cokernel(M(rows))
    padded = [r + [0] for r in rows]
    assert zmod.cokernel(M(padded)) == base
    perm = rows[:]
    rnd.shuffle(perm)
    cols = list(range(len(rows[0])))
    rnd.shuffle(cols)
    assert zmod.cokernel(M([[r[c] for c in cols] for r in perm])) == base
    assert base.free_rank == len(rows) - rank_q(rows)


# homology


def test_homology_zero_maps_return_module():
    Mod = FgModule(1, (2,))
    zero = FgModule(0, ())
    assert zmod.homology(ModuleMap.zero(zero, Mod), ModuleMap.zero(Mod, zero)) == Mod


def test_homology_cyclic_quotient():
    d_in = ModuleMap(Z, Z, M([[ELL]]))
    assert zmod.homology(d_in, ModuleMap.zero(Z, FgModule(0, ()))) == FgModule(0, (ELL,))


def test_homology_exact_middle():
    Z2 = FgModule.free(2)
    d_in = ModuleMap(Z, Z2, M([[1], [1]]))
    d_out = ModuleMap(Z2, Z, M([[1, -1]]))
    assert zmod.homology(d_in, d_out) == FgModule(0, ())


def test_homology_rejects_nonzero_composition():
    d_in = ModuleMap(Z, Z, M([[1]]))
    d_out = ModuleMap(Z, Z, M([[1]]))
    with pytest.raises(CompositionNonzero):
        zmod.homology(d_in, d_out)


def test_homology_over_torsion_modules():
    # Z/4 -2-> Z/4 -2-> Z/4 : ker 2 = {0,2} = im 2
    Z4 = FgModule(0, (4,))
    two = ModuleMap(Z4, Z4, M([[2]]))
    assert zmod.homology(two, two) == FgModule(0, ())


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.data())
def test_homology_free_rank_matches_rational_oracle(a, b, c, data):
    # d_out random; d_in built from kernel vectors so that d_out d_in = 0
    rows = data.draw(st.lists(st.lists(st.integers(-3, 3), min_size=b, max_size=b), min_size=c, max_size=c))
    d_out = M(rows)
    K = zmod.integer_kernel(d_out)
    coeffs = data.draw(st.lists(st.lists(st.integers(-2, 2), min_size=a, max_size=a),
                                min_size=K.ncols, max_size=K.ncols))
    d_in = K @ M(coeffs) if K.ncols else Matrix.zeros(b, a)
    H = zmod.homology(ModuleMap(FgModule.free(a), FgModule.free(b), d_in),
                      ModuleMap(FgModule.free(b), FgModule.free(c), d_out))
    ker = b - rank_q(rows)
    im = rank_q(d_in.to_lists())
    assert H.free_rank == ker - im


# free/torsion parts, tensor_mod, ell_torsion


def test_torsion_and_free_parts():
    assert zmod.torsion_part(FgModule(2, ())) == FgModule(0, ())
    assert zmod.free_part(FgModule(2, ())) == FgModule(2, ())
    assert zmod.torsion_part(FgModule(1, (4,))) == FgModule(0, (4,))
    assert zmod.free_part(FgModule(0, (2, 4))) == FgModule(0, ())


def test_tensor_mod_and_ell_torsion():
    assert zmod.tensor_mod(Z, ELL) == FgModule(0, (ELL,))
    assert zmod.ell_torsion(Z, ELL) == FgModule(0, ())
    Zl2 = FgModule(0, (ELL**2,))
    assert zmod.tensor_mod(Zl2, ELL) == FgModule(0, (ELL,))
    assert zmod.ell_torsion(Zl2, ELL) == FgModule(0, (ELL,))


def test_mod_ln_cohomology_examples():
    assert zmod.mod_ln_cohomology(Z, FgModule(0, ()), 1, ELL) == FgModule(0, (ELL,))
    assert zmod.mod_ln_cohomology(FgModule(0, ()), FgModule(0, (ELL**2,)), 1, ELL) == FgModule(0, (ELL,))
    X = zmod.mod_ln_cohomology(FgModule(1, (ELL,)), FgModule(0, (ELL**2,)), 1, ELL)
    assert X.order() == ELL**3


modules = st.builds(lambda r, ds: FgModule.from_cyclics(r, ds),
                    st.integers(0, 3), st.lists(st.integers(2, 12), max_size=3))


@settings(max_examples=150, deadline=None)
@given(modules, modules, st.integers(1, 3), st.sampled_from([2, 3, 5]))
def test_mod_ln_order_multiplicative(H, Hn, n, ell):
    X = zmod.mod_ln_cohomology(H, Hn, n, ell)
    assert X.order() == zmod.tensor_mod(H, ell**n).order() * zmod.ell_torsion(Hn, ell**n).order()


# K0 classes


def test_k0_class_examples():
    assert zmod.k0_class(Z) == K0ModClass({0: 1})
    assert zmod.k0_class(FgModule(1, (ELL**2,))) == K0ModClass({0: 1, 4: 1})
    assert zmod.k0_class(FgModule(0, (6,)), ell=2) == K0ModClass({2: 1})
    assert zmod.k0_class(FgModule(0, (6,))) == K0ModClass({2: 1, 3: 1})


def test_k0_class_render():
    assert zmod.k0_class(FgModule(1, (4,))).render() == "+1[Z] +1[Z/4]"


@settings(max_examples=150, deadline=None)
@given(modules, modules)
def test_k0_class_additive(A, B):
    assert zmod.k0_class(A + B) == zmod.k0_class(A) + zmod.k0_class(B)


# fg modules


def test_canonical_form_and_parse():
    assert FgModule.from_cyclics(0, [2, 3]) == FgModule(0, (6,))
    assert FgModule.from_cyclics(0, [4, 6]) == FgModule(0, (2, 12))
    m = FgModule.parse("Z^10 + Z/2")
    assert m == FgModule(10, (2,)) and str(m) == "Z^10 + Z/2"
    assert FgModule.parse("0") == FgModule(0, ())
    with pytest.raises(ValueError):
        FgModule.parse("Z/")


def test_divisor_chain_enforced():
    with pytest.raises(ValueError):
        FgModule(0, (4, 2))


# Kunneth


def test_kunneth_unit():
    T = {0: FgModule(1, ()), 2: FgModule(0, (2,)), 3: FgModule(1, ())}
    assert zmod.kunneth({0: Z}, T) == T


def test_kunneth_p1_squared():
    P1 = {0: Z, 2: Z}
    assert zmod.kunneth(P1, P1) == {0: Z, 2: FgModule.free(2), 4: Z}


def test_kunneth_tor_term():
    # Tor term of H^p (x) H^q sits in degree p + q - 1
    T = {2: FgModule(0, (2,))}
    assert zmod.tor1(T[2], T[2]) == FgModule(0, (2,))
    assert zmod.kunneth(T, T) == {3: FgModule(0, (2,)), 4: FgModule(0, (2,))}


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.integers(0, 3), modules, max_size=3),
       st.dictionaries(st.integers(0, 3), modules, max_size=3))
def test_kunneth_commutative(A, B):
    assert zmod.kunneth(A, B) == zmod.kunneth(B, A)


def test_presented_homology_matches_quotient():
    # (Z/4 -2-> Z/4) at the target: coker = Z/2
    rel = M([[4]])
    H = zmod.presented_homology(M([[2]]), Matrix.zeros(0, 1), rel, Matrix.zeros(0, 0))
    assert H == FgModule(0, (2,))
