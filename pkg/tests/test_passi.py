import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quadgroup.abelian import FgAb, Lattice, TensorSquare
from quadgroup.errors import CapExceeded, InvalidInput
from quadgroup.groups import (AbelianQuotient, Subgroup, abelianization, alternating_subgroup, center,
                              cyclic, dihedral, elementary, gamma, heisenberg, quaternion8, symmetric)
from quadgroup.passi import (aug, bipolynomial, coords, derivation_check, deviation_ring_identity, factor_poly,
                             gamma_ideal_check, ideal_power, is_polynomial, is_polynomial_rec, passi_group,
                             ring_commutator_identity, ring_mul, ring_prod, seq29_check)
from quadgroup.quadmaps import GroupFunction, quadratic_verdict

SMALL = [cyclic(2), cyclic(3), cyclic(4), elementary(2, 2), symmetric(3)]


def brute_power_basis(G, k):
    n = len(G)
    vecs = [tuple(coords(ring_prod(G, [aug(G, g) for g in t]))) for t in itertools.product(range(1, n), repeat=k)]
    return Lattice(n - 1, vecs).basis


@pytest.mark.parametrize("G,k", [(cyclic(2), 2), (cyclic(2), 3), (cyclic(4), 3), (elementary(2, 2), 3),
                                 (symmetric(3), 2), (symmetric(3), 3), (cyclic(3), 4)], ids=str)
def test_ideal_power_against_all_products(G, k):
    assert ideal_power(G, k).basis == brute_power_basis(G, k)


def test_ideal_cube_of_c2():
    # (a-1)^2 = -2(a-1), so I^3 = 4 Z (a-1)
    assert ideal_power(cyclic(2), 3).basis == [(4,)]


@pytest.mark.parametrize("G,B,n,factors", [
    (cyclic(2), None, 2, [4]),
    (cyclic(4), None, 2, [2, 8]),
    (elementary(2, 2), None, 2, [2, 4, 4]),
    (dihedral(4), "center", 2, [2, 2, 4, 4]),
    (dihedral(4), "all", 2, [2, 2]),
    (cyclic(2), None, 1, [2]),
], ids=str)
def test_passi_anchors(G, B, n, factors):
    Bs = None if B is None else (center(G) if B == "center" else Subgroup.whole(G))
    P = passi_group(G, Bs, n)
    assert list(P.group.factors) == factors


def test_c2_squared_order_32():
    assert passi_group(elementary(2, 2), None, 2).group.order == 32


@pytest.mark.parametrize("G", [cyclic(4), elementary(2, 2), symmetric(3), dihedral(4), quaternion8()],
                         ids=lambda G: G.name)
@pytest.mark.parametrize("n", [1, 2])
def test_passi_relative_whole_group_is_abelianization(G, n):
    P = passi_group(G, Subgroup.whole(G), n)
    assert list(P.group.factors) == list(abelianization(G).group.factors)


def test_degree_cap():
    with pytest.raises(CapExceeded):
        passi_group(cyclic(2), None, 4)
    with pytest.raises(InvalidInput):
        passi_group(symmetric(3), Subgroup.generated(symmetric(3), [_involution(symmetric(3))]), 2)


def _involution(G):
    return next(g for g in range(1, len(G)) if G.element_order(g) == 2)


@st.composite
def maps_to_abelian(draw, normalized=True):
    G = draw(st.sampled_from(SMALL))
    A = FgAb(tuple(draw(st.sampled_from([(2,), (4,), (2, 2), (3,), (8,)]))))
    els = list(A.elements())
    vals = [els[draw(st.integers(0, len(els) - 1))] for _ in range(len(G))]
    if normalized:
        vals[0] = A.zero
    return G, A, vals


@given(maps_to_abelian(), st.integers(0, 3), st.data())
def test_polynomial_lattice_and_recursive_agree(gav, n, data):
    G, A, vals = gav
    gens = data.draw(st.lists(st.integers(0, len(G) - 1), max_size=1))
    B = Subgroup.generated(G, gens)
    if not B.is_normal():
        B = Subgroup.trivial(G)
    assert is_polynomial(G, A, vals, n, B).ok == is_polynomial_rec(G, A, vals, n, B).ok


@given(maps_to_abelian(normalized=False))
def test_unnormalized_maps_are_not_polynomial(gav):
    G, A, vals = gav
    if vals[0] != A.zero:
        assert not is_polynomial(G, A, vals, 2).ok
        assert not is_polynomial_rec(G, A, vals, 2).ok


@given(maps_to_abelian())
def test_degree_one_means_homomorphism(gav):
    G, A, vals = gav
    hom = all(vals[G.mul(a, b)] == A.add(vals[a], vals[b]) for a in range(len(G)) for b in range(len(G)))
    assert is_polynomial(G, A, vals, 1).ok == hom


@given(maps_to_abelian())
def test_degree_two_means_quadratic(gav):
    G, A, vals = gav
    H = _fgab_group(A)
    f = GroupFunction(G, H, [A.index(v) for v in vals])
    assert is_polynomial(G, A, vals, 2).ok == quadratic_verdict(f).is_quadratic


def _fgab_group(A):
    from quadgroup.groups import fgab_to_group
    V = fgab_to_group(A)
    assert all(V.to_element(i) == A.element(i) for i in range(A.order))
    return V.group


@given(maps_to_abelian())
def test_deviation_ring_identity(gav):
    G, A, vals = gav
    assert deviation_ring_identity(G, A, vals).ok


def test_factor_poly_square():
    C4, Z8 = cyclic(4), FgAb((8,))
    vals = [(k * k % 8,) for k in range(4)]
    P = passi_group(C4, None, 2)
    fb, w = factor_poly(C4, Z8, vals, P)
    assert all(fb(P.p(a)) == vals[a] for a in range(4))
    assert w is not None and w(P.tensor.symbol(0, 0)) == (2,)
    with pytest.raises(InvalidInput):
        factor_poly(C4, Z8, vals, passi_group(C4, None, 1))


@given(maps_to_abelian(), st.integers(1, 2))
def test_factor_poly_when_polynomial(gav, n):
    G, A, vals = gav
    if not is_polynomial(G, A, vals, n).ok:
        return
    P = passi_group(G, None, n, check27=False)
    fb, _ = factor_poly(G, A, vals, P)
    assert all(fb(P.p(a)) == A.reduce(vals[a]) for a in range(len(G)))


ZOO = [cyclic(2), cyclic(4), elementary(2, 2), cyclic(6), quaternion8(), dihedral(4), symmetric(3),
       dihedral(8), heisenberg(3)]


@pytest.mark.parametrize("G", ZOO, ids=lambda G: G.name)
@pytest.mark.parametrize("n", [1, 2])
def test_derivation_property(G, n):
    for B in (Subgroup.trivial(G), center(G)):
        assert derivation_check(passi_group(G, B, n, check27=False)).ok


def test_relative_sequence_instances():
    S3 = symmetric(3)
    assert seq29_check(S3, alternating_subgroup(S3), 2).ok
    D4 = dihedral(4)
    assert seq29_check(D4, center(D4), 2).ok


@pytest.mark.parametrize("G", [dihedral(4), quaternion8(), dihedral(8)], ids=lambda G: G.name)
def test_gamma_ideal(G):
    assert gamma_ideal_check(G, 2).ok
    assert gamma_ideal_check(G, 3).ok


@pytest.mark.parametrize("G", [dihedral(4), quaternion8(), symmetric(3)], ids=lambda G: G.name)
def test_ring_commutator_in_p2(G):
    assert ring_commutator_identity(passi_group(G, None, 2, check27=False)).ok


def test_bipolynomial_tensor_map():
    G = elementary(2, 2)
    T = abelianization(G)
    TT = TensorSquare(T.group)
    vals = [[TT.tens(T(a), T(b)) for b in range(4)] for a in range(4)]
    assert bipolynomial(G, TT.group, vals, 1, 1).ok
    assert not bipolynomial(G, TT.group, vals, 0, 1).ok


def test_bipolynomial_commutator_of_class_three():
    D8 = dihedral(8)
    g2 = gamma(D8, 2)
    C = AbelianQuotient(D8, g2, Subgroup.trivial(D8))
    vals = [[C(D8.comm(a, b)) for b in range(16)] for a in range(16)]
    assert bipolynomial(D8, C.group, vals, 2, 2).ok
    assert not bipolynomial(D8, C.group, vals, 1, 1).ok


def test_ring_mul_associative():
    G = symmetric(3)
    rng = np.random.default_rng(0)
    for _ in range(20):
        x, y, z = (rng.integers(-3, 4, size=6) for _ in range(3))
        assert np.array_equal(ring_mul(G, ring_mul(G, x, y), z), ring_mul(G, x, ring_mul(G, y, z)))
