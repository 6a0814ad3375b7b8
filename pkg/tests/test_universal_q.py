import numpy as np
import pytest
from hypothesis import given, strategies as st

from quadgroup.abelian import smith
from quadgroup.errors import CapExceeded, InvalidInput
from quadgroup.groups import (GroupHom, abelian_product, abelianization, alternating_subgroup, center,
                              cyclic, dihedral, elementary, heisenberg, nilpotency_class, quaternion8, symmetric)
from quadgroup.quadmaps import GroupFunction, quadratic_verdict
from quadgroup.universal_q import (FreeWord, GenPair, Presentation, build_q, factor_quadratic, free_eval,
                                   free_fold, presented_build, presented_check, q_nilpotency, q_of_hom,
                                   seq18_check)

ZOO = [cyclic(2), cyclic(4), elementary(2, 2), cyclic(6), quaternion8(), dihedral(4), symmetric(3),
       dihedral(8), heisenberg(3)]


def test_q_of_c2_is_cyclic_of_order_four():
    Q = build_q(cyclic(2))
    assert Q.order == 4
    assert list(abelianization(Q.group).group.factors) == [4]


@pytest.mark.parametrize("G", ZOO, ids=lambda G: G.name)
def test_q_orders_and_self_checks(G):
    Q = build_q(G)
    T = abelianization(G).group.factors
    tt = 1
    for s in T:
        for t in T:
            tt *= np.gcd(s, t)
    assert Q.order == len(G) * tt
    assert Q.verify().ok
    assert quadratic_verdict(Q.q).is_quadratic


def test_q_relative_center():
    D4 = dihedral(4)
    Q = build_q(D4, center(D4))
    assert Q.order == 8 * 16   # Z(D4) = D4', so T is unchanged
    assert quadratic_verdict(Q.q, center(D4)).ok
    with pytest.raises(CapExceeded):
        build_q(D4, max_order=100)


@st.composite
def forms(draw):
    N = draw(st.sampled_from([2, 3, 4]))
    k = draw(st.integers(1, 2 if N < 4 else 1))   # keeps |Q| <= 729
    G, H = abelian_product([N] * k), cyclic(N)
    b = draw(st.lists(st.integers(0, N - 1), min_size=k * k, max_size=k * k))
    c = draw(st.lists(st.integers(0, N - 1), min_size=k, max_size=k))
    vals = []
    for x in range(len(G)):
        xs = [(x // N**i) % N for i in range(k)]
        vals.append((sum(b[i * k + j] * xs[i] * xs[j] for i in range(k) for j in range(k))
                     + sum(ci * xi for ci, xi in zip(c, xs))) % N)
    return GroupFunction(G, H, vals)


@given(forms())
def test_factor_quadratic_universal_property(f):
    Q = build_q(f.domain)
    fhat = factor_quadratic(f, Q)
    assert np.array_equal(fhat.table[Q.q.table], f.table)
    # homomorphism check by brute force
    T, HT = Q.group.table, f.codomain.table
    assert np.array_equal(fhat.table[T], HT[fhat.table[:, None], fhat.table[None, :]])


@pytest.mark.parametrize("G", [dihedral(4), quaternion8(), heisenberg(3)], ids=lambda G: G.name)
def test_factor_squaring(G):
    f = GroupFunction.power_map(G, 2)
    Q = build_q(G)
    fhat = factor_quadratic(f, Q)
    assert np.array_equal(fhat.table[Q.q.table], f.table)


def test_factor_rejects_non_quadratic():
    S3 = symmetric(3)
    with pytest.raises(InvalidInput):
        factor_quadratic(GroupFunction.power_map(S3, 2), build_q(S3))


def test_q_functoriality():
    C2, C4, C8 = cyclic(2), cyclic(4), cyclic(8)
    inc = GroupHom.from_generators(C2, C4, {1: 2})
    inc2 = GroupHom.from_generators(C4, C8, {1: 2})
    comp = GroupHom(C2, C8, inc2.table[inc.table])
    Q2, Q4, Q8 = build_q(C2), build_q(C4), build_q(C8)
    a = q_of_hom(inc, Q2, Q4)
    b = q_of_hom(inc2, Q4, Q8)
    c = q_of_hom(comp, Q2, Q8)
    assert np.array_equal(c.table, b.table[a.table])
    ident = q_of_hom(GroupHom(C4, C4, np.arange(4)), Q4, Q4)
    assert np.array_equal(ident.table, np.arange(Q4.order))


@pytest.mark.parametrize("G", [G for G in ZOO if nilpotency_class(G) is not None], ids=lambda G: G.name)
def test_q_nilpotency(G):
    rep = q_nilpotency(G)
    assert rep.ok


def test_right_exactness_cyclic():
    C2, C4 = cyclic(2), cyclic(4)
    alpha = GroupHom.from_generators(C2, C4, {1: 2})
    beta = GroupHom.from_generators(C4, C2, {1: 1})
    assert seq18_check(alpha, beta).ok


def test_right_exactness_symmetric():
    S3 = symmetric(3)
    A3 = alternating_subgroup(S3)
    C3 = cyclic(3)
    g = next(x for x in A3.elements if x)
    alpha = GroupHom.from_generators(C3, S3, {1: g})
    ab = abelianization(S3)
    beta = GroupHom(S3, cyclic(2), np.array([ab.group.index(ab(x)) for x in range(6)]))
    rep = seq18_check(alpha, beta)
    assert rep.ok, rep
    with pytest.raises(InvalidInput):
        seq18_check(alpha, GroupHom(S3, cyclic(1), np.zeros(6, dtype=np.int64)))


letters = st.tuples(st.integers(0, 2), st.sampled_from([1, -1]))


@given(st.lists(letters, max_size=8))
def test_free_eval_matches_fold(ls):
    w = FreeWord(tuple(ls))
    assert free_eval(w, 3) == free_fold(w, 3)
    assert free_eval(w, 3)[0] == free_eval(w.reduced(), 3)[0]


def test_free_eval_examples():
    x, y = (0, 1), (1, 1)
    t, red = free_eval(FreeWord((x, y)), 2)
    assert t == (0, 1, 0, 0) and str(red) == "x0 x1"
    t, _ = free_eval(FreeWord(((0, -1),)), 1)
    assert t == (1,)
    t, red = free_eval(FreeWord(((0, 1), (0, -1))), 1)
    assert t == (0,) and len(red) == 0


def _c4_presentation():
    return Presentation(1, [FreeWord(((0, 1),) * 4)], cyclic(4), [1])


def test_flagship_accept_and_reject():
    P, Z8 = _c4_presentation(), cyclic(8)
    rep = presented_check(P, Z8, GenPair([1], [[2]]))
    assert rep.ok and rep.info["verdict"] == "ACCEPT"
    f, _ = presented_build(P, Z8, GenPair([1], [[2]]))
    assert list(f.table) == [k * k % 8 for k in range(4)]
    bad = presented_check(P, Z8, GenPair([1], [[1]]))
    assert bad["exponent-sum pairings vanish"].status == "FAIL"
    assert bad.info["verdict"] == "REJECT"


def test_presentation_validation():
    with pytest.raises(InvalidInput):
        Presentation(1, [FreeWord(((1, 1),))])
    with pytest.raises(InvalidInput):
        Presentation(1, [FreeWord(((0, 1),) * 3)], cyclic(4), [1])
    with pytest.raises(InvalidInput):
        FreeWord(((0, 2),))


def test_noncommuting_psi_rejected():
    Q8 = quaternion8()
    P = Presentation(2, [], None, None)
    rep = presented_check(P, Q8, GenPair([0, 0], [[0, 2], [4, 0]]))
    assert rep["centrality [Im psi, Im psi] = 1"].status == "FAIL"


def test_smith_sanity_for_q_orders():
    # |T (x) T| for T = Z/2 x Z/4 is prod gcd = 2*2*2*4 = 32
    assert build_q(abelian_product([2, 4])).order == 8 * 32
    assert smith([[2, 0], [0, 4]]).diagonal == [2, 4]
