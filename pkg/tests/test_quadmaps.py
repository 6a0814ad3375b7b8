import itertools

import pytest
from hypothesis import given, strategies as st

from quadgroup.errors import InvalidInput
from quadgroup.groups import (GroupHom, Subgroup, abelian_product, center, cyclic, dihedral, elementary,
                              heisenberg, quaternion8, symmetric)
from quadgroup.quadmaps import (GroupFunction, bilinear_part, identity_suite, nilpotency_battery, pair_compose,
                                quadratic_verdict, radical, replay, sum_check)

SMALL = [cyclic(2), cyclic(3), cyclic(4), elementary(2, 2), symmetric(3), dihedral(4), quaternion8()]


def brute_laws(f, B=None):
    """Lexicographically least violation of each law, by direct enumeration."""
    G, H = f.domain, f.codomain
    n = len(G)
    d = lambda a, b: H.mul(H.mul(f(G.mul(a, b)), H.inverse(f(b))), H.inverse(f(a)))
    out = {"bilinear-left": None, "bilinear-right": None, "central": None, "relative": None}
    for a, a2, b in itertools.product(range(n), repeat=3):
        if out["bilinear-left"] is None and d(G.mul(a, a2), b) != H.mul(d(a, b), d(a2, b)):
            out["bilinear-left"] = (a, a2, b)
        if out["bilinear-right"] is None and d(a, G.mul(a2, b)) != H.mul(d(a, a2), d(a, b)):
            out["bilinear-right"] = (a, a2, b)
        if out["central"] is None and H.comm(d(a, a2), f(b)) != 0:
            out["central"] = (a, a2, b)
    if B is not None:
        for a, b in itertools.product(range(n), repeat=2):
            if (a in B or b in B) and d(a, b) != 0:
                out["relative"] = (a, b)
                break
    return out


@st.composite
def random_maps(draw):
    G = draw(st.sampled_from(SMALL[:5]))
    H = draw(st.sampled_from(SMALL))
    if draw(st.booleans()):
        table = draw(st.lists(st.integers(0, len(H) - 1), min_size=len(G), max_size=len(G)))
        table[0] = 0 if draw(st.booleans()) else table[0]
        return GroupFunction(G, H, table)
    k = draw(st.integers(0, 5))
    return GroupFunction.power_map(H, k)


@st.composite
def quadratic_forms(draw):
    """``f(x) = sum b_ij x_i x_j + sum c_i x_i`` on ``(Z/N)^k -> Z/N``, always quadratic."""
    N = draw(st.sampled_from([2, 3, 4, 5]))
    k = draw(st.integers(1, 2))
    G, H = abelian_product([N] * k), cyclic(N)
    b = draw(st.lists(st.integers(0, N - 1), min_size=k * k, max_size=k * k))
    c = draw(st.lists(st.integers(0, N - 1), min_size=k, max_size=k))
    vals = []
    for x in range(len(G)):
        xs = [(x // N**i) % N for i in range(k)]
        v = sum(b[i * k + j] * xs[i] * xs[j] for i in range(k) for j in range(k)) + sum(ci * xi for ci, xi in zip(c, xs))
        vals.append(v % N)
    return GroupFunction(G, H, vals, "form")


@given(random_maps())
def test_verdict_matches_brute_force(f):
    v = quadratic_verdict(f)
    oracle = brute_laws(f)
    assert v.is_quadratic == all(w is None for w in oracle.values())
    for law in ("bilinear-left", "bilinear-right", "central"):
        assert (v.laws[law] is None) == (oracle[law] is None), law
        if v.laws[law] is not None:
            assert tuple(v.laws[law]) == oracle[law]
            assert replay(f, law, v.laws[law])
    assert v.is_linear == f.is_linear()


@given(quadratic_forms(), st.data())
def test_forms_are_quadratic_and_relative(f, data):
    G = f.domain
    v = quadratic_verdict(f)
    assert v.is_quadratic
    gens = data.draw(st.lists(st.integers(0, len(G) - 1), max_size=2))
    B = Subgroup.generated(G, gens)
    vr = quadratic_verdict(f, B)
    oracle = brute_laws(f, B)
    assert vr.laws["relative"] == oracle["relative"]
    if vr.laws["relative"] is not None:
        assert replay(f, "relative", vr.laws["relative"], B)


@given(quadratic_forms())
def test_radical_oracle(f):
    G = f.domain
    D = f.deviation
    expect = {a for a in range(len(G)) if not D[a].any() and not D[:, a].any()}
    assert set(radical(f).elements) == expect


@given(quadratic_forms())
def test_bilinear_part_recovers_deviation(f):
    bp = bilinear_part(f)
    G = f.domain
    for a in range(len(G)):
        for b in range(len(G)):
            assert bp.on_pair(a, b) == f.d(a, b)


@given(quadratic_forms())
def test_identity_suite_on_abelian_forms(f):
    rep = identity_suite(f)
    assert rep.ok, [c.name for c in rep.failures]


@pytest.mark.parametrize("G", [dihedral(4), quaternion8(), heisenberg(3), elementary(2, 2)], ids=lambda G: G.name)
def test_identity_suite_on_squaring(G):
    rep = identity_suite(GroupFunction.power_map(G, 2))
    assert rep.ok


def test_inverse_map_identity_depends_on_commutator_convention():
    S3 = symmetric(3)
    rep = identity_suite(GroupFunction.identity(S3))
    literal = rep["inverse map d_-f(a,b) = d(b,a)^-1 f[a,b]^-1"]
    swapped = rep["inverse map, swapped commutator, d_-f(a,b) = d(b,a)^-1 f(a^-1b^-1ab)^-1"]
    assert literal.status == "FAIL" and swapped.status == "PASS"
    a, b = literal.witness
    f = GroupFunction.identity(S3)
    assert f.inverse().d(a, b) != S3.mul(S3.inverse(f.d(b, a)), S3.inverse(S3.comm(a, b)))
    assert [c.name for c in rep.failures] == [literal.name]


def test_non_quadratic_rejected():
    S3 = symmetric(3)
    f = GroupFunction.power_map(S3, 2)
    assert not quadratic_verdict(f).is_quadratic
    with pytest.raises(InvalidInput) as e:
        identity_suite(f)
    assert e.value.witness["law"] in ("bilinear-left", "bilinear-right", "central")


def _binom2(N_in, N_out):
    return [(x * (x - 1) // 2) % N_out for x in range(N_in)]


def test_pair_compose_with_oracle():
    C4, C8, C2 = cyclic(4), cyclic(8), cyclic(2)
    g = GroupFunction(C4, C8, [0, 1, 4, 1], "sq")
    f = GroupFunction(C8, C2, _binom2(8, 2), "b2")
    fg, rep = pair_compose(g, Subgroup.trivial(C4), f, Subgroup.trivial(C8))
    assert rep.ok, rep
    assert list(fg.table) == [f(g(x)) for x in range(4)]
    assert quadratic_verdict(fg).is_quadratic == all(w is None for w in brute_laws(fg).values())


def test_pair_compose_rejects_non_pairs():
    C4, C8 = cyclic(4), cyclic(8)
    g = GroupFunction(C4, C8, [0, 1, 4, 1], "sq")
    f = GroupFunction(C8, C8, [(x * x) % 8 for x in range(8)], "sq8")
    with pytest.raises(InvalidInput):
        pair_compose(g, Subgroup.trivial(C4), f, Subgroup.trivial(C8))


def test_sum_check_noncommuting_images():
    C4, Q8 = cyclic(4), quaternion8()
    i, j = 2, 4
    assert Q8.comm(i, j) != 0
    f = GroupFunction.from_hom(GroupHom.from_generators(C4, Q8, {1: i}), "f")
    g = GroupFunction.from_hom(GroupHom.from_generators(C4, Q8, {1: j}), "g")
    rep = sum_check(f, g)
    assert rep.ok, rep
    s = f.pointwise(g)
    assert not s.is_linear()
    # brute oracle for the extra commutator term
    for a in range(4):
        for b in range(4):
            assert s.d(a, b) == Q8.mul(Q8.mul(f.d(a, b), g.d(a, b)), Q8.comm(f(b), g(a)))


def test_sum_check_requires_class_two():
    S3 = symmetric(3)
    f = GroupFunction.identity(S3)
    with pytest.raises(InvalidInput):
        sum_check(f, f)


@pytest.mark.parametrize("G,n", [(dihedral(4), 2), (dihedral(4), 3), (symmetric(3), 2), (dihedral(8), 2),
                                 (quaternion8(), 3), (heisenberg(3), 2)], ids=str)
def test_nilpotency_battery(G, n):
    rep = nilpotency_battery(G, n)
    assert rep.ok, rep


def test_nilpotency_battery_skips_large_products():
    rep = nilpotency_battery(heisenberg(3), 3)
    assert rep["class <= 2 <=> mu_{n-1} on G^n quadratic"].status == "SKIPPED"
    assert rep.ok


def test_nilpotency_battery_detects_class_three():
    rep = nilpotency_battery(dihedral(8), 2)
    assert rep.info["class"] == 3
    assert rep.info["2_G quadratic"]["holds"] is False


def test_relative_to_center():
    D4 = dihedral(4)
    f = GroupFunction.power_map(D4, 2)
    v = quadratic_verdict(f, center(D4))
    assert v.is_quadratic
    assert v.relative_ok == (brute_laws(f, center(D4))["relative"] is None)
