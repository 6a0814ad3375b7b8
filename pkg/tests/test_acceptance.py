"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line. Running this file
directly (``python3 tests/test_acceptance.py``) prints all twelve lines.
"""

from __future__ import annotations

import itertools
import subprocess
import sys
import tempfile
from math import prod
from pathlib import Path

import numpy as np
import pytest

from quadgroup.abelian import FgAb, TensorSquare, smith
from quadgroup.errors import InvalidInput
from quadgroup.groups import (GroupHom, LieRing, Subgroup, abelian_product, abelianization, alternating_subgroup,
                              center, cyclic, elementary, fgab_to_group, lazard, nilpotency_class,
                              power_series_coefficient, power_series_units, subgroups_of_abelian)
from quadgroup.passi import (derivation_check, gamma_ideal_check, is_polynomial, passi_group, seq29_check)
from quadgroup.quadmaps import (GroupFunction, identity_suite, nilpotency_battery, pair_compose,
                                quadratic_verdict, replay)
from quadgroup.universal_q import (FreeWord, GenPair, Presentation, build_q, factor_quadratic, free_eval,
                                   free_fold, presented_build, presented_check, q_nilpotency, seq18_check)
from quadgroup.verify import DEFAULT_ZOO, ZOO, prop29_check, thm210_check


def _zoo(name):
    z = ZOO[name]
    return z() if callable(z) else z


def _central_subgroups(G):
    return subgroups_of_abelian(G, center(G))


def _line(n: int, ok: bool, detail: str) -> str:
    return f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})"


# ---------------------------------------------------------------------------
# criteria


def crit1():
    C2 = cyclic(2)
    Q = build_q(C2)
    q_ok = Q.order == 4 and list(abelianization(Q.group).group.factors) == [4]
    P = passi_group(C2, None, 2)
    p_ok = list(P.group.factors) == [4]
    rep = prop29_check(C2, Subgroup.trivial(C2))
    return q_ok and p_ok and rep.ok, f"|Q(C2)| = {Q.order}, P_2(C2) = {list(P.group.factors)}, prop29 {rep.counts()}"


def crit2():
    bad, n = [], 0
    for name in DEFAULT_ZOO:
        G = _zoo(name)
        for B in _central_subgroups(G):
            n += 1
            for rep in (thm210_check(G, B), prop29_check(G, B)):
                if not rep.ok:
                    bad.append(f"{name} B={list(B.elements)}: {[c.name for c in rep.failures]}")
    return not bad, f"{n} (G, B) instances" + (f"; failures {bad}" if bad else "")


def crit3():
    G = elementary(2, 2)
    P = passi_group(G, None, 2)
    # independent SNF orders: T (x) T, T ^ T (= Ker c_2 for abelian G) and P_2 itself
    tt = prod(smith(np.diag([2, 2, 2, 2]).tolist()).diagonal)
    wedge = prod(smith([[2]]).diagonal)
    ab = prod(abelianization(G).group.factors)
    p2 = prod(d for d in smith([list(v) for v in P.J.basis]).diagonal if d)
    book = tt * ab // wedge
    rep = thm210_check(G, Subgroup.trivial(G))
    ok = P.group.order == 32 == book == p2 and rep["Ker c_2 sequence: order bookkeeping"].passed
    return ok, f"|P_2| = {P.group.order}, {tt}*{ab}/{wedge} = {book}, SNF of J gives {p2}"


def crit4():
    problems, shuffled = [], []
    for name in DEFAULT_ZOO:
        G = _zoo(name)
        cls = nilpotency_class(G)
        two = GroupFunction.power_map(G, 2)
        v = quadratic_verdict(two)
        small = cls is not None and cls <= 2
        if v.is_quadratic != small:
            problems.append(f"{name}: quadratic={v.is_quadratic}, class={cls}")
        if not v.is_quadratic:
            law, w = v.counterexample
            if not replay(two, law, w):
                problems.append(f"{name}: witness {w} does not replay")
        if small:
            rep = nilpotency_battery(G, 3, budget=10**9)
            c = rep["shuffling identities on G^n"]
            if not c.passed:
                problems.append(f"{name}: shuffling n=3 {c.status}")
            shuffled.append(name)
    return not problems, f"shuffling n=3 on {','.join(shuffled)}" + (f"; {problems}" if problems else "")


def _lazard_map(m):
    L = LieRing.heisenberg(m)
    G = lazard(L)
    A = abelian_product([m] * 3)
    f = GroupFunction(G, A, np.arange(len(G)), f"lazard-id({m})")
    half = pow(2, -1, m)
    coords = lambda x: [(x // m**i) % m for i in range(3)]
    index = lambda v: sum((c % m) * m**i for i, c in enumerate(v))
    ok = all(f.d(x, y) == index([half * c for c in L.bracket(coords(x), coords(y))])
             for x in range(len(G)) for y in range(len(G)))
    return f, ok


def _c2_map(p):
    G = power_series_units(p, 4)
    f = GroupFunction(G, cyclic(p), [power_series_coefficient(p, 4, 2, g) for g in range(len(G))], f"c2({p})")
    c1 = [power_series_coefficient(p, 4, 1, g) for g in range(len(G))]
    ok = all(f.d(a, b) == (c1[a] * c1[b]) % p for a in range(len(G)) for b in range(len(G)))
    return f, ok


def _delta2(G):
    T = abelianization(G)
    TT = TensorSquare(T.group)
    V = fgab_to_group(TT.group)
    f = GroupFunction(G, V.group, [TT.group.index(TT.tens(T(a), T(a))) for a in range(len(G))], "delta2")
    return f


def crit5():
    maps = []
    for name in DEFAULT_ZOO:
        G = _zoo(name)
        for B in _central_subgroups(G):
            maps.append((f"q_{name},B={list(B.elements)}", build_q(G, B).q, B))
        cls = nilpotency_class(G)
        if cls is not None and cls <= 2:
            maps.append((f"2_{name}", GroupFunction.power_map(G, 2), None))
    for A in (cyclic(4), elementary(2, 2), abelian_product([2, 4]), cyclic(6)):
        maps.append((f"delta2 on {A.name}", _delta2(A), None))
    side = []
    for m in (3, 5):
        f, ok = _lazard_map(m)
        maps.append((f.name, f, None))
        side.append((f"d = 1/2[x,y] over Z/{m}", ok))
    for p in (2, 3):
        f, ok = _c2_map(p)
        maps.append((f.name, f, None))
        side.append((f"d = c1 c1 on U({p},4)", ok))
    failed = []
    for label, f, B in maps:
        rep = identity_suite(f, B)
        for c in rep.failures:
            failed.append(f"{label}: {c.name} at {c.witness}")
    side_bad = [s for s, ok in side if not ok]
    ok = not failed and not side_bad
    detail = f"{len(maps)} maps, deviation formulas {'verified' if not side_bad else side_bad}"
    if failed:
        detail += f"; {len(failed)} failing identities: " + "; ".join(failed)
    return ok, detail


def _homs(K, G):
    """All homomorphisms K -> G, by images of a generating set."""
    gens = list(K.generating_set)
    out = []
    for imgs in itertools.product(range(len(G)), repeat=len(gens)):
        try:
            out.append(GroupHom.from_generators(K, G, dict(zip(gens, imgs))))
        except InvalidInput:
            pass
    return out


def _forms(G, N, k):
    H = cyclic(N)
    for coeffs in itertools.product(range(N), repeat=k * k + k):
        b, c = coeffs[:k * k], coeffs[k * k:]
        vals = []
        for x in range(len(G)):
            xs = [(x // N**i) % N for i in range(k)]
            vals.append((sum(b[i * k + j] * xs[i] * xs[j] for i in range(k) for j in range(k))
                         + sum(ci * xi for ci, xi in zip(c, xs))) % N)
        yield GroupFunction(G, H, vals, "form")


def crit6():
    verified, failed, kinds = 0, [], {"hom then q": 0, "q then hom": 0, "quadratic then quadratic": 0}

    def run(kind, g, A, f, B):
        nonlocal verified
        _, rep = pair_compose(g, A, f, B)
        c12 = rep["composite deviation d_fg = f_* d_g + (g x g)^* d_f"]
        c13 = rep["composite bilinear part w_fg = f_* w_g + (gbar x gbar)^* w_f"]
        if c12.passed and c13.passed:
            verified += 1
            kinds[kind] += 1
        elif not rep.ok:
            failed.append((kind, g.name, f.name, [c.name for c in rep.failures]))

    # hom followed by q
    for Kn, Gn in (("C2", "C4"), ("C4", "C2xC2"), ("C2xC2", "D4"), ("C2", "Q8"), ("C6", "S3"), ("C4", "D4"),
                   ("C2xC2", "C2xC2"), ("C4", "C4")):
        K, G = _zoo(Kn), _zoo(Gn)
        Q = build_q(G)
        for h in _homs(K, G):
            g = GroupFunction.from_hom(h, "h")
            run("hom then q", g, Subgroup.trivial(K), Q.q, Subgroup.trivial(G))
    # q followed by hom: homomorphisms out of Q(G) from factoring quadratic maps
    for N, k in ((2, 2), (3, 1), (4, 1), (3, 2)):
        G = abelian_product([N] * k)
        Q = build_q(G)
        for f0 in itertools.islice(_forms(G, N, k), 20):
            fhat = GroupFunction.from_hom(factor_quadratic(f0, Q), "fhat")
            run("q then hom", Q.q, Subgroup.trivial(G), fhat, Q.w_image)
    # genuinely quadratic second factor
    C4, C8, C2 = cyclic(4), cyclic(8), cyclic(2)
    sq = GroupFunction(C4, C8, [0, 1, 4, 1], "sq")
    b2 = GroupFunction(C8, C2, [(x * (x - 1) // 2) % 2 for x in range(8)], "binom2")
    run("quadratic then quadratic", sq, Subgroup.trivial(C4), b2, Subgroup.generated(C8, [2]))
    ok = verified >= 100 and not failed
    return ok, f"{verified} pairs verified {kinds}" + (f"; failures {failed[:3]}" if failed else "")


def crit7():
    count, bad = 0, []
    for k in (1, 2, 3):
        letters = [(g, e) for g in range(k) for e in (1, -1)]
        for L in range(7):
            for w in itertools.product(letters, repeat=L):
                fw = FreeWord(w)
                t, red = free_eval(fw, k)
                count += 1
                if (t, red) != free_fold(fw, k) or free_eval(red, k)[0] != t:
                    bad.append(str(fw))
    return not bad, f"{count} words" + (f"; mismatches {bad[:5]}" if bad else "")


def crit8():
    P = Presentation(1, [FreeWord(((0, 1),) * 4)], cyclic(4), [1])
    Z8 = cyclic(8)
    acc = presented_check(P, Z8, GenPair([1], [[2]]))
    f, _ = presented_build(P, Z8, GenPair([1], [[2]]))
    rej = presented_check(P, Z8, GenPair([1], [[1]]))
    flagship = (acc.ok and list(f.table) == [k * k % 8 for k in range(4)]
                and rej["exponent-sum pairings vanish"].status == "FAIL")
    targets = [cyclic(n) for n in range(1, 9)] + [elementary(2, 2), abelian_product([2, 4]), elementary(2, 3),
                                                  _zoo("S3"), _zoo("D4"), _zoo("Q8")]
    mismatches, cases = [], 0
    for k in (1, 2, 3, 4):
        Pk = Presentation(1, [FreeWord(((0, 1),) * k)], cyclic(k), [1 % k])
        for H in targets:
            brute = set()
            for tail in itertools.product(range(len(H)), repeat=k - 1):
                g = GroupFunction(Pk.pi_group, H, (0,) + tail)
                if quadratic_verdict(g).is_quadratic:
                    brute.add((g(1 % k), g.d(1 % k, 1 % k)))
            accepted = {(c, p) for c in range(len(H)) for p in range(len(H))
                        if presented_check(Pk, H, GenPair([c], [[p]])).ok}
            cases += 1
            if accepted != brute:
                mismatches.append((k, H.name, sorted(accepted ^ brute)[:4]))
    return flagship and not mismatches, f"flagship {'ok' if flagship else 'wrong'}, {cases} (k, H) accept-sets" + (
        f"; mismatches {mismatches}" if mismatches else " match brute force")


def crit9():
    groups = [cyclic(1), cyclic(2), cyclic(3), cyclic(4), elementary(2, 2)]
    codomains = [()] + [(n,) for n in range(2, 9)] + [(2, 2), (2, 4), (2, 2, 2)]
    total, bad = 0, []
    for G in groups:
        for fac in codomains:
            A = FgAb(fac)
            H = fgab_to_group(A).group
            els = list(A.elements())
            for B in subgroups_of_abelian(G, Subgroup.whole(G)):
                for tail in itertools.product(range(A.order), repeat=len(G) - 1):
                    idx = (0,) + tail
                    poly = is_polynomial(G, A, [els[i] for i in idx], 2, B).ok
                    quad = quadratic_verdict(GroupFunction(G, H, idx), B).ok
                    total += 1
                    if poly != quad:
                        bad.append((G.name, fac, B.elements, idx))
    return not bad, f"{total} normalized maps" + (f"; disagreements {bad[:3]}" if bad else "")


def crit10():
    S3, D4 = _zoo("S3"), _zoo("D4")
    fails = []
    if not seq29_check(S3, alternating_subgroup(S3), 2).ok:
        fails.append("seq29 S3")
    if not seq29_check(D4, center(D4), 2).ok:
        fails.append("seq29 D4")
    n_der = 0
    for name in DEFAULT_ZOO:
        G = _zoo(name)
        for B in _central_subgroups(G):
            for n in (1, 2):
                n_der += 1
                if not derivation_check(passi_group(G, B, n, check27=False)).ok:
                    fails.append(f"derivation {name} B={list(B.elements)} n={n}")
    for name in ("D4", "Q8", "D8"):
        if not gamma_ideal_check(_zoo(name), 2).ok:
            fails.append(f"gamma ideal {name}")
    return not fails, f"2 sequences, {n_der} derivation instances, 3 gamma checks" + (f"; {fails}" if fails else "")


def crit11():
    fails, n = [], 0
    for name in DEFAULT_ZOO:
        G = _zoo(name)
        if nilpotency_class(G) is None:
            continue
        n += 1
        if not q_nilpotency(G).ok:
            fails.append(name)
    C2, C4, C3 = cyclic(2), cyclic(4), cyclic(3)
    if not seq18_check(GroupHom.from_generators(C2, C4, {1: 2}), GroupHom.from_generators(C4, C2, {1: 1})).ok:
        fails.append("seq18 C2 C4 C2")
    S3 = _zoo("S3")
    A3 = alternating_subgroup(S3)
    r = next(x for x in A3.elements if x)
    ab = abelianization(S3)
    beta = GroupHom(S3, C2, np.array([ab.group.index(ab(x)) for x in range(len(S3))]))
    if not seq18_check(GroupHom.from_generators(C3, S3, {1: r}), beta).ok:
        fails.append("seq18 A3 S3 C2")
    return not fails, f"class bound on {n} nilpotent groups, 2 sequences" + (f"; {fails}" if fails else "")


def crit12():
    outs = []
    with tempfile.TemporaryDirectory() as d:
        for i in range(2):
            path = Path(d) / f"r{i}.json"
            r = subprocess.run([sys.executable, "-m", "quadgroup", "verify", "--quiet", "--json", str(path)],
                               capture_output=True, text=True, check=False)
            if r.returncode not in (0, 1) or not path.exists():
                return False, f"verify exited {r.returncode}: {r.stderr.strip()[:200]}"
            outs.append(path.read_bytes())
    return outs[0] == outs[1], f"{len(outs[0])} bytes each, identical={outs[0] == outs[1]}"


CRITERIA = [crit1, crit2, crit3, crit4, crit5, crit6, crit7, crit8, crit9, crit10, crit11, crit12]


@pytest.mark.parametrize("n", range(1, 13), ids=lambda n: f"criterion{n}")
def test_criterion(n, capsys):
    ok, detail = CRITERIA[n - 1]()
    with capsys.disabled():
        print("\n" + _line(n, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for i, c in enumerate(CRITERIA, 1):
        ok, detail = c()
        results.append(ok)
        print(_line(i, ok, detail), flush=True)
    sys.exit(0 if all(results) else 1)
