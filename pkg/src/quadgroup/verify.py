"""Cross-construction checks comparing Q(G,B), P_2(G,B) and the exact sequences relating them."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .abelian import AbMap, AbSub, DirectSum, ExteriorSquare, copair_map, sub_equal, tuple_map
from .checks import DEFAULT_BUDGET, Report
from .errors import CapExceeded, InvalidInput, QuadGroupError
from .groups import (ORDER_CAP, AbelianQuotient, FiniteGroup, Subgroup, abelianization, builtin, center,
                     derived_subgroup, fgab_to_group, gamma, quotient, subgroups_of_abelian)
from .passi import (PassiGroup, derivation_check, factor_poly, ideal_power, passi_group,
                    ring_commutator_identity, seq29_check)
from .quadmaps import GroupFunction, identity_suite, nilpotency_battery, quadratic_verdict
from .universal_q import build_q, factor_quadratic


def _require_central(G: FiniteGroup, B: Subgroup) -> None:
    if B.parent is not G:
        raise InvalidInput("subgroup belongs to a different group")
    if not B.is_central():
        bad = next(b for b in B.elements if any(G.mul(b, g) != G.mul(g, b) for g in range(len(G))))
        raise InvalidInput("B is not central", {"element": bad})


def _alternating_ok(orders: Sequence[int]) -> bool:
    num = den = 1
    for i, o in enumerate(orders):
        if i % 2:
            den *= o
        else:
            num *= o
    return num == den


def _exact(rep: Report, label: str, incoming: AbMap, outgoing: AbMap) -> None:
    rep.add(f"{label}: Im = Ker", sub_equal(incoming.image(), outgoing.kernel()),
            {"image_order": incoming.image().order(), "kernel_order": outgoing.kernel().order()})


# ---------------------------------------------------------------------------
# Q(G,B)^ab versus P_2(G,B)


def prop29_check(G: FiniteGroup, B: Subgroup | None = None, budget: int = DEFAULT_BUDGET,
                 max_order: int = ORDER_CAP) -> Report:
    """Builds ``alpha : Q(G,B)^ab -> P_2(G,B)`` and its inverse from the two universal properties."""
    B = B if B is not None else Subgroup.trivial(G)
    _require_central(G, B)
    rep = Report(f"Q^ab vs P_2 for {G.name}, |B| = {B.order}")
    Q = build_q(G, B, max_order=max_order, budget=budget)
    P = passi_group(G, B, 2, budget=budget)
    Qab = abelianization(Q.group)
    rep.info.update({"Q_order": Q.order, "Q_ab": list(Qab.group.factors), "P2": list(P.group.factors)})

    # alpha from p_2 : G -> P, quadratic relative B
    PV = fgab_to_group(P.group, "P2")
    p2 = GroupFunction(G, PV.group, np.array([PV.to_index(P.p(a)) for a in range(len(G))]), "p_2")
    v = quadratic_verdict(p2, B, budget)
    rep.add("p_2 quadratic relative B", v.ok, v.counterexample)
    if not v.ok:
        return rep
    p2hat = factor_quadratic(p2, Q, budget)
    alpha = AbMap(Qab.group, P.group, tuple(PV.to_element(p2hat(Qab.lift(e))) for e in Qab.group.gens()))
    bad = next((y for y in range(Q.order) if alpha(Qab(y)) != PV.to_element(p2hat(y))), None)
    rep.add("p_2^ factors through Q^ab", bad is None, bad)

    # inverse from ab q : G -> Q^ab, polynomial of degree <= 2 relative B
    abq = [Qab(int(Q.q(a))) for a in range(len(G))]
    beta, _ = factor_poly(G, Qab.group, abq, P, budget)
    rep.add("beta alpha = id", beta @ alpha == AbMap.identity(Qab.group))
    rep.add("alpha beta = id", alpha @ beta == AbMap.identity(P.group))
    rep.add("invariant factors agree", Qab.group == P.group,
            {"Q_ab": list(Qab.group.factors), "P2": list(P.group.factors)})

    bad = next((a for a in range(len(G)) if alpha(abq[a]) != P.p(a)), None)
    rep.add("alpha ab q = p_2", bad is None, bad)
    same_T = np.array_equal(Q.T.codes, P.quotient_T.codes) and Q.T.group == P.quotient_T.group
    rep.add("Q and P_2 use the same T = G/BG'", same_T)
    if same_T:
        TT = Q.tensor
        bad = None
        for i in range(TT.n):
            for j in range(TT.n):
                s = TT.symbol(i, j)
                if alpha(Qab(Q.w(s))) != P.mu2(s):
                    bad = (i, j)
                    break
            if bad:
                break
        rep.add("alpha ab w_q = mu_2", bad is None, bad)
    return rep


# ---------------------------------------------------------------------------
# the three exact sequences


def thm210_check(G: FiniteGroup, B: Subgroup | None = None, budget: int = DEFAULT_BUDGET) -> Report:
    B = B if B is not None else Subgroup.trivial(G)
    _require_central(G, B)
    rep = Report(f"exact sequences for {G.name}, |B| = {B.order}")
    g3 = gamma(G, 3)
    BG = B.join(derived_subgroup(G))
    P = passi_group(G, B, 2, budget=budget)
    T = P.quotient_T
    TT = P.tensor
    W = ExteriorSquare(T.group, TT)
    C = AbelianQuotient(G, BG, g3)                     # BG'/gamma_3
    D = AbelianQuotient(G, B.join(g3), g3)             # B gamma_3/gamma_3
    Gab = abelianization(G)
    lifts = T.generator_lifts()
    c2 = W.induced_map(lambda i, j: C(G.comm(lifts[i], lifts[j])), C.group)
    bad = next(((a, b) for a in range(len(G)) for b in range(len(G))
                if c2(W.wedge(T(a), T(b))) != C(G.comm(a, b))), None)
    rep.add("c_2(abar ^ bbar) = [a,b] gamma_3", bad is None, bad)
    l2 = W.l2
    K, inc = c2.kernel().as_fgab()
    mu = P.mu2
    rho1 = P.induced([Gab(g) for g in range(len(G))], Gab.group)
    rho2 = P.induced([T(g) for g in range(len(G))], T.group)

    def p2i(Aq: AbelianQuotient, label: str) -> AbMap:
        m = AbMap(Aq.group, P.group, tuple(P.p(Aq.lift(e)) for e in Aq.group.gens()))
        bad = next((h for h in Aq.H.elements if m(Aq(h)) != P.p(h)), None)
        rep.add(f"p_2 i on {label} is the restriction of p_2", bad is None, bad)
        return m

    p2iC = p2i(C, "BG'/gamma_3")
    p2iD = p2i(D, "B gamma_3/gamma_3")
    rep.info.update({"T": list(T.group.factors), "TxT": list(TT.group.factors), "T^T": list(W.group.factors),
                     "Ker c_2": list(K.factors), "P2": list(P.group.factors), "G_ab": list(Gab.group.factors),
                     "BG'/gamma_3": list(C.group.factors), "B gamma_3/gamma_3": list(D.group.factors)})

    # 0 -> Ker c_2 -> T(x)T -> P_2 -> G^ab -> 1
    first = l2 @ inc
    rep.add("Ker c_2 sequence: l_2 injective on Ker c_2", first.is_injective())
    _exact(rep, "Ker c_2 sequence: at T(x)T", first, mu)
    _exact(rep, "Ker c_2 sequence: at P_2", mu, rho1)
    rep.add("Ker c_2 sequence: rho_1 surjective", rho1.is_surjective())
    rep.add("Ker c_2 sequence: order bookkeeping",
            _alternating_ok([K.order, TT.group.order, P.group.order, Gab.group.order]))

    # 0 -> T^T -> BG'/gamma_3 (+) T(x)T -> P_2 -> T -> 1
    S = DirectSum(C.group, TT.group)
    into = tuple_map([c2, -l2], S)
    out = copair_map([p2iC, mu], S)
    rep.add("exterior sequence: (c_2, -l_2) injective", into.is_injective())
    _exact(rep, "exterior sequence: at BG'/gamma_3 + T(x)T", into, out)
    _exact(rep, "exterior sequence: at P_2", out, rho2)
    rep.add("exterior sequence: rho_2 surjective", rho2.is_surjective())
    rep.add("exterior sequence: order bookkeeping",
            _alternating_ok([W.group.order, S.group.order, P.group.order, T.group.order]))

    # 0 -> B gamma_3/gamma_3 -> P_2(G,B) -> P_2(G/B) -> 0
    Qg, proj = quotient(G, B)
    PQ = PassiGroup(Qg, None, 2, budget)
    Ppi = P.induced([PQ.p(proj(g)) for g in range(len(G))], PQ.group)
    rep.add("relative sequence: p_2 i injective", p2iD.is_injective())
    _exact(rep, "relative sequence: at P_2", p2iD, Ppi)
    rep.add("relative sequence: P_2(pi) surjective", Ppi.is_surjective())
    rep.add("relative sequence: order bookkeeping", _alternating_ok([D.group.order, P.group.order, PQ.group.order]))

    rep.add("p_2 i c_2 = mu_2 l_2", p2iC @ c2 == mu @ l2)
    rep.extend(ring_commutator_identity(P))
    if B.is_trivial():
        I2 = ideal_power(G, 2, budget)
        j_image = AbSub(P.group, [P.rho_coords(v) for v in I2.basis])
        rep.add("Im mu_2 = j(I^2/I^3)", sub_equal(mu.image(), j_image))
    return rep


# ---------------------------------------------------------------------------
# battery


ZOO: dict[str, Callable[[], FiniteGroup]] = {
    "C2": lambda: builtin("cyclic", {"n": 2}),
    "C4": lambda: builtin("cyclic", {"n": 4}),
    "C2xC2": lambda: builtin("elementary", {"p": 2, "k": 2}),
    "C6": lambda: builtin("cyclic", {"n": 6}),
    "Q8": lambda: builtin("quaternion8"),
    "D4": lambda: builtin("dihedral", {"n": 4}),
    "S3": lambda: builtin("symmetric", {"n": 3}),
    "D8": lambda: builtin("dihedral", {"n": 8}),
    "Heis3": lambda: builtin("heisenberg", {"p": 3}),
}
DEFAULT_ZOO = tuple(ZOO)


@dataclass
class BatteryResult:
    reports: list[tuple[str, Report]] = field(default_factory=list)
    instances: int = 0
    timings: dict[str, float] = field(default_factory=dict)

    def counts(self) -> tuple[int, int, int]:
        p = f = s = 0
        for _, r in self.reports:
            a, b, c = r.counts()
            p, f, s = p + a, f + b, s + c
        return p, f, s

    @property
    def ok(self) -> bool:
        return all(r.ok for _, r in self.reports)

    def summary(self) -> str:
        p, f, s = self.counts()
        return f"checked {p + f + s} claims over {self.instances} instances: {p} pass / {f} fail / {s} skipped"


def _guarded(label: str, fn: Callable[[], Report]) -> Report:
    """Runs a check; cap violations become SKIPPED and library errors become a FAIL entry."""
    try:
        return fn()
    except CapExceeded as e:
        r = Report(label)
        r.skip(label, str(e))
        return r
    except QuadGroupError as e:
        r = Report(label)
        r.add(label, False, getattr(e, "witness", None), detail=str(e))
        return r


def _subgroup_label(B: Subgroup) -> str:
    return "{" + ",".join(str(b) for b in B.elements) + "}"


def run_battery(names: Sequence[str] = DEFAULT_ZOO, budget: int = DEFAULT_BUDGET,
                nilpotency_degree: int = 2, progress: Callable[[str], None] | None = None) -> BatteryResult:
    for n in names:
        if n not in ZOO:
            raise KeyError(n)
    res = BatteryResult()
    for name in names:
        t0 = time.perf_counter()
        G = ZOO[name]()
        Z = center(G)
        for B in subgroups_of_abelian(G, Z):
            tag = f"{name} B={_subgroup_label(B)}"
            res.instances += 1
            res.reports.append((tag, _guarded("Q^ab vs P_2", lambda: prop29_check(G, B, budget))))
            res.reports.append((tag, _guarded("exact sequences", lambda: thm210_check(G, B, budget))))
            res.reports.append((tag, _guarded("relative sequence", lambda: seq29_check(G, B, 2, budget))))
            res.reports.append((tag, _guarded("identity suite q",
                                              lambda: identity_suite(build_q(G, B, budget=budget).q, B, budget))))
            for n in (1, 2):
                res.reports.append((tag, _guarded(f"derivation n={n}",
                                                  lambda: derivation_check(passi_group(G, B, n, budget=budget)))))
        res.instances += 1
        res.reports.append((name, _guarded("nilpotency", lambda: nilpotency_battery(G, nilpotency_degree, budget))))
        sq = GroupFunction.power_map(G, 2)
        if quadratic_verdict(sq, None, budget).ok:
            res.reports.append((name, _guarded("identity suite 2_G", lambda: identity_suite(sq, None, budget))))
        res.timings[name] = time.perf_counter() - t0
        if progress:
            progress(f"{name}: {res.timings[name]:.1f}s")
    return res


def battery_json(res: BatteryResult, names: Sequence[str]) -> dict:
    p, f, s = res.counts()
    return {
        "schema": "quadgroup-report/1",
        "command": "verify",
        "zoo": list(names),
        "summary": {"claims": p + f + s, "instances": res.instances, "pass": p, "fail": f, "skipped": s},
        "reports": [{"instance": tag, **r.to_json()} for tag, r in res.reports],
    }
