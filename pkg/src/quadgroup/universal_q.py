"""The universal quadratic group ``Q(G, B)`` and quadratic maps on presented groups.

``Q(G, B)`` is the set ``(T (x) T) x G`` with ``T = G/BG'`` and law
``(x, a)(y, b) = (x + y - abar (x) bbar, ab)``. Element ``(x, a)`` has index
``x_index * |G| + a`` where ``x_index`` enumerates ``T (x) T``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .abelian import AbSub, TensorSquare, Vector
from .checks import DEFAULT_BUDGET, Report
from .errors import CapExceeded, CheckFailed, InvalidInput
from .groups import (ORDER_CAP, AbelianQuotient, FiniteGroup, GroupHom, Subgroup,
                     closure, derived_subgroup, fgab_to_group, hom_witness,
                     nilpotency_class)
from .quadmaps import GroupFunction, bilinear_part, quadratic_verdict, require_quadratic


class QGroup:
    """Materialized ``Q(G, B)`` with ``q``, ``w_q`` and the projection ``id^``."""

    def __init__(self, G: FiniteGroup, B: Subgroup | None = None, max_order: int = ORDER_CAP):
        B = B if B is not None else Subgroup.trivial(G)
        if B.parent is not G:
            raise InvalidInput("subgroup belongs to a different group")
        self.base, self.B = G, B
        self.BG = B.join(derived_subgroup(G))
        self.T = AbelianQuotient(G, Subgroup.whole(G), self.BG)
        self.tensor = TensorSquare(self.T.group)
        TT = self.tensor.group
        n, m = len(G), TT.order
        if m * n > max_order:
            raise CapExceeded(f"|Q(G,B)| = {m * n} exceeds cap {max_order}")
        self.TT = TT
        self.tt_view = fgab_to_group(TT, name="TxT")
        add = self.tt_view.group.table
        # cocycle index -(abar (x) bbar) for every pair of group elements
        Tels = list(self.T.group.elements())
        tt_of = np.zeros((len(Tels), len(Tels)), dtype=np.int64)
        for i, s in enumerate(Tels):
            for j, t in enumerate(Tels):
                tt_of[i, j] = TT.index(self.tensor.tens(s, t))
        self._tt_of_codes = tt_of
        codes = self.T.codes
        D = self.tt_view.group.inv[tt_of[codes[:, None], codes[None, :]]]
        N = m * n
        x = np.arange(N) // n
        a = np.arange(N) % n
        tx = add[add[x[:, None], x[None, :]], D[a[:, None], a[None, :]]]
        table = tx * n + G.table[a[:, None], a[None, :]]
        self.group = FiniteGroup(table, name=f"Q({G.name})" if B.is_trivial() else f"Q({G.name},B)")
        self.order = N
        self.q = GroupFunction(G, self.group, np.arange(n), "q")
        self.proj = GroupHom(self.group, G, a, verify=False)

    def element(self, x: Sequence[int], a: int) -> int:
        return self.TT.index(x) * len(self.base) + a

    def split(self, e: int) -> tuple[Vector, int]:
        n = len(self.base)
        return self.TT.element(e // n), e % n

    def w(self, x: Sequence[int]) -> int:
        """``w_q(x) = (x, 1)``."""
        return self.TT.index(x) * len(self.base)

    def tens_index(self, a: int, b: int) -> int:
        """Enumeration index in ``T (x) T`` of ``abar (x) bbar``."""
        return int(self._tt_of_codes[self.T.codes[a], self.T.codes[b]])

    @cached_property
    def w_image(self) -> Subgroup:
        n = len(self.base)
        return Subgroup(self.group, tuple(range(0, self.order, n)))

    def verify(self, budget: int = DEFAULT_BUDGET) -> Report:
        """Deviation of q, relative quadraticity and exactness of the central extension."""
        G, Q = self.base, self.group
        n = len(G)
        rep = Report(f"extension checks for {Q.name}")
        expect = np.array([[self.tens_index(a, b) * n for b in range(n)] for a in range(n)])
        dq = self.q.deviation
        rep.add("d_q(a,b) = (abar x bbar, 1)", np.array_equal(dq, expect), _first(dq != expect))
        v = quadratic_verdict(self.q, self.B, budget)
        rep.add("q quadratic relative B", v.ok, v.counterexample)
        W = self.w_image
        # w_q is a homomorphism: (x,1)(y,1) = (x+y,1)
        wx = np.arange(self.TT.order) * n
        add = self.tt_view.group.table
        hom = Q.table[wx[:, None], wx[None, :]] == add * n
        rep.add("w_q homomorphism", bool(hom.all()), _first(~hom))
        rep.add("w_q injective", len(set(wx.tolist())) == self.TT.order)
        rep.add("Im w_q central", W.is_central())
        kern = self.proj.kernel()
        rep.add("Ker id^ = Im w_q", kern == W)
        rep.add("id^ surjective", self.proj.is_surjective())
        hw = hom_witness(Q, G, self.proj.table)
        rep.add("id^ homomorphism", hw is None, hw)
        rep.add("id^ q = id_G", np.array_equal(self.proj.table[self.q.table], np.arange(n)))
        rep.info["order"] = self.order
        rep.info["associativity"] = Q.associativity
        return rep


def _first(mask):
    idx = np.argwhere(mask)
    return tuple(int(i) for i in idx[0]) if len(idx) else None


def build_q(G: FiniteGroup, B: Subgroup | None = None, max_order: int = ORDER_CAP,
            verify: bool = True, budget: int = DEFAULT_BUDGET) -> QGroup:
    Q = QGroup(G, B, max_order)
    if verify:
        rep = Q.verify(budget)
        if not rep.ok:
            raise CheckFailed("Q(G,B) construction failed its own checks", [c.name for c in rep.failures])
    return Q


# ---------------------------------------------------------------------------
# universal property


def factor_quadratic(f: GroupFunction, Q: QGroup, budget: int = DEFAULT_BUDGET) -> GroupHom:
    """The unique homomorphism ``f^ : Q(G,B) -> H`` with ``f^ q = f``; ``f^(x, a) = w_f(x) f(a)``."""
    G, H = Q.base, f.codomain
    if f.domain is not G:
        raise ValueError("f is not defined on the base group of Q")
    require_quadratic(f, Q.B, budget)
    bp = bilinear_part(f, Q.B, budget, quotient=Q.T)
    wH = np.array([bp.value(x) for x in Q.TT.elements()], dtype=np.int64)
    n = len(G)
    x = np.arange(Q.order) // n
    a = np.arange(Q.order) % n
    fhat = GroupHom(Q.group, H, H.table[wH[x], f.table[a]])
    if not np.array_equal(fhat.table[Q.q.table], f.table):
        raise CheckFailed("f^ q differs from f")
    X = list(G.generating_set)
    gens = [Q.q(x_) for x_ in X] + [Q.q.d(s, t) for s in X for t in X]
    if set(closure(Q.group, gens)) != set(range(Q.order)):
        raise CheckFailed("q(X) and d_q(X x X) do not generate Q")
    other = GroupHom.from_generators(Q.group, H, {g: int(fhat.table[g]) for g in dict.fromkeys(gens) if g})
    if other != fhat:
        raise CheckFailed("homomorphism determined on q(X) u d_q(X x X) differs from f^")
    return fhat


def q_of_hom(h: GroupHom, QG: QGroup | None = None, QH: QGroup | None = None,
             budget: int = DEFAULT_BUDGET) -> GroupHom:
    """``Q(h) = (q_H h)^ : Q(G) -> Q(H)``."""
    QG = QG or build_q(h.domain)
    QH = QH or build_q(h.codomain)
    if not (QG.B.is_trivial() and QH.B.is_trivial()):
        raise InvalidInput("functoriality is implemented for B = 1")
    f = GroupFunction(h.domain, QH.group, QH.q.table[h.table], "q_H h")
    return factor_quadratic(f, QG, budget)


def q_nilpotency(G: FiniteGroup, Q: QGroup | None = None) -> Report:
    Q = Q or build_q(G)
    cG = nilpotency_class(G)
    cQ = nilpotency_class(Q.group)
    rep = Report(f"nilpotency of {Q.group.name}")
    rep.info.update({"class_G": cG if cG is not None else "not nilpotent",
                     "class_Q": cQ if cQ is not None else "not nilpotent"})
    if cG is None:
        rep.skip("class(Q) <= max(class(G), 2)", "G is not nilpotent")
        return rep
    bound = max(cG, 2)
    rep.add("class(Q) <= max(class(G), 2)", cQ is not None and cQ <= bound, {"class_G": cG, "class_Q": cQ})
    if cG <= 1:
        rep.add("abelian G gives class(Q) <= 2", cQ is not None and cQ <= 2, {"class_Q": cQ})
    return rep


# ---------------------------------------------------------------------------
# right exactness


def seq18_check(alpha: GroupHom, beta: GroupHom, budget: int = DEFAULT_BUDGET) -> Report:
    """Exactness of ``Q`` on ``G1 -alpha-> G2 -beta-> G3 -> 1`` (B = 1 throughout).

    Reading: the source of ``xi`` is the direct product of ``Q(G1)``,
    ``G1ab (x) G2ab`` and ``G2ab (x) G1ab``; the summand ``alpha (x) alpha`` is
    ``alpha^ab (x) alpha^ab``.
    """
    G1, G2, G3 = alpha.domain, alpha.codomain, beta.codomain
    if beta.domain is not G2:
        raise ValueError("maps are not composable")
    if alpha.image() != beta.kernel():
        raise InvalidInput("Im(alpha) != Ker(beta)")
    if not beta.is_surjective():
        raise InvalidInput("beta is not surjective")
    Q1, Q2, Q3 = build_q(G1, budget=budget), build_q(G2, budget=budget), build_q(G3, budget=budget)
    Qa = q_of_hom(alpha, Q1, Q2, budget)
    Qb = q_of_hom(beta, Q2, Q3, budget)
    rep = Report(f"right exactness of Q on {G1.name} -> {G2.name} -> {G3.name}")
    rep.info["reading"] = ("xi source = Q(G1) x (G1ab (x) G2ab) x (G2ab (x) G1ab) as a direct product; "
                           "alpha (x) alpha = alpha^ab (x) alpha^ab")
    rep.add("Q(beta) surjective", Qb.is_surjective())
    T1, T2 = Q1.T, Q2.T
    a_ab = [T2(alpha(T1.lift(e))) for e in T1.group.gens()]     # alpha^ab on generators of G1ab
    TT2 = Q2.tensor
    left = [TT2.tens(x, t) for x in a_ab for t in T2.group.gens()]
    right = [TT2.tens(t, x) for x in a_ab for t in T2.group.gens()]
    both = [TT2.tens(x, y) for x in a_ab for y in a_ab]
    wsub = AbSub(Q2.TT, left + right)
    w_elems = [Q2.w(x) for x in wsub.elements()]
    Qa_img = np.unique(Qa.table)
    # w-parts are central, so Im(xi) is the product set of Im Q(alpha) and the w-subgroup
    img = np.unique(Q2.group.table[np.ix_(Qa_img, np.array(w_elems))])
    ker = Qb.kernel()
    img_set = Subgroup(Q2.group, tuple(int(x) for x in img))
    rep.add("exact at Q(G): Im(xi) = Ker Q(beta)", img_set == ker,
            None if img_set == ker else {"|Im xi|": len(img), "|Ker|": ker.order})
    gens19 = [Q2.q(alpha(g)) for g in range(len(G1))] + [Q2.w(x) for x in both + left + right]
    rhs19 = Subgroup.generated(Q2.group, gens19)
    rep.add("generators of Ker Q(beta): <Im(q alpha), Im(w_q(...))>", rhs19 == ker,
            None if rhs19 == ker else {"|rhs|": rhs19.order, "|Ker|": ker.order})
    return rep


# ---------------------------------------------------------------------------
# free groups


@dataclass(frozen=True)
class FreeWord:
    """A spelling ``x_{i_1}^{e_1} ... x_{i_n}^{e_n}`` over generators ``0..k-1``."""

    letters: tuple[tuple[int, int], ...]

    def __post_init__(self):
        lets = tuple((int(g), int(e)) for g, e in self.letters)
        for g, e in lets:
            if e not in (1, -1) or g < 0:
                raise InvalidInput("free word letters are (generator >= 0, +-1)", {"letter": (g, e)})
        object.__setattr__(self, "letters", lets)

    def __len__(self):
        return len(self.letters)

    def reduced(self) -> "FreeWord":
        out: list[tuple[int, int]] = []
        for g, e in self.letters:
            if out and out[-1] == (g, -e):
                out.pop()
            else:
                out.append((g, e))
        return FreeWord(tuple(out))

    def exponent_sums(self, k: int) -> list[int]:
        s = [0] * k
        for g, e in self.letters:
            s[g] += e
        return s

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(f"x{g}" if e == 1 else f"x{g}^-1" for g, e in self.letters)


def free_eval(w: FreeWord, k: int) -> tuple[tuple[int, ...], FreeWord]:
    """Tensor part of ``phi q_F(w)`` in ``Z^(k x k)`` (index ``i*k + j``) by the closed formula."""
    t = [0] * (k * k)
    L = w.letters
    for i, (x, e) in enumerate(L):
        if e == -1:
            t[x * k + x] += 1
        for y, f in L[i + 1:]:
            t[x * k + y] += e * f
    return tuple(t), w.reduced()


def free_fold(w: FreeWord, k: int) -> tuple[tuple[int, ...], FreeWord]:
    """Independent evaluation: fold letters with ``(t, u)(s, v) = (t + s + ubar (x) vbar, uv)``."""
    t = [0] * (k * k)
    ubar = [0] * k
    for x, e in w.letters:
        s = [0] * (k * k)
        if e == -1:
            s[x * k + x] = 1
        vbar = [0] * k
        vbar[x] = e
        for i in range(k):
            if ubar[i]:
                for j in range(k):
                    if vbar[j]:
                        s[i * k + j] += ubar[i] * vbar[j]
        t = [p + q for p, q in zip(t, s)]
        ubar[x] += e
    return tuple(t), w.reduced()


# ---------------------------------------------------------------------------
# presentations


@dataclass
class Presentation:
    generators: int
    relators: list[FreeWord]
    pi_group: FiniteGroup | None = None
    pi_images: list[int] | None = None

    def __post_init__(self):
        for r in self.relators:
            for g, _ in r.letters:
                if g >= self.generators:
                    raise InvalidInput("relator uses an undeclared generator", {"generator": g})
        if self.pi_group is not None:
            if self.pi_images is None or len(self.pi_images) != self.generators:
                raise InvalidInput("pi needs one image per generator")
            for i, r in enumerate(self.relators):
                if self.evaluate(r) != 0:
                    raise InvalidInput("relator does not map to 1 under pi", {"relator": i})

    def evaluate(self, w: FreeWord) -> int:
        G = self.pi_group
        x = 0
        for g, e in w.letters:
            y = self.pi_images[g]
            x = G.mul(x, y if e == 1 else G.inverse(y))
        return x


@dataclass
class GenPair:
    chi: list[int]
    psi: list[list[int]]


def _accumulate(H: FiniteGroup, w: FreeWord, gp: GenPair) -> int:
    """Evaluate the universal formula for ``w`` through ``(chi, psi)``, left to right."""
    x = 0
    L = w.letters
    for g, e in L:
        c = gp.chi[g]
        x = H.mul(x, c if e == 1 else H.inverse(c))
        if e == -1:
            x = H.mul(x, gp.psi[g][g])
    for i, (g, e) in enumerate(L):
        for h, f in L[i + 1:]:
            p = gp.psi[g][h]
            x = H.mul(x, p if e * f == 1 else H.inverse(p))
    return x


def presented_check(P: Presentation, H: FiniteGroup, gp: GenPair) -> Report:
    """Conditions for ``(chi, psi)`` to come from a quadratic map on ``<X | R>``.

    Besides the listed conditions, the values of ``psi`` must commute with each
    other: they land in ``D_f``, which is central in ``I_f`` and so abelian.
    """
    k = P.generators
    if len(gp.chi) != k or len(gp.psi) != k or any(len(r) != k for r in gp.psi):
        raise InvalidInput("chi must have k entries and psi must be k x k")
    for v in list(gp.chi) + [y for r in gp.psi for y in r]:
        if not 0 <= v < len(H):
            raise InvalidInput("generator-pair value out of range", {"value": v})
    rep = Report("presented quadratic map conditions")
    C = H.comm_table
    chi = list(gp.chi)
    psi = [(x, y) for x in range(k) for y in range(k)]
    w = next(((x, y) for x in range(k) for y in range(k) if C[chi[x], chi[y]]), None)
    rep.add("centrality [Im chi, Im chi] = 1", w is None, None if w is None else {"chi pair": w})
    w = next(((x, p) for x in range(k) for p in psi if C[chi[x], gp.psi[p[0]][p[1]]]), None)
    rep.add("centrality [Im chi, Im psi] = 1", w is None, None if w is None else {"chi": w[0], "psi": w[1]})
    w = next(((p, q) for p in psi for q in psi if C[gp.psi[p[0]][p[1]], gp.psi[q[0]][q[1]]]), None)
    rep.add("centrality [Im psi, Im psi] = 1", w is None, None if w is None else {"psi pair": w})
    bad2 = []
    for i, r in enumerate(P.relators):
        if _accumulate(H, r, gp) != 0:
            bad2.append(i)
    rep.add("relator sums vanish", not bad2, None if not bad2 else {"relators": bad2})
    bad3 = []
    for i, r in enumerate(P.relators):
        ks = r.exponent_sums(k)
        for y in range(k):
            lft = H.prod(H.power(gp.psi[x][y], ks[x]) for x in range(k))
            rgt = H.prod(H.power(gp.psi[y][x], ks[x]) for x in range(k))
            if lft != 0 or rgt != 0:
                bad3.append((i, y))
    rep.add("exponent-sum pairings vanish", not bad3, None if not bad3 else {"(relator, y)": bad3})
    rep.info["verdict"] = "ACCEPT" if rep.ok else "REJECT"
    return rep


def presented_build(P: Presentation, H: FiniteGroup, gp: GenPair,
                    budget: int = DEFAULT_BUDGET) -> tuple[GroupFunction, Report]:
    """Build ``f : G -> H`` from an accepted pair and certify it exhaustively."""
    if P.pi_group is None:
        raise InvalidInput("presented_build needs pi")
    G = P.pi_group
    rep = presented_check(P, H, gp)
    if not rep.ok:
        raise InvalidInput("generator pair rejected", [c.name for c in rep.failures])
    imgs = list(P.pi_images)
    if set(closure(G, imgs)) != set(range(len(G))):
        raise InvalidInput("pi is not surjective")
    words = G.words(imgs)
    table = np.zeros(len(G), dtype=np.int64)
    for g, wd in words.items():
        table[g] = _accumulate(H, FreeWord(wd), gp)
    f = GroupFunction(G, H, table, "f")
    ok20 = all(f(imgs[x]) == gp.chi[x] for x in range(P.generators)) and all(
        f.d(imgs[x], imgs[y]) == gp.psi[x][y] for x in range(P.generators) for y in range(P.generators))
    v = quadratic_verdict(f, None, budget)
    if not (ok20 and v.is_quadratic):
        raise InvalidInput("constructed table is not a well-defined quadratic map; the relators do not "
                           "normally generate Ker(pi)",
                           {"matches_generators": ok20, "counterexample": v.counterexample})
    rep.add("extension f pi(x) = chi(x), d_f(pi x, pi y) = psi(x, y)", ok20)
    rep.add("constructed map quadratic", v.is_quadratic, v.counterexample)
    return f, rep


def agree_by_generators(f: GroupFunction, g: GroupFunction, X: Sequence[int]) -> bool:
    """Equality test for quadratic maps from values on ``X`` and deviations on ``X x X``."""
    return all(f(x) == g(x) for x in X) and all(f.d(x, y) == g.d(x, y) for x in X for y in X)
