"""Deviation calculus for functions between finite groups.

Notation. The additive formulas for a target group H are read with
``x + y = x*y`` and ``-x = x^-1``, keeping the written order. So the
deviation is ``d_f(a, b) = f(ab) f(b)^-1 f(a)^-1``, commutators are
``[x, y] = x y x^-1 y^-1`` and ``^x y = x y x^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as iproduct
from typing import Sequence

import numpy as np

from .abelian import AbMap, TensorSquare
from .checks import DEFAULT_BUDGET, Report
from .errors import CapExceeded, CheckFailed, InvalidInput
from .groups import (AbelianQuotient, FiniteGroup, GroupHom, Subgroup, derived_subgroup, direct_power,
                     nilpotency_class, ORDER_CAP)


class GroupFunction:
    """A total map between finite groups given by its value table."""

    def __init__(self, domain: FiniteGroup, codomain: FiniteGroup, table, name: str = "f"):
        t = np.asarray(table, dtype=np.int64)
        if t.shape != (len(domain),):
            raise InvalidInput(f"map table has length {t.shape[0] if t.ndim else 0}, expected {len(domain)}")
        if len(t) and (t.min() < 0 or t.max() >= len(codomain)):
            bad = int(np.argmax((t < 0) | (t >= len(codomain))))
            raise InvalidInput("map value out of range", {"element": bad})
        self.domain, self.codomain, self.table, self.name = domain, codomain, t, name

    def __call__(self, a: int) -> int:
        return int(self.table[a])

    def __repr__(self) -> str:
        return f"GroupFunction({self.name}: {self.domain.name} -> {self.codomain.name})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupFunction):
            return NotImplemented
        return (self.domain is other.domain and self.codomain is other.codomain
                and np.array_equal(self.table, other.table))

    __hash__ = None

    @classmethod
    def from_hom(cls, h: GroupHom, name: str = "h") -> "GroupFunction":
        return cls(h.domain, h.codomain, h.table, name)

    @classmethod
    def power_map(cls, G: FiniteGroup, k: int) -> "GroupFunction":
        """``a -> a^k`` (``2_G`` for k = 2)."""
        t = np.zeros(len(G), dtype=np.int64)
        for _ in range(k):
            t = G.table[t, np.arange(len(G))]
        return cls(G, G, t, f"{k}_G")

    @classmethod
    def identity(cls, G: FiniteGroup) -> "GroupFunction":
        return cls(G, G, np.arange(len(G)), "id")

    @classmethod
    def trivial(cls, G: FiniteGroup, H: FiniteGroup) -> "GroupFunction":
        return cls(G, H, np.zeros(len(G), dtype=np.int64), "0")

    @cached_property
    def deviation(self) -> np.ndarray:
        """``D[a, b] = f(ab) f(b)^-1 f(a)^-1``."""
        H = self.codomain
        F = self.table
        Finv = H.inv[F]
        X = F[self.domain.table]
        return H.table[H.table[X, Finv[None, :]], Finv[:, None]]

    def d(self, a: int, b: int) -> int:
        return int(self.deviation[a, b])

    def inverse(self) -> "GroupFunction":
        """Pointwise inverse ``-f : x -> f(x)^-1``."""
        return GroupFunction(self.domain, self.codomain, self.codomain.inv[self.table], f"-{self.name}")

    def pointwise(self, other: "GroupFunction") -> "GroupFunction":
        """``f + g : x -> f(x) g(x)``."""
        if other.domain is not self.domain or other.codomain is not self.codomain:
            raise ValueError("pointwise product needs equal domain and codomain")
        return GroupFunction(self.domain, self.codomain, self.codomain.table[self.table, other.table],
                             f"({self.name}+{other.name})")

    def after(self, other: "GroupFunction") -> "GroupFunction":
        """``self o other``."""
        if other.codomain is not self.domain:
            raise ValueError("functions are not composable")
        return GroupFunction(other.domain, self.codomain, self.table[other.table], f"{self.name}.{other.name}")

    def is_linear(self) -> bool:
        return bool((self.deviation == 0).all())

    def as_hom(self) -> GroupHom:
        return GroupHom(self.domain, self.codomain, self.table)

    @cached_property
    def image_subgroup(self) -> Subgroup:
        """``I_f``."""
        return Subgroup.generated(self.codomain, np.unique(self.table).tolist())

    @cached_property
    def deviation_subgroup(self) -> Subgroup:
        """``D_f``."""
        return Subgroup.generated(self.codomain, np.unique(self.deviation).tolist())


def deviation(f: GroupFunction, a: int, b: int) -> int:
    return f.d(a, b)


def _first(mask: np.ndarray):
    idx = np.argwhere(mask)
    return tuple(int(i) for i in idx[0]) if len(idx) else None


# ---------------------------------------------------------------------------
# quadraticity

LAWS = ("bilinear-left", "bilinear-right", "central", "relative")


@dataclass
class QuadVerdict:
    function: GroupFunction
    relative: Subgroup
    is_linear: bool
    laws: dict                      # law -> least witness or None
    I_f: Subgroup
    D_f: Subgroup
    certificate: str = "generators"

    @property
    def is_quadratic(self) -> bool:
        return all(self.laws[k] is None for k in LAWS[:3])

    @property
    def relative_ok(self) -> bool:
        return self.laws["relative"] is None

    @property
    def ok(self) -> bool:
        return self.is_quadratic and self.relative_ok

    @property
    def counterexample(self):
        for k in LAWS:
            if self.laws[k] is not None:
                return k, self.laws[k]
        return None

    def to_json(self) -> dict:
        ce = self.counterexample
        return {
            "linear": self.is_linear,
            "quadratic": self.is_quadratic,
            "relative_subgroup": list(self.relative.elements),
            "relative_ok": self.relative_ok,
            "counterexample": None if ce is None else {"law": ce[0], "witness": list(ce[1])},
            "I_f_order": self.I_f.order,
            "D_f_order": self.D_f.order,
        }


def replay(f: GroupFunction, law: str, w: Sequence[int], B: Subgroup | None = None) -> bool:
    """True iff ``w`` really violates ``law`` for ``f``."""
    G, H = f.domain, f.codomain
    d = f.d
    if law == "bilinear-left":
        a, a2, b = w
        return d(G.mul(a, a2), b) != H.mul(d(a, b), d(a2, b))
    if law == "bilinear-right":
        a, b, b2 = w
        return d(a, G.mul(b, b2)) != H.mul(d(a, b), d(a, b2))
    if law == "central":
        a, b, c = w
        return H.comm(d(a, b), f(c)) != 0
    if law == "relative":
        a, b = w
        inB = B is not None and (a in B or b in B)
        return inB and d(a, b) != 0
    if law == "linear":
        a, b = w
        return d(a, b) != 0
    raise KeyError(law)


def quadratic_verdict(f: GroupFunction, B: Subgroup | None = None, budget: int = DEFAULT_BUDGET) -> QuadVerdict:
    """Decide whether ``f`` is quadratic (relative ``B``), with least witnesses.

    Bilinearity in each slot is certified by checking ``d(xg, b) = d(x, b) d(g, b)``
    for all ``x, b`` and every ``g`` in a generating set, which already forces
    ``d(-, b)`` to be a homomorphism. When that certificate fails, the
    lexicographically least full triple is located by a direct scan.
    """
    G, H = f.domain, f.codomain
    B = B if B is not None else Subgroup.trivial(G)
    if B.parent is not G:
        raise InvalidInput("relative subgroup lives in a different group")
    n = len(G)
    gens = G.generating_set
    if n * n * max(1, len(gens)) > budget:
        raise CapExceeded(f"quadraticity scan needs {n * n * max(1, len(gens))} steps, budget {budget}")
    D = f.deviation
    T, HT = G.table, H.table
    linear = bool((D == 0).all())
    laws: dict = {k: None for k in LAWS}
    if not linear:
        laws["linear"] = _first(D != 0)
        for g in gens:
            if not np.array_equal(D[T[:, g], :], HT[D, D[g][None, :]]):
                laws["bilinear-left"] = _scan_left(D, T, HT)
                break
        for g in gens:
            if not np.array_equal(D[:, T[:, g]], HT[D, D[:, g][:, None]]):
                laws["bilinear-right"] = _scan_right(D, T, HT)
                break
        dv = np.unique(D)
        fv = np.unique(f.table)
        bad = H.comm_table[np.ix_(dv, fv)] != 0
        if bad.any():
            bad_d = np.zeros(len(H), dtype=bool)
            bad_d[dv[bad.any(axis=1)]] = True
            a, b = _first(bad_d[D])
            c = int(np.argmax(H.comm_table[D[a, b]][f.table] != 0))
            laws["central"] = (a, b, c)
        m = B.mask
        laws["relative"] = _first((m[:, None] | m[None, :]) & (D != 0))
    else:
        laws["linear"] = None
    return QuadVerdict(f, B, linear, laws, f.image_subgroup, f.deviation_subgroup)


def _scan_left(D, T, HT):
    for a in range(len(T)):
        bad = D[T[a], :] != HT[D[a][None, :], D]
        if bad.any():
            a2, b = _first(bad)
            return a, a2, b
    raise CheckFailed("bilinearity certificate failed but no witness found")


def _scan_right(D, T, HT):
    for a in range(len(T)):
        bad = D[a][T] != HT[D[a][:, None], D[a][None, :]]
        if bad.any():
            b, b2 = _first(bad)
            return a, b, b2
    raise CheckFailed("bilinearity certificate failed but no witness found")


def require_quadratic(f: GroupFunction, B: Subgroup | None = None, budget: int = DEFAULT_BUDGET) -> QuadVerdict:
    v = quadratic_verdict(f, B, budget)
    if not v.ok:
        law, w = v.counterexample
        raise InvalidInput(f"{f.name} is not quadratic relative the given subgroup ({law} fails)",
                           {"law": law, "witness": list(w)})
    return v


def radical(f: GroupFunction, budget: int = DEFAULT_BUDGET) -> Subgroup:
    """``rad(f)``: all ``a`` with ``d(a, -) = d(-, a) = 1``."""
    require_quadratic(f, None, budget)
    D = f.deviation
    G = f.domain
    els = np.nonzero((D == 0).all(axis=1) & (D == 0).all(axis=0))[0]
    rad = Subgroup(G, tuple(int(x) for x in els))
    if not derived_subgroup(G) <= rad:
        raise CheckFailed("derived subgroup not contained in the radical")
    if Subgroup.generated(G, rad.elements) != rad:
        raise CheckFailed("radical is not a subgroup")
    if not quadratic_verdict(f, rad, budget).ok:
        raise CheckFailed("f is not quadratic relative its radical")
    # any larger subgroup contains some x outside rad, and x witnesses non-vanishing
    return rad


# ---------------------------------------------------------------------------
# bilinear part


@dataclass
class BilinearPart:
    """``w_f : T (x) T -> D_f`` with ``T = G/BG'``; values are FgAb vectors of ``D_f``."""

    function: GroupFunction
    relative: Subgroup
    quotient: AbelianQuotient        # G -> T
    tensor: TensorSquare
    target: AbelianQuotient          # D_f as an FgAb inside H
    map: AbMap

    def value(self, x: Sequence[int]) -> int:
        """H-element ``w_f(x)`` for a tensor-square element ``x``."""
        return self.target.lift(self.map(x))

    def on_pair(self, a: int, b: int) -> int:
        T = self.quotient
        return self.value(self.tensor.tens(T(a), T(b)))

    @cached_property
    def value_table(self) -> np.ndarray:
        """H-element of ``w_f(s (x) t)`` indexed by enumeration codes of ``s, t`` in T."""
        Tg = self.quotient.group
        m = Tg.order
        W = np.zeros((m, m), dtype=np.int64)
        els = list(Tg.elements())
        for i, s in enumerate(els):
            for j, t in enumerate(els):
                W[i, j] = self.value(self.tensor.tens(s, t))
        return W


def bilinear_part(f: GroupFunction, B: Subgroup | None = None, budget: int = DEFAULT_BUDGET,
                  quotient: AbelianQuotient | None = None) -> BilinearPart:
    G, H = f.domain, f.codomain
    B = B if B is not None else Subgroup.trivial(G)
    require_quadratic(f, B, budget)
    BG = B.join(derived_subgroup(G))
    T = quotient or AbelianQuotient(G, Subgroup.whole(G), BG)
    D = f.deviation
    reps = T._lift[T.codes]
    bad = D[reps[:, None], reps[None, :]] != D
    if bad.any():
        raise CheckFailed("deviation is not constant on cosets of BG'", {"pair": _first(bad)})
    Dq = AbelianQuotient(H, f.deviation_subgroup, Subgroup.trivial(H))
    TT = TensorSquare(T.group)
    lifts = T.generator_lifts()
    w = TT.induced_map(lambda i, j: Dq(int(D[lifts[i], lifts[j]])), Dq.group)
    bp = BilinearPart(f, B, T, TT, Dq, w)
    W = bp.value_table
    bad = W[T.codes[:, None], T.codes[None, :]] != D
    if bad.any():
        raise CheckFailed("w_f does not reproduce the deviation", {"pair": _first(bad)})
    return bp


# ---------------------------------------------------------------------------
# identities


def identity_suite(f: GroupFunction, B: Subgroup | None = None, budget: int = DEFAULT_BUDGET) -> Report:
    """Exhaustive check of the standard identities of a quadratic map.

    The inverse-map identity is checked literally with ``[a,b] = aba^-1b^-1``; this holds when
    ``f[a^-1,b^-1] = f[a,b]``, e.g. in class <= 2, but not for every quadratic
    map. A second check reads the same formula read with ``[a,b] = a^-1b^-1ab``, which
    holds for every quadratic map.
    """
    G, H = f.domain, f.codomain
    B = B if B is not None else Subgroup.trivial(G)
    require_quadratic(f, B, budget)
    n = len(G)
    GT, HT, Gi, Hi = G.table, H.table, G.inv, H.inv
    F, D = f.table, f.deviation
    a = np.arange(n)[:, None]
    b = np.arange(n)[None, :]
    Fa, Fb = F[a], F[b]
    fab = F[GT[a, b]]
    rep = Report(f"identity suite for {f.name}: {G.name} -> {H.name}")

    def add(name, lhs, rhs):
        rep.add(name, np.array_equal(lhs, rhs), _first(lhs != rhs))

    rep.add("f(1) = 1", F[0] == 0, (0,))
    Bel = np.array(B.elements)
    sub = F[GT[np.ix_(Bel, Bel)]] != HT[F[Bel][:, None], F[Bel][None, :]]
    rep.add("f restricted to B linear", not sub.any(),
            None if not sub.any() else tuple(int(Bel[i]) for i in _first(sub)))
    add("product rule f(ab) = d(a,b) f(a) f(b)", fab, HT[HT[D, Fa], Fb])
    add("product rule f(ab) = f(a) f(b) d(a,b)", fab, HT[HT[Fa, Fb], D])
    add("deviation d(a,b) = f(a)^-1 f(ab) f(b)^-1", D, HT[HT[Hi[Fa], fab], Hi[Fb]])
    lhs7 = F[Gi]
    rhs7 = HT[Hi[F], D[np.arange(n), np.arange(n)]]
    rep.add("inverse f(a^-1) = f(a)^-1 d(a,a)", np.array_equal(lhs7, rhs7), _first(lhs7 != rhs7))
    abi = GT[a, Gi[b]]
    add("right quotient f(ab^-1) = f(a) f(b)^-1 d(ab^-1,b)^-1", F[abi], HT[HT[Fa, Hi[Fb]], Hi[D[abi, b]]])
    comm = G.comm_table
    skew = HT[D, Hi[D.T]]
    add("commutator f[a,b] = [f(a),f(b)] d(a,b) d(b,a)^-1", F[comm], HT[H.comm_table[Fa, Fb], skew])
    conj = GT[GT[a, b], Gi[a]]
    hconj = HT[HT[Fa, Fb], Hi[Fa]]
    add("conjugate f(^a b) = ^f(a) f(b) d(a,b) d(b,a)^-1", F[conj], HT[hconj, skew])
    Dm = f.inverse().deviation
    add("inverse map d_-f(a,b) = d(b,a)^-1 f[a,b]^-1", Dm, HT[Hi[D.T], Hi[F[comm]]])
    comm_alt = comm[Gi][:, Gi]      # a^-1 b^-1 a b
    add("inverse map, swapped commutator, d_-f(a,b) = d(b,a)^-1 f(a^-1b^-1ab)^-1", Dm, HT[Hi[D.T], Hi[F[comm_alt]]])
    return rep


# ---------------------------------------------------------------------------
# composition


def pair_compose(g: GroupFunction, A: Subgroup, f: GroupFunction, B: Subgroup,
                 budget: int = DEFAULT_BUDGET) -> tuple[GroupFunction, Report]:
    """Compose a quadratic pair ``K -g-> G -f-> H`` and verify the derivation property."""
    K, G, H = g.domain, g.codomain, f.codomain
    if f.domain is not G:
        raise ValueError("functions are not composable")
    require_quadratic(g, A, budget)
    require_quadratic(f, B, budget)
    gA = g.table[list(A.elements)]
    if not B.mask[gA].all():
        a = int(np.array(A.elements)[np.argmin(B.mask[gA])])
        raise InvalidInput("not a quadratic pair: g(A) is not inside B", {"element": a})
    Dg = np.array(g.deviation_subgroup.elements)
    Df = f.deviation
    left = Df[Dg, :] != 0
    if left.any():
        i, x = _first(left)
        raise InvalidInput("not a quadratic pair: d_f(D_g x G) != 1", {"pair": (int(Dg[i]), x)})
    right = Df[:, Dg] != 0
    if right.any():
        x, i = _first(right)
        raise InvalidInput("not a quadratic pair: d_f(G x D_g) != 1", {"pair": (x, int(Dg[i]))})
    fg = f.after(g)
    rep = Report(f"quadratic pair {f.name} o {g.name}: {K.name} -> {G.name} -> {H.name}")
    v = quadratic_verdict(fg, A, budget)
    rep.add("composite quadratic relative A", v.ok, v.counterexample)
    Dgt = g.deviation
    rhs = H.table[f.table[Dgt], Df[g.table[:, None], g.table[None, :]]]
    lhs = fg.deviation
    rep.add("composite deviation d_fg = f_* d_g + (g x g)^* d_f", np.array_equal(lhs, rhs), _first(lhs != rhs))
    BG = B.join(derived_subgroup(G))
    if not (g.deviation_subgroup <= BG):
        rep.skip("composite bilinear part w_fg = f_* w_g + (gbar x gbar)^* w_f", "D_g is not inside BG'")
    elif not v.ok:
        rep.add("composite bilinear part w_fg = f_* w_g + (gbar x gbar)^* w_f", False, v.counterexample,
                "composite is not quadratic relative A")
    else:
        ok, wit = _check_13(g, A, f, B, fg, budget)
        rep.add("composite bilinear part w_fg = f_* w_g + (gbar x gbar)^* w_f", ok, wit, "on tensor generators")
    return fg, rep


def _check_13(g, A, f, B, fg, budget):
    K, H = g.domain, f.codomain
    wfg = bilinear_part(fg, A, budget)
    wg = bilinear_part(g, A, budget, quotient=wfg.quotient)
    wf = bilinear_part(f, B, budget)
    TK, TG = wfg.quotient, wf.quotient
    lifts = TK.generator_lifts()
    gbar = AbMap(TK.group, TG.group, tuple(TG(g(x)) for x in lifts))
    for x in range(len(K)):
        if gbar(TK(x)) != TG(g(x)):
            raise CheckFailed("g does not induce a homomorphism on G/BG'", {"element": x})
    TT = wfg.tensor
    n = TK.group.ngens
    for i in range(n):
        for j in range(n):
            sym = TT.symbol(i, j)
            lhs = wfg.value(sym)
            s, t = gbar(TK.group.gens()[i]), gbar(TK.group.gens()[j])
            rhs = H.mul(f(wg.value(sym)), wf.value(wf.tensor.tens(s, t)))
            if lhs != rhs:
                return False, (i, j)
    return True, None


def sum_check(f: GroupFunction, g: GroupFunction, budget: int = DEFAULT_BUDGET) -> Report:
    """Deviation of the pointwise product ``f + g`` when ``(2_H, f), (2_H, g)`` are quadratic pairs."""
    H = f.codomain
    two = GroupFunction.power_map(H, 2)
    v2 = quadratic_verdict(two, None, budget)
    if not v2.is_quadratic:
        raise InvalidInput("2_H is not quadratic (H is not 2-step nilpotent)",
                           {"law": v2.counterexample[0], "witness": list(v2.counterexample[1])})
    D2 = two.deviation
    for h, nm in ((f, "f"), (g, "g")):
        vh = quadratic_verdict(h, None, budget)
        if not vh.is_quadratic:
            raise InvalidInput(f"{nm} is not quadratic", {"law": vh.counterexample[0],
                                                          "witness": list(vh.counterexample[1])})
        Dh = np.array(h.deviation_subgroup.elements)
        bad = (D2[Dh, :] != 0) | (D2[:, Dh] != 0).T
        if bad.any():
            i, y = _first(bad)
            raise InvalidInput(f"(2_H, {nm}) is not a quadratic pair", {"element": int(Dh[i]), "other": y})
    rep = Report(f"sum formula for {f.name} + {g.name}")
    for h, nm in ((f, "f"), (g, "g")):
        Dh = h.deviation_subgroup
        rep.add(f"D_{nm} central in H", Dh.is_central(),
                next((x for x in Dh.elements if H.comm_table[x].any()), None))
    s = f.pointwise(g)
    F, Gt = f.table, g.table
    cm = H.comm_table[F[None, :], Gt[:, None]]          # [f(b), g(a)] at (a, b)
    rhs = H.table[H.table[f.deviation, g.deviation], cm]
    rep.add("d_(f+g)(a,b) = d_f d_g [f(b),g(a)]", np.array_equal(s.deviation, rhs),
            _first(s.deviation != rhs))
    alt = D2[Gt[:, None], F[None, :]]
    rep.add("[f(b),g(a)] = d_2H(g(a), f(b))", np.array_equal(alt, cm), _first(alt != cm))
    return rep


# ---------------------------------------------------------------------------
# 2-step nilpotency battery


def _shuffle_scan(G: FiniteGroup, n: int):
    """Exhaustive check of the shuffling identities on ``G^n x G^n`` without building ``G^n``.

    The first ``n-1`` coordinates of ``a`` and ``b`` form a vectorized grid;
    the last pair ``(a_n, b_n)`` is looped over.
    """
    m = len(G)
    dt = np.int16 if m * m < 2**15 else np.int64
    T = G.table.astype(dt)
    Tf = T.ravel().astype(np.int64)
    inv, C = G.inv.astype(dt), G.comm_table.astype(dt)

    def mul(x, y):
        return Tf[x.astype(np.int64) * m + y]

    k = n - 1
    M = m ** (2 * k)
    idx = np.arange(M, dtype=np.int64)
    # grid index -> (a_1, b_1, ..., a_k, b_k), a_1 slowest
    coord = [((idx // m ** (2 * k - 1 - t)) % m).astype(dt) for t in range(2 * k)]
    a = coord[0::2]
    b = coord[1::2]
    X = np.zeros(M, dtype=dt)
    A = np.zeros(M, dtype=dt)
    Bp = np.zeros(M, dtype=dt)
    comm = np.zeros(M, dtype=dt)
    for i in range(k):
        X = mul(X, T[a[i], b[i]])
        A = mul(A, a[i])
        Bp = mul(Bp, b[i])
    for i in range(k):
        for j in range(i + 1, k):
            comm = mul(comm, C[b[i], a[j]])
    for an in range(m):
        Ccol = C[:, an]
        cfull = comm
        for i in range(k):
            cfull = mul(cfull, Ccol[b[i]])
        Afull = T[:, an][A]
        for bn in range(m):
            lhs = T[:, T[an, bn]][X]                       # a_1 b_1 ... a_n b_n
            Bfull = T[:, bn][Bp]
            rhs5 = mul(mul(cfull, Afull), Bfull)
            dev = mul(mul(lhs, inv[Bfull]), inv[Afull])    # d_mu(a, b)
            bad5 = lhs != rhs5
            bad6 = dev != cfull
            if bad5.any() or bad6.any():
                which = "expansion" if bad5.any() else "deviation"
                r = int(np.argmax(bad5 if bad5.any() else bad6))
                a_t = [int(x[r]) for x in a] + [an]
                b_t = [int(x[r]) for x in b] + [bn]
                return which, (a_t, b_t)
    return None


def nilpotency_battery(G: FiniteGroup, n: int, budget: int = DEFAULT_BUDGET) -> Report:
    """The 2-step nilpotency equivalences for ``G`` and multiplication arity ``n``."""
    if not 2 <= n <= 4:
        raise InvalidInput("nilpotency battery needs 2 <= n <= 4")
    rep = Report(f"2-step nilpotency battery for {G.name}, n = {n}")
    cls = nilpotency_class(G)
    p1 = cls is not None and cls <= 2
    rep.info["class"] = cls if cls is not None else "not nilpotent"
    MU, LIN, TWO, POW = ("mu_{n-1} on G^n quadratic", "products of linear maps quadratic",
                         "2_G quadratic", "n_G quadratic")
    props: dict[str, bool | None] = {}

    def record(key, v: QuadVerdict | None, witness=None):
        props[key] = None if v is None else v.is_quadratic
        if v is not None and not v.is_quadratic:
            law, w = v.counterexample
            witness = {"law": law, "witness": list(w)} if witness is None else witness
        rep.info[key] = {"holds": props[key], "witness": witness}

    # multiplication map on G^n
    N = len(G) ** n
    if N > ORDER_CAP:
        record(MU, None, f"|G^n| = {N} exceeds the order cap")
    else:
        Gn = direct_power(G, n)
        m = len(G)
        idx = np.arange(N)
        # direct_power indexes (g_1, ..., g_n) as g_1 m^(n-1) + ... + g_n
        mu = np.zeros(N, dtype=np.int64)
        for k in range(n):
            mu = G.table[mu, (idx // m ** (n - 1 - k)) % m]
        record(MU, quadratic_verdict(GroupFunction(Gn, G, mu, "mu"), None, budget))

    # products of linear maps, with K = G and factors from {trivial, id, inner automorphisms by generators}
    cands = [np.zeros(len(G), dtype=np.int64), np.arange(len(G))]
    for x in G.generating_set:
        cands.append(G.table[G.table[x], G.inv[x]])
    worst = None
    for choice in iproduct(range(len(cands)), repeat=n):
        t = np.zeros(len(G), dtype=np.int64)
        for c in choice:
            t = G.table[t, cands[c]]
        v = quadratic_verdict(GroupFunction(G, G, t), None, budget)
        if not v.is_quadratic:
            worst = (choice, v)
            break
    if worst is None:
        props[LIN] = True
        rep.info[LIN] = {"holds": True, "witness": None}
    else:
        record(LIN, worst[1], {"factors": list(worst[0]), "law": worst[1].counterexample[0],
                               "witness": list(worst[1].counterexample[1])})
    record(TWO, quadratic_verdict(GroupFunction.power_map(G, 2), None, budget))
    record(POW, quadratic_verdict(GroupFunction.power_map(G, n), None, budget))

    for k in (MU, LIN, TWO):
        if props[k] is None:
            rep.skip(f"class <= 2 <=> {k}", rep.info[k]["witness"])
        else:
            rep.add(f"class <= 2 <=> {k}", props[k] == p1,
                    {"class<=2": p1, k: props[k], "detail": rep.info[k]["witness"]})
    rep.add(f"class <= 2 => {n}_G quadratic", (not p1) or bool(props[POW]), rep.info[POW]["witness"])
    if p1:
        pairs = len(G) ** (2 * n)
        if pairs > budget:
            rep.skip("shuffling identities on G^n", f"{pairs} pairs exceed budget {budget}")
        else:
            bad = _shuffle_scan(G, n)
            rep.add("shuffling identities on G^n", bad is None, bad, f"{pairs} pairs")
    return rep
