"""Integral group rings, augmentation-ideal filtrations and the groups ``P_n(G, B)``.

A ring element of ``Z(G)`` is an integer vector of length ``|G|``. The
augmentation ideal ``I(G)`` has the Z-basis ``g - 1`` (``g != 1``); its
coordinates are the entries ``1..|G|-1`` of a coefficient vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product as iproduct
from typing import Sequence

import numpy as np

from .abelian import AbMap, AbSub, Cokernel, FgAb, Lattice, TensorSquare, Vector, present
from .checks import DEFAULT_BUDGET, Report
from .errors import CapExceeded, CheckFailed, InvalidInput
from .groups import (AbelianQuotient, FiniteGroup, Subgroup, derived_subgroup, gamma, quotient)

MAX_DEGREE = 3


# ---------------------------------------------------------------------------
# ring arithmetic


def ring_mul(G: FiniteGroup, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Convolution product in ``Z(G)``."""
    out = np.zeros(len(G), dtype=object)
    xs = np.nonzero(x)[0]
    ys = np.nonzero(y)[0]
    for i in xs:
        row = G.table[i]
        for j in ys:
            out[row[j]] += int(x[i]) * int(y[j])
    return out


def elt(G: FiniteGroup, g: int, coeff: int = 1) -> np.ndarray:
    v = np.zeros(len(G), dtype=object)
    v[g] = coeff
    return v


def aug(G: FiniteGroup, g: int) -> np.ndarray:
    """``g - 1``."""
    v = np.zeros(len(G), dtype=object)
    v[g] += 1
    v[0] -= 1
    return v


def ring_prod(G: FiniteGroup, factors: Sequence[np.ndarray]) -> np.ndarray:
    out = elt(G, 0)
    for f in factors:
        out = ring_mul(G, out, f)
    return out


def coords(v: np.ndarray) -> list[int]:
    """I(G)-coordinates of an augmentation-zero ring element."""
    if sum(int(c) for c in v) != 0:
        raise ValueError("ring element is not in the augmentation ideal")
    return [int(c) for c in v[1:]]


def _right_mul_matrix(G: FiniteGroup, a: int) -> np.ndarray:
    """Matrix of ``x -> x (a - 1)`` on I(G)-coordinates (rows are images of ``g - 1``)."""
    n = len(G)
    M = np.zeros((n - 1, n - 1), dtype=np.int64)
    for g in range(1, n):
        # (g - 1)(a - 1) = ga - g - a + 1 = (ga - 1) - (g - 1) - (a - 1)
        ga = G.mul(g, a)
        if ga:
            M[g - 1, ga - 1] += 1
        M[g - 1, g - 1] -= 1
        if a:
            M[g - 1, a - 1] -= 1
    return M


# ---------------------------------------------------------------------------
# ideals


@dataclass
class IdealLattice:
    """A Z-submodule of I(G), given by a lattice in I(G)-coordinates."""

    group: FiniteGroup
    lattice: Lattice
    label: str

    @property
    def basis(self) -> list[Vector]:
        return self.lattice.basis

    def __contains__(self, v) -> bool:
        return tuple(int(c) for c in v) in self.lattice

    def contains_ring(self, x: np.ndarray) -> bool:
        return tuple(coords(x)) in self.lattice

    def sum(self, other: "IdealLattice", label: str | None = None) -> "IdealLattice":
        lat = Lattice(self.lattice.dim, list(self.basis) + list(other.basis))
        return IdealLattice(self.group, lat, label or f"{self.label} + {other.label}")


def ideal_power(G: FiniteGroup, k: int, budget: int = DEFAULT_BUDGET) -> IdealLattice:
    """``I^k(G)``, spanned by ``basis(I^(k-1)) * (a - 1)`` over all ``a``."""
    if k < 1:
        raise InvalidInput("ideal_power needs k >= 1")
    n = len(G)
    if k > 1 and n ** 3 * (k - 1) > budget * 10:
        raise CapExceeded(f"I^{k}({G.name}) exceeds budget")
    cache = G.__dict__.setdefault("_ideal_powers", {})
    if k in cache:
        return cache[k]
    if k == 1 or n == 1:
        lat = Lattice(n - 1, [tuple(int(i == j) for j in range(n - 1)) for i in range(n - 1)])
    else:
        prev = ideal_power(G, k - 1, budget)
        B = np.array(prev.basis, dtype=np.int64).reshape(-1, n - 1)
        vecs = []
        for a in range(1, n):
            vecs.extend(map(tuple, (B @ _right_mul_matrix(G, a)).tolist()))
        lat = Lattice(n - 1, vecs)
    out = cache[k] = IdealLattice(G, lat, f"I^{k}")
    return out


def ideal_product(G: FiniteGroup, B: Subgroup) -> IdealLattice:
    """``I(B) I(G)``, spanned by ``(b - 1)(a - 1)``."""
    n = len(G)
    vecs = []
    for b in B.elements:
        if b == 0:
            continue
        e = np.zeros(n - 1, dtype=np.int64)
        e[b - 1] = 1
        for a in range(1, n):
            vecs.append(tuple((e @ _right_mul_matrix(G, a)).tolist()))
    return IdealLattice(G, Lattice(n - 1, vecs), "I(B)I(G)")


def relative_ideal(G: FiniteGroup, B: Subgroup, n: int, budget: int = DEFAULT_BUDGET) -> IdealLattice:
    """``J = I(B) I(G) + I^(n+1)(G)``, cached on ``G``."""
    cache = G.__dict__.setdefault("_relative_ideals", {})
    key = (B.elements, n)
    if key not in cache:
        cache[key] = ideal_product(G, B).sum(ideal_power(G, n + 1, budget), "J")
    return cache[key]


# ---------------------------------------------------------------------------
# Passi groups


class PassiGroup:
    """``P_n(G, B) = I(G) / (I(B) I(G) + I^(n+1)(G))``."""

    def __init__(self, G: FiniteGroup, B: Subgroup | None, n: int, budget: int = DEFAULT_BUDGET,
                 max_degree: int = MAX_DEGREE):
        B = B if B is not None else Subgroup.trivial(G)
        if n < 1:
            raise InvalidInput("degree must be at least 1")
        if n > max_degree:
            raise CapExceeded(f"degree {n} exceeds cap {max_degree}")
        w = B.normality_witness()
        if w is not None:
            raise InvalidInput("B is not normal", {"conjugator": w[0], "element": w[1]})
        self.G, self.B, self.n = G, B, n
        self.J = relative_ideal(G, B, n, budget)
        self.cokernel: Cokernel = present(len(G) - 1, self.J.basis)
        self.group: FgAb = self.cokernel.group
        self.p_table = [self.rho_coords(self._unit(g)) for g in range(len(G))]

    def _unit(self, g: int) -> list[int]:
        v = [0] * (len(self.G) - 1)
        if g:
            v[g - 1] = 1
        return v

    def rho_coords(self, c: Sequence[int]) -> Vector:
        return self.cokernel.project(c)

    def rho(self, x: np.ndarray) -> Vector:
        return self.rho_coords(coords(x))

    def p(self, a: int) -> Vector:
        """``p_n(a) = rho(a - 1)``."""
        return self.p_table[a]

    def induced(self, images: Sequence[Sequence[int]], codomain: FgAb) -> AbMap:
        """Map out of P sending ``rho(g - 1)`` to ``images[g]`` (``images[0]`` ignored)."""
        return self.cokernel.induced_map(list(images)[1:], codomain)

    @cached_property
    def is_central(self) -> bool:
        return self.B.is_central()

    @cached_property
    def quotient_T(self) -> AbelianQuotient:
        """``T = G/BG'``."""
        return AbelianQuotient(self.G, Subgroup.whole(self.G), self.B.join(derived_subgroup(self.G)))

    @cached_property
    def tensor(self) -> TensorSquare:
        return TensorSquare(self.quotient_T.group)

    @cached_property
    def mu2(self) -> AbMap:
        """``mu_2 : T (x) T -> P_2``, ``abar (x) bbar -> rho((a-1)(b-1))``."""
        if self.n != 2 or not self.is_central:
            raise InvalidInput("mu_2 is defined here for n = 2 and central B")
        G = self.G
        lifts = self.quotient_T.generator_lifts()
        return self.tensor.induced_map(
            lambda i, j: self.rho(ring_mul(G, aug(G, lifts[i]), aug(G, lifts[j]))), self.group)

    def action(self, a: int) -> AbMap:
        """Left multiplication by ``a`` on P."""
        G = self.G
        imgs = [self.group.zero] + [self.rho(ring_mul(G, elt(G, a), aug(G, g))) for g in range(1, len(G))]
        return self.induced(imgs, self.group)

    def verify_maps(self) -> Report:
        G = self.G
        rep = Report(f"P_{self.n} structure maps")
        bad = next((a for a in range(len(G)) if self.p(a) != self.rho(aug(G, a))), None)
        rep.add("p_n(a) = rho(a - 1)", bad is None, bad)
        gen = AbSub(self.group, self.p_table)
        rep.add("p_n(G) generates P_n", gen.is_whole())
        if self.n == 2 and self.is_central:
            mu = self.mu2
            T = self.quotient_T
            wit = None
            vals = {}
            for a in range(len(G)):
                for b in range(len(G)):
                    r = self.rho(ring_mul(G, aug(G, a), aug(G, b)))
                    key = (int(T.codes[a]), int(T.codes[b]))
                    if vals.setdefault(key, r) != r:
                        wit = wit or ("coset", a, b)
                    if wit is None and mu(self.tensor.tens(T(a), T(b))) != r:
                        wit = ("mu", a, b)
            rep.add("mu_2(abar x bbar) = rho((a-1)(b-1)), coset invariant", wit is None, wit)
        return rep


def passi_group(G: FiniteGroup, B: Subgroup | None, n: int, check27: bool = True,
                budget: int = DEFAULT_BUDGET, max_degree: int = MAX_DEGREE) -> PassiGroup:
    P = PassiGroup(G, B, n, budget, max_degree)
    rep = P.verify_maps()
    if check27:
        rep.extend(lower_central_check(P, budget))
    if not rep.ok:
        raise CheckFailed(f"P_{n} construction failed its checks", [c.name for c in rep.failures])
    return P


def lower_central_check(P: PassiGroup, budget: int = DEFAULT_BUDGET) -> Report:
    """The two natural isomorphisms around ``P_n(G, B)`` obtained by adding or killing lower central terms."""
    G, B, n = P.G, P.B, P.n
    rep = Report("lower central isomorphisms")
    g_next = gamma(G, n + 1)
    Qg, proj = quotient(G, g_next)
    Bq = Subgroup.generated(Qg, [proj(b) for b in B.elements])
    left = PassiGroup(Qg, Bq, n, budget, max_degree=n)
    to_left = P.induced([left.p(proj(g)) for g in range(len(G))], left.group)
    rep.add("P_n(G,B) -> P_n(G/gamma_{n+1}, B gamma_{n+1}/gamma_{n+1}) iso", to_left.is_isomorphism(),
            {"source": str(P.group), "target": str(left.group)})
    Bn = B.join(gamma(G, n))
    right = PassiGroup(G, Bn, n, budget, max_degree=n)
    to_right = P.induced([right.p(g) for g in range(len(G))], right.group)
    rep.add("P_n(G,B) -> P_n(G, B gamma_n) iso", to_right.is_isomorphism(),
            {"source": str(P.group), "target": str(right.group)})
    # multiplication is respected on ring generators
    ok = True
    for a in range(1, len(G)):
        for b in range(1, len(G)):
            prod = ring_mul(G, aug(G, a), aug(G, b))
            if to_right(P.rho(prod)) != right.rho(prod):
                ok = False
                break
        if not ok:
            break
    rep.add("respects products of generators", ok)
    return rep


# ---------------------------------------------------------------------------
# polynomial maps


def _as_array(A: FgAb, values) -> np.ndarray:
    arr = np.array([list(A.reduce(v)) for v in values], dtype=object).reshape(len(values), A.ngens)
    return arr


def _reduce(A: FgAb, arr: np.ndarray) -> np.ndarray:
    out = arr.copy()
    for i, d in enumerate(A.factors):
        if d:
            out[..., i] = out[..., i] % d
    return out


@dataclass
class PolyVerdict:
    degree: int
    relative: Subgroup
    ok: bool
    witness: dict | None = None


def fbar(A: FgAb, values: Sequence[Vector], v: Sequence[int]) -> Vector:
    """Linear extension evaluated on I(G)-coordinates."""
    return A.sum(A.scale(int(c), values[g + 1]) for g, c in enumerate(v) if c)


def is_polynomial(G: FiniteGroup, A: FgAb, values: Sequence[Sequence[int]], n: int,
                  B: Subgroup | None = None, budget: int = DEFAULT_BUDGET) -> PolyVerdict:
    """``fbar`` kills ``1 + I(B)I(G) + I^(n+1)(G)``: ``f(1) = 0`` and ``fbar`` vanishes on a lattice basis."""
    B = B if B is not None else Subgroup.trivial(G)
    vals = [A.reduce(v) for v in values]
    if vals[0] != A.zero:
        return PolyVerdict(n, B, False, {"reason": "f(1) != 0", "ring_element": elt(G, 0).tolist()})
    if n == 0:
        bad = next((g for g in range(len(G)) if vals[g] != A.zero), None)
        return PolyVerdict(0, B, bad is None, None if bad is None else
                           {"reason": "nonzero value", "ring_element": aug(G, bad).tolist()})
    J = relative_ideal(G, B, n, budget)
    for v in J.basis:
        if fbar(A, vals, v) != A.zero:
            return PolyVerdict(n, B, False, {"reason": "fbar(J) != 0", "ring_element": [-sum(v)] + list(v)})
    return PolyVerdict(n, B, True)


def is_polynomial_rec(G: FiniteGroup, A: FgAb, values: Sequence[Sequence[int]], n: int,
                      B: Subgroup | None = None) -> PolyVerdict:
    """Recursive test: ``d_f(a, -)`` of degree ``<= n-1`` for all ``a`` and ``d_f(B x G) = 0``."""
    B = B if B is not None else Subgroup.trivial(G)
    F = _reduce(A, _as_array(A, values))
    if any(F[0]):
        return PolyVerdict(n, B, False, {"reason": "f(1) != 0", "ring_element": elt(G, 0).tolist()})
    T = G.table

    def dev(F):
        return _reduce(A, F[T] - F[None, :, :] - F[:, None, :])

    def rec(F, k, path):
        if k == 0:
            nz = np.nonzero(np.any(F != 0, axis=-1))[0]
            return None if len(nz) == 0 else path + [int(nz[0])]
        D = dev(F)
        for a in range(len(G)):
            w = rec(D[a], k - 1, path + [a])
            if w is not None:
                return w
        return None

    if n >= 1:
        D = dev(F)
        Bm = np.array(B.elements)
        bad = np.argwhere(np.any(D[Bm] != 0, axis=-1))
        if len(bad):
            b, a = int(Bm[bad[0][0]]), int(bad[0][1])
            ring = ring_mul(G, aug(G, b), aug(G, a))
            return PolyVerdict(n, B, False, {"reason": "d_f(b, a) != 0 with b in B", "pair": (b, a),
                                             "ring_element": ring.tolist()})
    path = rec(F, n, [])
    if path is None:
        return PolyVerdict(n, B, True)
    ring = ring_prod(G, [aug(G, g) for g in path])
    return PolyVerdict(n, B, False, {"reason": "iterated deviation nonzero", "factors": path,
                                     "ring_element": ring.tolist()})


def deviation_ring_identity(G: FiniteGroup, A: FgAb, values) -> Report:
    """``d_f(a, b) = fbar((a - 1)(b - 1))`` for a normalized ``f``."""
    vals = [A.reduce(v) for v in values]
    rep = Report("deviation as a ring value")
    wit = None
    for a in range(len(G)):
        for b in range(len(G)):
            d = A.sub(A.sub(vals[G.mul(a, b)], vals[b]), vals[a])
            r = ring_mul(G, aug(G, a), aug(G, b))
            rv = A.sum(A.scale(int(c), vals[g]) for g, c in enumerate(r) if c)
            if d != rv:
                wit = (a, b)
                break
        if wit:
            break
    rep.add("d_f(a,b) = fbar((a-1)(b-1))", wit is None, wit)
    return rep


def gamma_ideal_check(G: FiniteGroup, n: int, budget: int = DEFAULT_BUDGET) -> Report:
    rep = Report(f"lower central terms and ideal powers for {G.name}, n = {n}")
    wit = None
    for a in range(len(G)):
        for b in range(len(G)):
            lhs = aug(G, G.comm(a, b))
            xa, xb = aug(G, a), aug(G, b)
            rc = ring_mul(G, xa, xb) - ring_mul(G, xb, xa)
            rhs = ring_mul(G, rc, elt(G, G.mul(G.inverse(a), G.inverse(b))))
            if any(lhs != rhs):
                wit = (a, b)
                break
        if wit:
            break
    rep.add("ring commutator [a,b] - 1 = [a-1, b-1] a^-1 b^-1", wit is None, wit)
    In = ideal_power(G, n, budget)
    gn = gamma(G, n)
    bad = next((g for g in gn.elements if not In.contains_ring(aug(G, g))), None)
    rep.add(f"I(gamma_{n}) in I^{n}", bad is None, bad)
    return rep


def factor_poly(G: FiniteGroup, A: FgAb, values, P: PassiGroup, budget: int = DEFAULT_BUDGET):
    """``fbar : P_n(G, B) -> A`` with ``fbar p_n = f``; for n = 2 and central B also ``w_f``.

    Returns ``(fbar, w_f)`` where ``w_f`` is None unless n = 2 and B is central.
    """
    vals = [A.reduce(v) for v in values]
    v = is_polynomial(G, A, vals, P.n, P.B, budget)
    if not v.ok:
        raise InvalidInput("map is not polynomial of the required degree", v.witness)
    fb = P.induced(vals, A)
    bad = next((a for a in range(len(G)) if fb(P.p(a)) != vals[a]), None)
    if bad is not None:
        raise CheckFailed("fbar p_n != f", {"element": bad})
    if not AbSub(P.group, P.p_table).is_whole():
        raise CheckFailed("p_n(G) does not generate P_n")
    if P.n != 2 or not P.is_central:
        return fb, None
    T = P.quotient_T
    lifts = T.generator_lifts()
    w32 = P.tensor.induced_map(
        lambda i, j: A.sub(A.sub(vals[G.mul(lifts[i], lifts[j])], vals[lifts[j]]), vals[lifts[i]]), A)
    if w32 != fb @ P.mu2:
        raise CheckFailed("w_f from the deviation differs from fbar mu_2")
    return fb, w32


def derivation_check(P: PassiGroup) -> Report:
    """``p_n`` is a derivation for the left ``Z(G/B)``-action, and ``I^n(G/B)`` kills P."""
    G, B = P.G, P.B
    rep = Report(f"derivation property of p_{P.n}")
    acts = [P.action(a) for a in range(len(G))]
    Pg = P.group
    bad = next((b for b in B.elements if acts[b] != AbMap.identity(Pg)), None)
    rep.add("B acts trivially", bad is None, bad)
    wit = None
    for a in range(len(G)):
        for b in range(len(G)):
            if P.p(G.mul(a, b)) != Pg.add(acts[a](P.p(b)), P.p(a)):
                wit = (a, b)
                break
        if wit:
            break
    rep.add("p(ab) = a.p(b) + p(a)", wit is None, wit)
    Qg, proj = quotient(G, B)
    reps = [int(np.nonzero(proj.table == c)[0][0]) for c in range(len(Qg))]
    ident = AbMap.identity(Pg)
    minus = [acts[r] - ident for r in reps]
    wit = None
    for tup in iproduct(range(1, len(Qg)), repeat=P.n):
        m = ident
        for c in tup:
            m = minus[c] @ m
        if m != AbMap.zero(Pg, Pg):
            wit = list(tup)
            break
    rep.add(f"I^{P.n}(G/B) P = 0", wit is None, wit)
    return rep


def seq29_check(G: FiniteGroup, B: Subgroup, n: int, budget: int = DEFAULT_BUDGET) -> Report:
    """Exactness of ``B -> P_n(G, B) -> P_n(G/B) -> 0`` for abelian normal ``B``."""
    if not B.is_normal():
        raise InvalidInput("B is not normal")
    Bab = AbelianQuotient(G, B, Subgroup.trivial(G))   # raises unless B is abelian
    P = passi_group(G, B, n, check27=False, budget=budget)
    Qg, proj = quotient(G, B)
    P2 = passi_group(Qg, None, n, check27=False, budget=budget)
    rep = Report(f"sequence B -> P_{n}(G,B) -> P_{n}(G/B) for {G.name}")
    pi = Bab.group
    pn_i = AbMap(pi, P.group, tuple(P.p(Bab.lift(e)) for e in pi.gens()))
    bad = next((b for b in B.elements if pn_i(Bab(b)) != P.p(b)), None)
    rep.add("p_n i is a homomorphism on B", bad is None, bad)
    Pn_pi = P.induced([P2.p(proj(g)) for g in range(len(G))], P2.group)
    rep.add("exact at P_n(G,B): Im(p_n i) = Ker P_n(pi)", pn_i.image() == Pn_pi.kernel())
    rep.add("P_n(pi) surjective", Pn_pi.is_surjective())
    return rep


def bipolynomial(G: FiniteGroup, A: FgAb, values, m: int, n: int, budget: int = DEFAULT_BUDGET) -> Report:
    """Each partial map of ``f : G x G -> A`` (values indexed ``[a][b]``) is polynomial."""
    rep = Report(f"bipolynomial of degree <= ({m}, {n})")
    bad = None
    for b0 in range(len(G)):
        v = is_polynomial(G, A, [values[a][b0] for a in range(len(G))], m, None, budget)
        if not v.ok:
            bad = {"slot": "first", "basepoint": b0, **v.witness}
            break
    rep.add(f"a -> f(a, b0) degree <= {m} for all b0", bad is None, bad)
    bad = None
    for a0 in range(len(G)):
        v = is_polynomial(G, A, [values[a0][b] for b in range(len(G))], n, None, budget)
        if not v.ok:
            bad = {"slot": "second", "basepoint": a0, **v.witness}
            break
    rep.add(f"b -> f(a0, b) degree <= {n} for all a0", bad is None, bad)
    return rep


def ring_commutator_identity(P: PassiGroup) -> Report:
    """``p_2([a,b]) = p_2(a)p_2(b) - p_2(b)p_2(a)`` in the ring quotient."""
    G = P.G
    rep = Report("ring commutator identity")
    wit = None
    for a in range(len(G)):
        for b in range(len(G)):
            xa, xb = aug(G, a), aug(G, b)
            rc = ring_mul(G, xa, xb) - ring_mul(G, xb, xa)
            if P.p(G.comm(a, b)) != P.rho(rc):
                wit = (a, b)
                break
        if wit:
            break
    rep.add("p_2 of a commutator p_2([a,b]) = p_2(a)p_2(b) - p_2(b)p_2(a)", wit is None, wit)
    return rep
