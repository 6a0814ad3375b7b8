"""Finite groups as validated multiplication tables.

Elements are the indices ``0..n-1`` and the identity is always index 0.
Tables are numpy integer arrays so that exhaustive scans over pairs and
triples can be vectorized.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .abelian import FgAb, Vector, present
from .errors import CapExceeded, InvalidInput

ORDER_CAP = 10**4
EXHAUSTIVE_ASSOC = 512
ASSOC_SAMPLES = 10**5
PERM_DEGREE_CAP = 12


class FiniteGroup:
    """Group on ``0..n-1`` given by its multiplication table.

    ``associativity`` records how associativity was certified: ``"exhaustive"``
    (all triples) or ``"generators"`` (all pairs against a generating set, which
    already implies associativity, plus random triples).
    """

    def __init__(self, table, name: str | None = None, validate: bool = True):
        T = np.asarray(table, dtype=np.int64)
        if T.ndim != 2 or T.shape[0] != T.shape[1] or T.shape[0] == 0:
            raise InvalidInput("multiplication table must be a nonempty square array")
        self.table = T
        self.name = name or f"G{T.shape[0]}"
        self.associativity = "unchecked"
        if validate:
            self._validate()
        inv = np.empty(len(T), dtype=np.int64)
        rows, cols = np.nonzero(T == 0)
        inv[rows] = cols
        self.inv = inv

    # -- validation ---------------------------------------------------------

    def _validate(self):
        T = self.table
        n = len(T)
        if n > ORDER_CAP:
            raise CapExceeded(f"group order {n} exceeds cap {ORDER_CAP}")
        if T.min() < 0 or T.max() >= n:
            i, j = np.argwhere((T < 0) | (T >= n))[0]
            raise InvalidInput("table entry out of range", {"pair": (int(i), int(j))})
        ar = np.arange(n)
        if not (np.array_equal(T[0], ar) and np.array_equal(T[:, 0], ar)):
            raise InvalidInput("index 0 is not a two-sided identity")
        srt = np.sort(T, axis=1)
        bad = np.nonzero((srt != ar).any(axis=1))[0]
        if len(bad):
            raise InvalidInput("row is not a permutation (missing inverses)", {"row": int(bad[0])})
        srt = np.sort(T, axis=0)
        bad = np.nonzero((srt != ar[:, None]).any(axis=0))[0]
        if len(bad):
            raise InvalidInput("column is not a permutation", {"column": int(bad[0])})
        if n <= EXHAUSTIVE_ASSOC:
            for a in range(n):
                lhs = T[T[a]]          # (a b) c over (b, c)
                rhs = T[a][T]          # a (b c)
                if not np.array_equal(lhs, rhs):
                    b, c = np.argwhere(lhs != rhs)[0]
                    raise InvalidInput("associativity fails", {"triple": (a, int(b), int(c))})
            self.associativity = "exhaustive"
        else:
            for g in self.generating_set:
                lhs = T[T, g]          # (a b) g
                rhs = T[:, T[:, g]]    # a (b g)
                if not np.array_equal(lhs, rhs):
                    a, b = np.argwhere(lhs != rhs)[0]
                    raise InvalidInput("associativity fails", {"triple": (int(a), int(b), int(g))})
            rng = np.random.default_rng(20240101)
            a, b, c = rng.integers(0, n, size=(3, ASSOC_SAMPLES))
            bad = np.nonzero(T[T[a, b], c] != T[a, T[b, c]])[0]
            if len(bad):
                k = bad[0]
                raise InvalidInput("associativity fails", {"triple": (int(a[k]), int(b[k]), int(c[k]))})
            self.associativity = "generators"

    # -- basic operations ---------------------------------------------------

    def __len__(self) -> int:
        return len(self.table)

    @property
    def order(self) -> int:
        return len(self.table)

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def prod(self, elts: Iterable[int]) -> int:
        x = 0
        for e in elts:
            x = int(self.table[x, e])
        return x

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse(a), -k
        x = 0
        for _ in range(k):
            x = int(self.table[x, a])
        return x

    def comm(self, a: int, b: int) -> int:
        """``[a, b] = a b a^-1 b^-1``."""
        return int(self.comm_table[a, b])

    def conj(self, a: int, b: int) -> int:
        """``a b a^-1``."""
        T = self.table
        return int(T[T[a, b], self.inv[a]])

    @cached_property
    def comm_table(self) -> np.ndarray:
        T, inv = self.table, self.inv
        ab = T
        return T[T[ab, inv[:, None]], inv[None, :]]

    def element_order(self, a: int) -> int:
        x, k = a, 1
        while x != 0:
            x = int(self.table[x, a])
            k += 1
        return k

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def generating_set(self) -> tuple[int, ...]:
        """Greedy generating set: scan indices, keep any element outside the span so far."""
        gens: list[int] = []
        span = np.zeros(len(self), dtype=bool)
        span[0] = True
        for x in range(1, len(self)):
            if not span[x]:
                gens.append(x)
                span[:] = False
                span[list(closure(self, gens))] = True
        return tuple(gens)

    def words(self, gens: Sequence[int]) -> dict[int, tuple[tuple[int, int], ...]]:
        """Shortlex-first word (over gens and their inverses) for every element reached."""
        letters = []
        for k, g in enumerate(gens):
            letters.append((k, 1))
            letters.append((k, -1))
        out = {0: ()}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for k, e in letters:
                g = gens[k] if e == 1 else int(self.inv[gens[k]])
                y = int(self.table[x, g])
                if y not in out:
                    out[y] = out[x] + ((k, e),)
                    queue.append(y)
        return out


def closure(G: FiniteGroup, gens: Iterable[int]) -> set[int]:
    gens = [int(g) for g in gens if g != 0]
    seen = {0}
    frontier = [0]
    T = G.table
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = int(T[x, g])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def closure_array(G: FiniteGroup, gens: Iterable[int]) -> np.ndarray:
    """Vectorized closure under right multiplication, for large generating sets."""
    gens = np.unique(np.asarray([int(g) for g in gens], dtype=np.int64))
    mask = np.zeros(len(G), dtype=bool)
    mask[0] = True
    frontier = np.array([0])
    T = G.table
    while len(frontier):
        new = np.unique(T[np.ix_(frontier, gens)].ravel()) if len(gens) else np.array([], dtype=np.int64)
        new = new[~mask[new]]
        mask[new] = True
        frontier = new
    return np.nonzero(mask)[0]


# ---------------------------------------------------------------------------
# subgroups and homomorphisms


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    elements: tuple[int, ...]

    def __post_init__(self):
        els = tuple(sorted(set(int(e) for e in self.elements)))
        object.__setattr__(self, "elements", els)

    @classmethod
    def generated(cls, G: FiniteGroup, gens: Iterable[int]) -> "Subgroup":
        gens = list(gens)
        if len(gens) > 64:
            return cls(G, tuple(int(x) for x in closure_array(G, gens)))
        return cls(G, tuple(closure(G, gens)))

    @classmethod
    def from_elements(cls, G: FiniteGroup, elements: Iterable[int]) -> "Subgroup":
        els = sorted(set(int(e) for e in elements))
        if not els or els[0] != 0:
            raise InvalidInput("subgroup must contain the identity")
        if els[-1] >= len(G) or els[0] < 0:
            raise InvalidInput("subgroup element out of range")
        arr = np.array(els)
        mask = np.zeros(len(G), dtype=bool)
        mask[arr] = True
        prods = G.table[np.ix_(arr, arr)]
        if not mask[prods].all():
            i, j = np.argwhere(~mask[prods])[0]
            raise InvalidInput("subset is not closed", {"pair": (els[i], els[j])})
        return cls(G, tuple(els))

    @classmethod
    def trivial(cls, G: FiniteGroup) -> "Subgroup":
        return cls(G, (0,))

    @classmethod
    def whole(cls, G: FiniteGroup) -> "Subgroup":
        return cls(G, tuple(range(len(G))))

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(len(self.parent), dtype=bool)
        m[list(self.elements)] = True
        return m

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return bool(self.mask[x])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.elements == other.elements

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def __le__(self, other: "Subgroup") -> bool:
        return bool(other.mask[list(self.elements)].all())

    def is_trivial(self) -> bool:
        return self.elements == (0,)

    def is_whole(self) -> bool:
        return len(self.elements) == len(self.parent)

    def normality_witness(self) -> tuple[int, int] | None:
        """``(g, n)`` with ``g n g^-1`` outside the subgroup, or None if normal."""
        G = self.parent
        N = np.array(self.elements)
        conj = G.table[G.table[:, N], G.inv[:, None]]
        bad = ~self.mask[conj]
        if bad.any():
            g, k = np.argwhere(bad)[0]
            return int(g), int(N[k])
        return None

    def is_normal(self) -> bool:
        return self.normality_witness() is None

    def is_central(self) -> bool:
        T = self.parent.table
        N = np.array(self.elements)
        return bool(np.array_equal(T[N, :], T[:, N].T))

    def as_group(self) -> tuple[FiniteGroup, np.ndarray]:
        """The subgroup as a standalone group; returns (group, local->parent index array)."""
        els = np.array(self.elements)
        pos = np.full(len(self.parent), -1, dtype=np.int64)
        pos[els] = np.arange(len(els))
        table = pos[self.parent.table[np.ix_(els, els)]]
        return FiniteGroup(table, name=f"sub({self.parent.name})", validate=False), els

    def join(self, other: "Subgroup") -> "Subgroup":
        return Subgroup.generated(self.parent, set(self.elements) | set(other.elements))


@dataclass(frozen=True, eq=False)
class GroupHom:
    domain: FiniteGroup
    codomain: FiniteGroup
    table: np.ndarray
    verify: bool = True

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        object.__setattr__(self, "table", t)
        if t.shape != (len(self.domain),):
            raise InvalidInput("homomorphism table has wrong length")
        if t.min() < 0 or t.max() >= len(self.codomain):
            raise InvalidInput("homomorphism value out of range")
        if self.verify:
            w = hom_witness(self.domain, self.codomain, t)
            if w is not None:
                raise InvalidInput("map is not a homomorphism", {"pair": w})

    def __call__(self, a: int) -> int:
        return int(self.table[a])

    def __matmul__(self, other: "GroupHom") -> "GroupHom":
        if other.codomain is not self.domain:
            raise ValueError("homomorphisms are not composable")
        return GroupHom(other.domain, self.codomain, self.table[other.table], verify=False)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupHom):
            return NotImplemented
        return (self.domain is other.domain and self.codomain is other.codomain
                and np.array_equal(self.table, other.table))

    __hash__ = None

    @classmethod
    def identity(cls, G: FiniteGroup) -> "GroupHom":
        return cls(G, G, np.arange(len(G)), verify=False)

    @classmethod
    def from_generators(cls, G: FiniteGroup, H: FiniteGroup, images: dict[int, int]) -> "GroupHom":
        """Extend generator images along shortlex words, then verify exhaustively."""
        gens = list(images)
        if set(closure(G, gens)) != set(range(len(G))):
            raise InvalidInput("given elements do not generate the domain")
        words = G.words(gens)
        t = np.zeros(len(G), dtype=np.int64)
        for x, w in words.items():
            y = 0
            for k, e in w:
                h = images[gens[k]]
                y = H.mul(y, h if e == 1 else H.inverse(h))
            t[x] = y
        return cls(G, H, t)

    def kernel(self) -> Subgroup:
        return Subgroup(self.domain, tuple(int(x) for x in np.nonzero(self.table == 0)[0]))

    def image(self) -> Subgroup:
        return Subgroup(self.codomain, tuple(int(x) for x in np.unique(self.table)))

    def is_injective(self) -> bool:
        return len(np.unique(self.table)) == len(self.domain)

    def is_surjective(self) -> bool:
        return len(np.unique(self.table)) == len(self.codomain)


def hom_witness(G: FiniteGroup, H: FiniteGroup, t: np.ndarray) -> tuple[int, int] | None:
    lhs = t[G.table]
    rhs = H.table[t[:, None], t[None, :]]
    if np.array_equal(lhs, rhs):
        return None
    a, b = np.argwhere(lhs != rhs)[0]
    return int(a), int(b)


# ---------------------------------------------------------------------------
# series


def center(G: FiniteGroup) -> Subgroup:
    T = G.table
    return Subgroup(G, tuple(int(x) for x in np.nonzero((T == T.T).all(axis=1))[0]))


def centralizer(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    S = list(S)
    T = G.table
    ok = (T[:, S] == T[S, :].T).all(axis=1)
    return Subgroup(G, tuple(int(x) for x in np.nonzero(ok)[0]))


def commutator_subgroup(G: FiniteGroup, H: Subgroup, K: Subgroup) -> Subgroup:
    """``[H, K]``, generated by all ``[h, k]``."""
    C = G.comm_table[np.ix_(list(H.elements), list(K.elements))]
    return Subgroup.generated(G, np.unique(C).tolist())


def derived_subgroup(G: FiniteGroup) -> Subgroup:
    W = Subgroup.whole(G)
    return commutator_subgroup(G, W, W)


def lower_central_series(G: FiniteGroup) -> list[Subgroup]:
    """``gamma_1 = G, gamma_{i+1} = [G, gamma_i]`` until it stabilizes (last term repeated once)."""
    W = Subgroup.whole(G)
    series = [W]
    while True:
        nxt = commutator_subgroup(G, W, series[-1])
        series.append(nxt)
        if nxt == series[-2]:
            return series


def gamma(G: FiniteGroup, i: int) -> Subgroup:
    series = lower_central_series(G)
    return series[min(i, len(series)) - 1]


def nilpotency_class(G: FiniteGroup) -> int | None:
    """Least c with gamma_{c+1} trivial; None if G is not nilpotent."""
    series = lower_central_series(G)
    for i, S in enumerate(series):
        if S.is_trivial():
            return i
    return None


def quotient(G: FiniteGroup, N: Subgroup) -> tuple[FiniteGroup, GroupHom]:
    """Coset group ordered by minimal coset representative, and the projection."""
    w = N.normality_witness()
    if w is not None:
        raise InvalidInput("subgroup is not normal", {"conjugator": w[0], "element": w[1]})
    T = G.table
    Nel = np.array(N.elements)
    coset = np.full(len(G), -1, dtype=np.int64)
    reps = []
    for x in range(len(G)):
        if coset[x] < 0:
            coset[T[x, Nel]] = len(reps)
            reps.append(x)
    reps = np.array(reps)
    Q = FiniteGroup(coset[T[np.ix_(reps, reps)]], name=f"{G.name}/N", validate=False)
    return Q, GroupHom(G, Q, coset, verify=False)


# ---------------------------------------------------------------------------
# abelian (sub)quotients


class AbelianQuotient:
    """``H/N`` (H/N abelian) as an FgAb with dictionaries both ways.

    ``codes[g]`` is the FgAb enumeration index of ``gN`` for ``g`` in ``H``
    (-1 outside ``H``); ``lift(x)`` is the least element of ``H`` in the class ``x``.
    """

    def __init__(self, G: FiniteGroup, H: Subgroup, N: Subgroup):
        if not N <= H:
            raise InvalidInput("N is not contained in H")
        Hg, els = H.as_group()
        pos = np.full(len(G), -1, dtype=np.int64)
        pos[els] = np.arange(len(els))
        Nloc = Subgroup(Hg, tuple(int(pos[x]) for x in N.elements))
        w = Nloc.normality_witness()
        if w is not None:
            raise InvalidInput("N is not normal in H", {"conjugator": int(els[w[0]]), "element": int(els[w[1]])})
        Qg, proj = quotient(Hg, Nloc)
        if not Qg.is_abelian:
            bad = np.argwhere(Qg.table != Qg.table.T)[0]
            reps = [int(np.nonzero(proj.table == b)[0][0]) for b in bad]
            raise InvalidInput("H/N is not abelian", {"pair": tuple(int(els[r]) for r in reps)})
        self.parent, self.H, self.N = G, H, N
        A, qcode = split_finite_abelian(Qg)
        self.group: FgAb = A
        self.codes = np.full(len(G), -1, dtype=np.int64)
        self.codes[els] = qcode[proj.table]
        lift = np.full(A.order, -1, dtype=np.int64)
        for g in reversed(els):
            lift[self.codes[g]] = g
        self._lift = lift

    def __call__(self, g: int) -> Vector:
        c = int(self.codes[g])
        if c < 0:
            raise ValueError(f"element {g} is not in H")
        return self.group.element(c)

    def lift(self, x: Sequence[int]) -> int:
        return int(self._lift[self.group.index(x)])

    def generator_lifts(self) -> list[int]:
        return [self.lift(e) for e in self.group.gens()]


def split_finite_abelian(A: FiniteGroup) -> tuple[FgAb, np.ndarray]:
    """Invariant factors of a finite abelian table group and the element -> FgAb index map.

    A polycyclic presentation is read off by adjoining elements outside the
    current span (recording each relative order and the relation it closes),
    then reduced by Smith normal form.
    """
    T = A.table
    coords: dict[int, list[int]] = {0: []}
    gens: list[int] = []
    relations: list[tuple[list[int], list[int]]] = []
    for x in range(len(A)):
        if x in coords:
            continue
        r, y = 1, x
        while y not in coords:
            y = int(T[y, x])
            r += 1
        # now y = x^r lies in the span so far
        relations.append((list(coords[y]), [len(gens), r]))
        new = {}
        for e, c in coords.items():
            z = e
            for j in range(r):
                new[z] = c + [j]
                z = int(T[z, x])
        coords = new
        gens.append(x)
    k = len(gens)
    rels = []
    for prev, (i, r) in relations:
        v = [0] * k
        v[i] = r
        for t, c in enumerate(prev):
            v[t] -= c
        rels.append(v)
    cok = present(k, rels)
    codes = np.empty(len(A), dtype=np.int64)
    for e, c in coords.items():
        codes[e] = cok.group.index(cok.project(c + [0] * (k - len(c))))
    return cok.group, codes


def abelianization(G: FiniteGroup) -> AbelianQuotient:
    return AbelianQuotient(G, Subgroup.whole(G), derived_subgroup(G))


def subquotient_ab(G: FiniteGroup, H: Subgroup, N: Subgroup) -> AbelianQuotient:
    return AbelianQuotient(G, H, N)


class AbGroupView:
    """A finite FgAb materialized as a FiniteGroup; element i is ``A.element(i)``."""

    def __init__(self, A: FgAb, name: str | None = None):
        if not A.is_finite:
            raise CapExceeded(f"{A} is infinite")
        n = A.order
        if n > ORDER_CAP:
            raise CapExceeded(f"{A} has order {n} > {ORDER_CAP}")
        self.fgab = A
        k = A.ngens
        idx = np.arange(n)
        C = np.zeros((n, k), dtype=np.int64)
        w = np.ones(k, dtype=np.int64)
        rem = idx.copy()
        for i, d in enumerate(A.factors):
            C[:, i] = rem % d
            rem //= d
            if i + 1 < k:
                w[i + 1] = w[i] * d
        self.coords = C
        facs = np.array(A.factors, dtype=np.int64)
        if k:
            S = (C[:, None, :] + C[None, :, :]) % facs
            table = (S * w).sum(axis=2)
        else:
            table = np.zeros((1, 1), dtype=np.int64)
        self.group = FiniteGroup(table, name=name or f"[{A}]", validate=n <= 64)

    def to_index(self, x: Sequence[int]) -> int:
        return self.fgab.index(x)

    def to_element(self, i: int) -> Vector:
        return self.fgab.element(int(i))


def fgab_to_group(A: FgAb, name: str | None = None) -> AbGroupView:
    return AbGroupView(A, name)


def subgroups_of_abelian(G: FiniteGroup, Z: Subgroup) -> list[Subgroup]:
    """All subgroups of an abelian subgroup Z, sorted by (order, elements)."""
    found = {(0,): Subgroup.trivial(G)}
    frontier = list(found.values())
    while frontier:
        nxt = []
        for S in frontier:
            for z in Z.elements:
                if z in S:
                    continue
                S2 = Subgroup.generated(G, list(S.elements[1:]) + [z]) if S.order < 64 else S.join(
                    Subgroup.generated(G, [z]))
                if S2.elements not in found:
                    found[S2.elements] = S2
                    nxt.append(S2)
        frontier = nxt
    return sorted(found.values(), key=lambda S: (S.order, S.elements))


# ---------------------------------------------------------------------------
# constructions


def group_from_permutations(gens: Sequence[Sequence[int]], degree: int | None = None,
                            name: str | None = None) -> FiniteGroup:
    """Closure of permutation generators; product ``a*b`` applies ``b`` first.

    Elements are numbered in BFS (shortlex) order over the generators.
    """
    if not gens:
        return FiniteGroup([[0]], name=name or "1")
    d = degree or len(gens[0])
    if d > PERM_DEGREE_CAP:
        raise CapExceeded(f"permutation degree {d} exceeds {PERM_DEGREE_CAP}")
    P = []
    for g in gens:
        g = tuple(int(x) for x in g)
        if sorted(g) != list(range(d)):
            raise InvalidInput("not a permutation", {"generator": g})
        P.append(g)
    ident = tuple(range(d))
    index = {ident: 0}
    perms = [ident]
    queue = deque([ident])
    while queue:
        p = queue.popleft()
        for g in P:
            q = tuple(p[g[x]] for x in range(d))
            if q not in index:
                index[q] = len(perms)
                perms.append(q)
                if len(perms) > ORDER_CAP:
                    raise CapExceeded(f"permutation group order exceeds {ORDER_CAP}")
                queue.append(q)
    A = np.array(perms, dtype=np.int64)
    n = len(A)
    base = d ** np.arange(d, dtype=np.int64)
    codes = A @ base
    order = np.argsort(codes)
    table = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        cc = A[a][A] @ base      # (a*b)(x) = a(b(x))
        table[a] = order[np.searchsorted(codes[order], cc)]
    return FiniteGroup(table, name=name or f"Perm{n}")


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise InvalidInput("cyclic order must be positive")
    a = np.arange(n)
    return FiniteGroup((a[:, None] + a[None, :]) % n, name=f"C{n}")


def abelian_product(moduli: Sequence[int], name: str | None = None) -> FiniteGroup:
    """``Z/m_1 x ... x Z/m_k`` with mixed-radix indexing (first coordinate fastest)."""
    moduli = [int(m) for m in moduli]
    n = int(np.prod(moduli)) if moduli else 1
    if n > ORDER_CAP:
        raise CapExceeded(f"order {n} exceeds {ORDER_CAP}")
    idx = np.arange(n)
    C = []
    rem = idx.copy()
    for m in moduli:
        C.append(rem % m)
        rem //= m
    table = np.zeros((n, n), dtype=np.int64)
    w = 1
    for c, m in zip(C, moduli):
        table += ((c[:, None] + c[None, :]) % m) * w
        w *= m
    return FiniteGroup(table, name=name or "x".join(f"C{m}" for m in moduli) or "1")


def elementary(p: int, k: int) -> FiniteGroup:
    return abelian_product([p] * k, name=f"C{p}^{k}")


def dihedral(n: int) -> FiniteGroup:
    """Order 2n; element ``r^i s^e`` has index ``i + n*e``."""
    if n < 1:
        raise InvalidInput("dihedral parameter must be positive")
    N = 2 * n
    i = np.arange(N) % n
    e = np.arange(N) // n
    sign = np.where(e[:, None] == 1, -1, 1)
    ri = (i[:, None] + sign * i[None, :]) % n
    re = (e[:, None] + e[None, :]) % 2
    return FiniteGroup(ri + n * re, name=f"D{n}")


def quaternion8() -> FiniteGroup:
    """Indices 0..7 are 1, -1, i, -i, j, -j, k, -k."""
    # unit products: basis 0=1,1=i,2=j,3=k ; (sign, unit)
    mult = {
        (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
        (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
        (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
        (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
    }

    def dec(x):
        return (1 if x % 2 == 0 else -1), x // 2

    def enc(s, u):
        return 2 * u + (0 if s == 1 else 1)

    table = [[0] * 8 for _ in range(8)]
    for a in range(8):
        for b in range(8):
            sa, ua = dec(a)
            sb, ub = dec(b)
            s, u = mult[(ua, ub)]
            table[a][b] = enc(sa * sb * s, u)
    return FiniteGroup(table, name="Q8")


def symmetric(n: int) -> FiniteGroup:
    if not 1 <= n <= 5:
        raise InvalidInput("symmetric(n) supports 1 <= n <= 5")
    if n == 1:
        return FiniteGroup([[0]], name="S1")
    gens = [tuple([1, 0] + list(range(2, n)))]
    if n > 2:
        gens.append(tuple(list(range(1, n)) + [0]))
    return group_from_permutations(gens, n, name=f"S{n}")


def alternating_subgroup(S: FiniteGroup) -> Subgroup:
    """Index-2 derived subgroup (A_n inside S_n for n >= 2)."""
    return derived_subgroup(S)


def heisenberg(p: int) -> FiniteGroup:
    """Unitriangular 3x3 over Z/p; ``(a, b, c)`` has index ``a + p b + p^2 c``."""
    n = p ** 3
    if n > ORDER_CAP:
        raise CapExceeded("heisenberg order too large")
    idx = np.arange(n)
    a, b, c = idx % p, (idx // p) % p, idx // (p * p)
    A = (a[:, None] + a[None, :]) % p
    B = (b[:, None] + b[None, :]) % p
    C = (c[:, None] + c[None, :] + a[:, None] * b[None, :]) % p
    return FiniteGroup(A + p * B + p * p * C, name=f"Heis{p}")


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str | None = None) -> FiniteGroup:
    """``(g, h)`` has index ``g*|H| + h``."""
    n, m = len(G), len(H)
    if n * m > ORDER_CAP:
        raise CapExceeded(f"direct product order {n * m} exceeds {ORDER_CAP}")
    g = np.arange(n * m) // m
    h = np.arange(n * m) % m
    table = G.table[g[:, None], g[None, :]] * m + H.table[h[:, None], h[None, :]]
    return FiniteGroup(table, name=name or f"{G.name}x{H.name}", validate=n * m <= EXHAUSTIVE_ASSOC)


def direct_power(G: FiniteGroup, k: int) -> FiniteGroup:
    P = G
    for _ in range(k - 1):
        P = direct_product(P, G, name=f"{G.name}^{_ + 2}")
    return P


def power_series_units(m: int, N: int) -> FiniteGroup:
    """Units ``1 + a_1 T + ... + a_{N-1} T^{N-1}`` of ``(Z/m)[T]/(T^N)``.

    Index is ``sum a_k m^(k-1)``.
    """
    if m < 2 or N < 1:
        raise InvalidInput("power_series_units needs m >= 2 and N >= 1")
    n = m ** (N - 1)
    if n > ORDER_CAP:
        raise CapExceeded("power_series_units order too large")
    idx = np.arange(n)
    co = [np.ones(n, dtype=np.int64)]
    rem = idx.copy()
    for _ in range(1, N):
        co.append(rem % m)
        rem //= m
    table = np.zeros((n, n), dtype=np.int64)
    for k in range(1, N):
        s = np.zeros((n, n), dtype=np.int64)
        for i in range(k + 1):
            s += co[i][:, None] * co[k - i][None, :]
        table += (s % m) * m ** (k - 1)
    return FiniteGroup(table, name=f"U({m},{N})")


def power_series_coefficient(m: int, N: int, k: int, g: int) -> int:
    if k == 0:
        return 1
    return (g // m ** (k - 1)) % m


@dataclass(frozen=True)
class LieRing:
    """Lie ring on ``(Z/m)^dim``; ``brackets[(i, j)]`` is ``[e_i, e_j]`` as a coordinate list."""

    modulus: int
    dim: int
    brackets: dict

    def bracket(self, x: Sequence[int], y: Sequence[int]) -> list[int]:
        out = [0] * self.dim
        for (i, j), v in self.brackets.items():
            c = x[i] * y[j] - x[j] * y[i]
            if c:
                for k in range(self.dim):
                    out[k] += c * v[k]
        return [a % self.modulus for a in out]

    @classmethod
    def heisenberg(cls, m: int) -> "LieRing":
        return cls(m, 3, {(0, 1): [0, 0, 1]})


def lazard(ring: LieRing) -> FiniteGroup:
    """``x o y = x + y + 1/2 [x, y]`` on a 2-step nilpotent Lie ring over Z/m, m odd.

    Index is mixed radix over the coordinates (first fastest), matching
    ``abelian_product([m]*dim)``.
    """
    m, r = ring.modulus, ring.dim
    if m % 2 == 0:
        raise InvalidInput("lazard needs an odd modulus (2 must be invertible)", {"modulus": m})
    for (i, j) in ring.brackets:
        if not (0 <= i < r and 0 <= j < r) or i == j:
            raise InvalidInput("bad bracket index", {"pair": (i, j)})
    basis = [[int(k == i) for k in range(r)] for i in range(r)]
    for i in range(r):
        for j in range(r):
            u = ring.bracket(basis[i], basis[j])
            for k in range(r):
                if any(ring.bracket(u, basis[k])):
                    raise InvalidInput("Lie ring is not 2-step nilpotent", {"triple": (i, j, k)})
    n = m ** r
    if n > ORDER_CAP:
        raise CapExceeded("lazard group too large")
    half = pow(2, -1, m)
    coords = [[(x // m ** k) % m for k in range(r)] for x in range(n)]
    w = [m ** k for k in range(r)]
    table = np.zeros((n, n), dtype=np.int64)
    for x in range(n):
        cx = coords[x]
        for y in range(n):
            cy = coords[y]
            br = ring.bracket(cx, cy)
            table[x, y] = sum(((cx[k] + cy[k] + half * br[k]) % m) * w[k] for k in range(r))
    return FiniteGroup(table, name=f"Lazard({m})")


BUILTINS = ("cyclic", "dihedral", "quaternion8", "symmetric", "elementary", "heisenberg", "product",
            "power_series_units", "lazard")


def builtin(family: str, params: dict | None = None) -> FiniteGroup:
    params = params or {}
    if family == "cyclic":
        return cyclic(int(params["n"]))
    if family == "dihedral":
        return dihedral(int(params["n"]))
    if family == "quaternion8":
        return quaternion8()
    if family == "symmetric":
        return symmetric(int(params["n"]))
    if family == "elementary":
        return elementary(int(params["p"]), int(params["k"]))
    if family == "heisenberg":
        return heisenberg(int(params["p"]))
    if family == "power_series_units":
        return power_series_units(int(params["m"]), int(params["N"]))
    if family == "lazard":
        m = int(params.get("modulus", params.get("p", 0)))
        if params.get("lie", "heisenberg") == "heisenberg" and "brackets" not in params:
            ring = LieRing.heisenberg(m)
        else:
            br = {(int(i), int(j)): [int(c) for c in v] for i, j, v in params["brackets"]}
            ring = LieRing(m, int(params["dim"]), br)
        return lazard(ring)
    raise KeyError(family)
