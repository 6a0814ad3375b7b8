"""Exact integer matrices and finitely generated abelian groups.

An :class:`FgAb` is stored in invariant-factor form ``d_1 | d_2 | ... | d_k``
(each > 1) followed by zeros for the free rank.  Elements are tuples of
Python ints, one coordinate per factor, reduced modulo the factor (free
coordinates are left alone).  Everything is computed with unbounded ints;
no fixed-width arithmetic touches a reduction.

Quotients are built through :func:`present`, which returns a
:class:`Cokernel`: the canonical group together with the projection from
the ambient lattice and a section back into it.  Maps out of a quotient are
made with :meth:`Cokernel.induced_map`, which refuses images that do not
kill the relations.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd, prod
from typing import Iterable, Iterator, Sequence

from .errors import CapExceeded, InvalidInput

ENUM_CAP = 10**6

Vector = tuple[int, ...]
Matrix = list[list[int]]


# ---------------------------------------------------------------------------
# integer matrices


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def transpose(A: Matrix, rows: int | None = None) -> Matrix:
    if not A:
        return [[] for _ in range(rows or 0)]
    return [list(col) for col in zip(*A)]


def det(M: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


@dataclass(frozen=True)
class SmithForm:
    """``S = U * M * V`` with ``S`` diagonal; ``U_inv`` is the inverse of ``U``."""

    U: Matrix
    S: Matrix
    V: Matrix
    U_inv: Matrix

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i][i] for i in range(min(len(self.S), len(self.S[0]) if self.S else 0))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    @property
    def invariant_factors(self) -> list[int]:
        return [d for d in self.diagonal if d]


def smith(M: Matrix, rows: int | None = None, cols: int | None = None) -> SmithForm:
    """Smith normal form with unimodular transforms.

    ``rows``/``cols`` give the shape when ``M`` is empty.
    """
    m = len(M) if rows is None else rows
    n = (len(M[0]) if M else 0) if cols is None else cols
    A = [list(map(int, r)) for r in M] if M else [[0] * n for _ in range(m)]
    U = identity(m)
    Ui = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q == 0:
            return
        rd, rs = A[dst], A[src]
        for k in range(n):
            rd[k] += q * rs[k]
        ud, us = U[dst], U[src]
        for k in range(m):
            ud[k] += q * us[k]
        for r in Ui:
            r[src] -= q * r[dst]

    def add_col(dst, src, q):
        if q == 0:
            return
        for r in A:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest nonzero of row/col t onto the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(i, t)
                if j != t:
                    swap_cols(j, t)
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
            for r in Ui:
                r[t] = -r[t]
        t += 1
    return SmithForm(U, A, V, Ui)


def integer_kernel(M: Matrix, cols: int) -> list[Vector]:
    """Basis of ``{x in Z^cols : M x = 0}``."""
    if not M:
        return [tuple(int(i == j) for j in range(cols)) for i in range(cols)]
    sf = smith(M, len(M), cols)
    r = sf.rank
    return [tuple(sf.V[i][j] for i in range(cols)) for j in range(r, cols)]


# ---------------------------------------------------------------------------
# lattices in Z^n kept in Hermite form


class Lattice:
    """Sublattice of ``Z^dim`` stored as a row-echelon (Hermite) basis."""

    def __init__(self, dim: int, vectors: Iterable[Sequence[int]] = ()):
        self.dim = dim
        self._rows: dict[int, list[int]] = {}
        for k, v in enumerate(vectors):
            self.add(v)
            if k % 64 == 63:
                self._reduce()
        self._reduce()

    def add(self, vec: Sequence[int]) -> None:
        v = [int(x) for x in vec]
        if len(v) != self.dim:
            raise ValueError("vector has wrong length")
        rows = self._rows
        for col in range(self.dim):
            b = v[col]
            if b == 0:
                continue
            p = rows.get(col)
            if p is None:
                if b < 0:
                    v = [-x for x in v]
                rows[col] = v
                return
            a = p[col]
            if b % a == 0:
                q = b // a
                for k in range(col, self.dim):
                    v[k] -= q * p[k]
            else:
                g, s, t = xgcd(a, b)
                ag, bg = a // g, b // g
                newp = [s * p[k] + t * v[k] for k in range(self.dim)]
                v = [bg * p[k] - ag * v[k] for k in range(self.dim)]
                rows[col] = newp

    def _reduce(self) -> None:
        cols = sorted(self._rows)
        for c in cols:
            pr = self._rows[c]
            piv = pr[c]
            for c2 in cols:
                if c2 >= c:
                    break
                r = self._rows[c2]
                q = r[c] // piv
                if q:
                    for k in range(c, self.dim):
                        r[k] -= q * pr[k]

    @property
    def basis(self) -> list[Vector]:
        self._reduce()
        return [tuple(self._rows[c]) for c in sorted(self._rows)]

    @property
    def pivots(self) -> list[int]:
        return sorted(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def __contains__(self, vec: Sequence[int]) -> bool:
        v = [int(x) for x in vec]
        for col in range(self.dim):
            b = v[col]
            if b == 0:
                continue
            p = self._rows.get(col)
            if p is None or b % p[col]:
                return False
            q = b // p[col]
            for k in range(col, self.dim):
                v[k] -= q * p[k]
        return True

    def index(self) -> int:
        """``[Z^dim : L]``; 0 when the lattice is not of full rank."""
        if self.rank < self.dim:
            return 0
        return prod(self._rows[c][c] for c in self._rows)


# ---------------------------------------------------------------------------
# finitely generated abelian groups


@dataclass(frozen=True)
class FgAb:
    factors: tuple[int, ...]

    def __post_init__(self):
        fs = tuple(int(d) for d in self.factors)
        object.__setattr__(self, "factors", fs)
        seen_zero = False
        prev = 1
        for d in fs:
            if d < 0 or d == 1:
                raise InvalidInput(f"invalid invariant factor {d}", fs)
            if d == 0:
                seen_zero = True
                continue
            if seen_zero or d % prev:
                raise InvalidInput(f"factors {fs} violate the divisibility chain", fs)
            prev = d

    @classmethod
    def free(cls, r: int) -> "FgAb":
        return cls((0,) * r)

    @classmethod
    def cyclic(cls, n: int) -> "FgAb":
        return cls(() if n == 1 else (n,))

    @property
    def ngens(self) -> int:
        return len(self.factors)

    @property
    def is_finite(self) -> bool:
        return 0 not in self.factors

    @property
    def order(self) -> int | None:
        """Group order, or None for an infinite group."""
        return prod(self.factors) if self.is_finite else None

    @property
    def free_rank(self) -> int:
        return self.factors.count(0)

    @property
    def zero(self) -> Vector:
        return (0,) * len(self.factors)

    def reduce(self, v: Sequence[int]) -> Vector:
        if len(v) != len(self.factors):
            raise ValueError(f"element {tuple(v)} does not fit {self}")
        return tuple(int(x) % d if d else int(x) for x, d in zip(v, self.factors))

    def add(self, x: Sequence[int], y: Sequence[int]) -> Vector:
        return tuple((a + b) % d if d else a + b for a, b, d in zip(x, y, self.factors))

    def neg(self, x: Sequence[int]) -> Vector:
        return tuple((-a) % d if d else -a for a, d in zip(x, self.factors))

    def sub(self, x: Sequence[int], y: Sequence[int]) -> Vector:
        return self.add(x, self.neg(y))

    def scale(self, k: int, x: Sequence[int]) -> Vector:
        return self.reduce([k * a for a in x])

    def sum(self, xs: Iterable[Sequence[int]]) -> Vector:
        acc = [0] * len(self.factors)
        for x in xs:
            for i, a in enumerate(x):
                acc[i] += a
        return self.reduce(acc)

    def gens(self) -> list[Vector]:
        n = len(self.factors)
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]

    def _require_enumerable(self) -> int:
        if not self.is_finite:
            raise CapExceeded(f"{self} is infinite and cannot be enumerated")
        n = self.order
        if n > ENUM_CAP:
            raise CapExceeded(f"{self} has order {n} > {ENUM_CAP}")
        return n

    def elements(self) -> Iterator[Vector]:
        """All elements in mixed-radix order (first coordinate fastest)."""
        n = self._require_enumerable()
        for i in range(n):
            yield self.element(i)

    def index(self, x: Sequence[int]) -> int:
        idx, w = 0, 1
        for a, d in zip(self.reduce(x), self.factors):
            idx += a * w
            w *= d
        return idx

    def element(self, i: int) -> Vector:
        out = []
        for d in self.factors:
            i, r = divmod(i, d)
            out.append(r)
        return tuple(out)

    def element_order(self, x: Sequence[int]) -> int | None:
        o = 1
        for a, d in zip(self.reduce(x), self.factors):
            if d == 0:
                if a:
                    return None
                continue
            o = o * (d // gcd(a, d)) // gcd(o, d // gcd(a, d))
        return o

    def __str__(self) -> str:
        if not self.factors:
            return "0"
        return " + ".join("Z" if d == 0 else f"Z/{d}" for d in self.factors)


# ---------------------------------------------------------------------------
# quotients of Z^n


class Cokernel:
    """``Z^n / <relations>`` in canonical form, with projection and section."""

    def __init__(self, ambient_rank: int, relations: Iterable[Sequence[int]]):
        self.ambient_rank = n = ambient_rank
        lat = Lattice(n, relations)
        self.relations: list[Vector] = lat.basis
        self.lattice = lat
        r = len(self.relations)
        if n == 0:
            self.group = FgAb(())
            self._proj_rows: list[list[int]] = []
            self._lift_cols: list[list[int]] = []
            return
        M = [[self.relations[j][i] for j in range(r)] for i in range(n)]
        sf = smith(M, n, r)
        diag = sf.diagonal + [0] * (n - min(n, r))
        keep = [i for i in range(n) if diag[i] != 1]
        self.group = FgAb(tuple(diag[i] for i in keep))
        self._proj_rows = [sf.U[i] for i in keep]
        self._lift_cols = [[sf.U_inv[k][i] for k in range(n)] for i in keep]
        self.smith_form = sf

    def project(self, v: Sequence[int]) -> Vector:
        return self.group.reduce([sum(a * b for a, b in zip(row, v)) for row in self._proj_rows])

    def lift(self, x: Sequence[int]) -> Vector:
        out = [0] * self.ambient_rank
        for c, col in zip(x, self._lift_cols):
            if c:
                for k in range(self.ambient_rank):
                    out[k] += c * col[k]
        return tuple(out)

    def unit(self, j: int) -> Vector:
        return self.project([int(k == j) for k in range(self.ambient_rank)])

    def induced_map(self, images: Sequence[Sequence[int]], codomain: FgAb) -> "AbMap":
        """The map out of the quotient sending the j-th ambient basis vector to ``images[j]``.

        Raises InvalidInput if some relation is not killed.
        """
        if len(images) != self.ambient_rank:
            raise ValueError("need one image per ambient basis vector")
        imgs = [codomain.reduce(x) for x in images]
        for rel in self.relations:
            val = codomain.sum(codomain.scale(c, imgs[j]) for j, c in enumerate(rel) if c)
            if val != codomain.zero:
                raise InvalidInput("map does not kill a defining relation", {"relation": rel, "value": val})
        cols = []
        for col in self._lift_cols:
            cols.append(codomain.sum(codomain.scale(c, imgs[j]) for j, c in enumerate(col) if c))
        return AbMap(self.group, codomain, tuple(cols))


def present(ambient_rank: int, relations: Iterable[Sequence[int]]) -> Cokernel:
    return Cokernel(ambient_rank, relations)


def cokernel(M: Matrix, rows: int | None = None) -> Cokernel:
    """Cokernel of the integer matrix ``M`` (columns are relations in ``Z^rows``)."""
    n = len(M) if rows is None else rows
    cols = len(M[0]) if M else 0
    return Cokernel(n, [[M[i][j] for i in range(n)] for j in range(cols)])


# ---------------------------------------------------------------------------
# homomorphisms and subgroups


@dataclass(frozen=True, eq=False)
class AbMap:
    """Homomorphism given by the images of the domain generators."""

    domain: FgAb
    codomain: FgAb
    images: tuple[Vector, ...]

    def __post_init__(self):
        if len(self.images) != self.domain.ngens:
            raise ValueError("need one image per domain generator")
        imgs = tuple(self.codomain.reduce(x) for x in self.images)
        object.__setattr__(self, "images", imgs)
        for i, (d, x) in enumerate(zip(self.domain.factors, imgs)):
            if d and self.codomain.scale(d, x) != self.codomain.zero:
                raise InvalidInput(
                    f"generator {i} of order {d} maps to an element whose order does not divide it",
                    {"generator": i, "image": x},
                )

    @classmethod
    def zero(cls, A: FgAb, B: FgAb) -> "AbMap":
        return cls(A, B, tuple(B.zero for _ in range(A.ngens)))

    @classmethod
    def identity(cls, A: FgAb) -> "AbMap":
        return cls(A, A, tuple(A.gens()))

    @property
    def matrix(self) -> Matrix:
        """Codomain-rank x domain-rank integer matrix (columns are images)."""
        return [[x[i] for x in self.images] for i in range(self.codomain.ngens)]

    def __call__(self, x: Sequence[int]) -> Vector:
        return self.codomain.sum(self.codomain.scale(c, img) for c, img in zip(x, self.images) if c)

    def __matmul__(self, other: "AbMap") -> "AbMap":
        if other.codomain != self.domain:
            raise ValueError("maps are not composable")
        return AbMap(other.domain, self.codomain, tuple(self(x) for x in other.images))

    def __add__(self, other: "AbMap") -> "AbMap":
        self._same_shape(other)
        return AbMap(self.domain, self.codomain,
                     tuple(self.codomain.add(x, y) for x, y in zip(self.images, other.images)))

    def __neg__(self) -> "AbMap":
        return AbMap(self.domain, self.codomain, tuple(self.codomain.neg(x) for x in self.images))

    def __sub__(self, other: "AbMap") -> "AbMap":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbMap):
            return NotImplemented
        return (self.domain, self.codomain, self.images) == (other.domain, other.codomain, other.images)

    __hash__ = None

    def _same_shape(self, other):
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise ValueError("maps have different domain or codomain")

    def kernel(self) -> "AbSub":
        return kernel(self)

    def image(self) -> "AbSub":
        return image(self)

    def is_injective(self) -> bool:
        return kernel(self).is_trivial()

    def is_surjective(self) -> bool:
        return image(self).is_whole()

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()


class AbSub:
    """Subgroup of an FgAb given by generators, with a Hermite lattice basis."""

    def __init__(self, ambient: FgAb, generators: Iterable[Sequence[int]]):
        self.ambient = ambient
        self.generators: tuple[Vector, ...] = tuple(ambient.reduce(g) for g in generators)

    @cached_property
    def lattice(self) -> Lattice:
        n = self.ambient.ngens
        rels = [tuple(d if i == j else 0 for j in range(n)) for i, d in enumerate(self.ambient.factors) if d]
        return Lattice(n, list(self.generators) + rels)

    def __contains__(self, x: Sequence[int]) -> bool:
        return tuple(x) in self.lattice

    def contains_sub(self, other: "AbSub") -> bool:
        return all(g in self for g in other.generators)

    def __eq__(self, other) -> bool:
        if not isinstance(other, AbSub):
            return NotImplemented
        return sub_equal(self, other)

    __hash__ = None

    def is_trivial(self) -> bool:
        z = self.ambient.zero
        return all(g == z for g in self.generators)

    def is_whole(self) -> bool:
        return all(g in self for g in self.ambient.gens())

    def index(self) -> int | None:
        """``[A : S]``, or None when infinite."""
        q = self.quotient().group
        return q.order

    def order(self) -> int | None:
        if self.ambient.is_finite:
            # the lattice contains d_i e_i, so its index in Z^n is [A : S]
            return self.ambient.order // self.lattice.index()
        return self.as_fgab()[0].order

    def quotient(self) -> Cokernel:
        """``ambient / self`` in canonical form (projection from ambient coordinates)."""
        return present(self.ambient.ngens, self.lattice.basis)

    def as_fgab(self) -> tuple[FgAb, AbMap]:
        """The subgroup as an abstract FgAb together with its inclusion map."""
        A = self.ambient
        gens = list(self.generators)
        s, n = len(gens), A.ngens
        if s == 0:
            K = FgAb(())
            return K, AbMap(K, A, ())
        # [V | D] (x, y) = 0  ->  relations among generators
        M = [[gens[j][i] for j in range(s)] + [A.factors[i] if i == k else 0 for k in range(n)] for i in range(n)]
        rels = [v[:s] for v in integer_kernel(M, s + n)]
        cok = present(s, rels)
        imgs = []
        for col in cok._lift_cols:
            imgs.append(A.sum(A.scale(c, gens[j]) for j, c in enumerate(col) if c))
        return cok.group, AbMap(cok.group, A, tuple(imgs))

    def elements(self) -> list[Vector]:
        K, inc = self.as_fgab()
        return sorted({inc(x) for x in K.elements()}, key=self.ambient.index)


def sub_equal(S1: AbSub, S2: AbSub) -> bool:
    if S1.ambient != S2.ambient:
        raise ValueError("subgroups live in different ambient groups")
    return S1.contains_sub(S2) and S2.contains_sub(S1)


def kernel(f: AbMap) -> AbSub:
    A, C = f.domain, f.codomain
    m, k = A.ngens, C.ngens
    if k == 0:
        return AbSub(A, A.gens())
    M = [[f.images[j][i] for j in range(m)] + [C.factors[i] if i == t else 0 for t in range(k)] for i in range(k)]
    return AbSub(A, [v[:m] for v in integer_kernel(M, m + k)])


def image(f: AbMap) -> AbSub:
    return AbSub(f.codomain, f.images)


# ---------------------------------------------------------------------------
# constructions


class TensorSquare:
    """``A (x) A`` presented on the symbols ``e_i (x) e_j`` (ambient index ``i*n + j``)."""

    def __init__(self, A: FgAb):
        self.base = A
        n = self.n = A.ngens
        rels = []
        for i in range(n):
            for j in range(n):
                g = gcd(A.factors[i], A.factors[j])
                if g:
                    rels.append(tuple(g if k == i * n + j else 0 for k in range(n * n)))
        self.presentation = present(n * n, rels)
        self.group = self.presentation.group

    def ambient(self, a: Sequence[int], b: Sequence[int]) -> list[int]:
        n = self.n
        return [a[i] * b[j] for i in range(n) for j in range(n)]

    def tens(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        return self.presentation.project(self.ambient(a, b))

    def symbol(self, i: int, j: int) -> Vector:
        return self.presentation.unit(i * self.n + j)

    def induced_map(self, pairing, codomain: FgAb) -> AbMap:
        """Map ``e_i (x) e_j -> pairing(i, j)``; relations are checked."""
        n = self.n
        return self.presentation.induced_map([pairing(i, j) for i in range(n) for j in range(n)], codomain)


def tensor_square(A: FgAb) -> TensorSquare:
    return TensorSquare(A)


class ExteriorSquare:
    """``A ^ A = (A (x) A) / <e_i(x)e_i, e_i(x)e_j + e_j(x)e_i>`` with ``l2`` and the wedge projection."""

    def __init__(self, A: FgAb, tensor: TensorSquare | None = None):
        self.base = A
        self.tensor = T = tensor or TensorSquare(A)
        n = self.n = A.ngens
        N = n * n
        rels = list(T.presentation.relations)
        for i in range(n):
            rels.append(tuple(int(k == i * n + i) for k in range(N)))
            for j in range(i + 1, n):
                rels.append(tuple(int(k in (i * n + j, j * n + i)) for k in range(N)))
        self.presentation = present(N, rels)
        self.group = self.presentation.group
        self.wedge_projection = T.presentation.induced_map(
            [self.presentation.unit(k) for k in range(N)], self.group)
        alt = []
        for i in range(n):
            for j in range(n):
                v = [0] * N
                v[i * n + j] += 1
                v[j * n + i] -= 1
                alt.append(T.presentation.project(v))
        self.l2 = self.presentation.induced_map(alt, T.group)

    def wedge(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        return self.presentation.project(self.tensor.ambient(a, b))

    def induced_map(self, pairing, codomain: FgAb) -> AbMap:
        n = self.n
        return self.presentation.induced_map([pairing(i, j) for i in range(n) for j in range(n)], codomain)


def exterior_square(A: FgAb, tensor: TensorSquare | None = None) -> ExteriorSquare:
    return ExteriorSquare(A, tensor)


class DirectSum:
    def __init__(self, *summands: FgAb):
        self.summands = summands
        offs = [0]
        for A in summands:
            offs.append(offs[-1] + A.ngens)
        N = offs[-1]
        self._offsets = offs
        rels = []
        for s, A in enumerate(summands):
            for i, d in enumerate(A.factors):
                if d:
                    rels.append(tuple(d if k == offs[s] + i else 0 for k in range(N)))
        self.presentation = P = present(N, rels)
        self.group = P.group
        self.inclusions = [
            AbMap(A, self.group, tuple(P.unit(offs[s] + i) for i in range(A.ngens)))
            for s, A in enumerate(summands)
        ]
        self.projections = []
        for s, A in enumerate(summands):
            imgs = [A.zero] * N
            for i in range(A.ngens):
                imgs[offs[s] + i] = A.gens()[i]
            self.projections.append(P.induced_map(imgs, A))

    def pack(self, *parts: Sequence[int]) -> Vector:
        v = []
        for p in parts:
            v.extend(p)
        return self.presentation.project(v)


def direct_sum(*summands: FgAb) -> DirectSum:
    return DirectSum(*summands)


def tuple_map(sources: Sequence[AbMap], target: DirectSum) -> AbMap:
    """``x -> (f_1 x, ..., f_k x)`` into a direct sum."""
    out = target.inclusions[0] @ sources[0]
    for inc, f in zip(target.inclusions[1:], sources[1:]):
        out = out + inc @ f
    return out


def copair_map(maps: Sequence[AbMap], source: DirectSum) -> AbMap:
    """``(x_1, ..., x_k) -> f_1 x_1 + ... + f_k x_k`` out of a direct sum."""
    out = maps[0] @ source.projections[0]
    for f, p in zip(maps[1:], source.projections[1:]):
        out = out + f @ p
    return out
