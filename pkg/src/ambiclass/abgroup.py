"""Finite abelian groups in invariant-factor form.

Everything is driven by a Smith normal form over Python integers.  Groups
are immutable; elements are plain tuples of ints, component ``i`` reduced
modulo the ``i``-th invariant factor.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

Matrix = list[list[int]]
Element = tuple[int, ...]


class InfiniteQuotient(ValueError):
    pass


class InvalidElement(ValueError):
    pass


class IllFormedHom(ValueError):
    pass


class NotExact(ValueError):
    pass


class NotCommutative(ValueError):
    pass


def identity_matrix(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(x: Matrix, y: Matrix) -> Matrix:
    if not x:
        return []
    cols = len(y[0]) if y else 0
    return [
        [sum(row[k] * y[k][j] for k in range(len(y))) for j in range(cols)]
        for row in x
    ]


def determinant(m: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(m)
    if n == 0:
        return 1
    a = [row[:] for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _xgcd(p: int, q: int) -> tuple[int, int, int]:
    """(g, x, y) with g = x p + y q = gcd(p, q) > 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while q:
        k, r = divmod(p, q)
        p, q = q, r
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if p < 0:
        p, x0, y0 = -p, -x0, -y0
    return p, x0, y0


def _snf(m: Matrix, ncols: int) -> tuple[Matrix, Matrix, Matrix, Matrix]:
    """Return (U, D, V, V^-1) with U*M*V = D."""
    a = [list(map(int, row)) for row in m]
    rows = len(a)
    u = identity_matrix(rows)
    v = identity_matrix(ncols)
    vinv = identity_matrix(ncols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def combine_rows(i, j, x, y, z, w):
        # (row_i, row_j) <- (x row_i + y row_j, z row_i + w row_j), xw - yz = 1
        for mat in (a, u):
            ri, rj = mat[i], mat[j]
            mat[i] = [x * p + y * q for p, q in zip(ri, rj)]
            mat[j] = [z * p + w * q for p, q in zip(ri, rj)]

    def combine_cols(i, j, x, y, z, w):
        # (col_i, col_j) <- (x col_i + y col_j, z col_i + w col_j); V^-1 takes the inverse on rows
        for mat in (a, v):
            for row in mat:
                p, q = row[i], row[j]
                row[i], row[j] = x * p + y * q, z * p + w * q
        ri, rj = vinv[i], vinv[j]
        vinv[i] = [w * p - z * q for p, q in zip(ri, rj)]
        vinv[j] = [-y * p + x * q for p, q in zip(ri, rj)]

    def unimodular(p, q):
        # g = x p + y q, and (-q/g, p/g) completes a determinant-1 matrix
        if q % p == 0:
            return 1, 0, -q // p, 1
        g, x, y = _xgcd(p, q)
        return x, y, -q // g, p // g

    for t in range(min(rows, ncols)):
        pivot = None
        for i in range(t, rows):
            for j in range(t, ncols):
                if a[i][j] and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            for i in range(t + 1, rows):
                if a[i][t]:
                    combine_rows(t, i, *unimodular(a[t][t], a[i][t]))
            for j in range(t + 1, ncols):
                if a[t][j]:
                    combine_cols(t, j, *unimodular(a[t][t], a[t][j]))
            if any(a[i][t] for i in range(t + 1, rows)):
                continue
            p = a[t][t]
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, ncols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            combine_rows(t, bad, 1, 1, 0, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return u, a, v, vinv


def smith_normal_form(m: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``U * M * V = D`` of an integer matrix.

    ``D`` is diagonal with nonnegative entries, each dividing the next, and
    ``U``, ``V`` are unimodular.
    """
    ncols = len(m[0]) if m else 0
    u, d, v, _ = _snf(m, ncols)
    return u, d, v


def _diagonal(d: Matrix) -> list[int]:
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def integer_kernel(m: Matrix, nrows: int | None = None) -> Matrix:
    """Basis of the left kernel ``{x : x M = 0}`` of an integer matrix."""
    if not m:
        return identity_matrix(nrows or 0)
    ncols = len(m[0])
    if ncols == 0:
        return identity_matrix(len(m))
    u, d, _, _ = _snf(m, ncols)
    rank = sum(1 for x in _diagonal(d) if x)
    return [row[:] for row in u[rank:]]


@dataclass(frozen=True)
class FinAbGroup:
    """Z/d_1 x ... x Z/d_k with d_i | d_{i+1}; the empty tuple is the trivial group."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        factors = tuple(int(d) for d in self.invariant_factors if d != 1)
        for i, d in enumerate(factors):
            if d < 2:
                raise ValueError(f"invariant factor {d} is not >= 2")
            if i and d % factors[i - 1]:
                raise ValueError(f"divisibility chain broken: {factors}")
        object.__setattr__(self, "invariant_factors", factors)

    @classmethod
    def cyclic(cls, n: int) -> FinAbGroup:
        return cls((n,))

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> FinAbGroup:
        """Normalize a direct sum of cyclic groups of the given orders."""
        return cyclic_sum(orders).group

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def order(self) -> int:
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def __len__(self) -> int:
        return self.order

    @property
    def identity(self) -> Element:
        return (0,) * self.rank

    def generators(self) -> list[Element]:
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def reduce(self, x: Sequence[int]) -> Element:
        if len(x) != self.rank:
            raise InvalidElement(f"expected {self.rank} components, got {len(x)}")
        return tuple(xi % d for xi, d in zip(x, self.invariant_factors))

    def check(self, x: Sequence[int]) -> Element:
        x = tuple(x)
        if len(x) != self.rank or any(not 0 <= xi < d for xi, d in zip(x, self.invariant_factors)):
            raise InvalidElement(f"{x} is not a reduced element of {self}")
        return x

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def neg(self, x: Element) -> Element:
        return tuple(-a % d for a, d in zip(x, self.invariant_factors))

    def mul(self, k: int, x: Element) -> Element:
        return tuple(k * a % d for a, d in zip(x, self.invariant_factors))

    def element_order(self, x: Element) -> int:
        from math import gcd, lcm

        n = 1
        for a, d in zip(x, self.invariant_factors):
            n = lcm(n, d // gcd(a, d))
        return n

    def elements(self) -> Iterator[Element]:
        def rec(i):
            if i == self.rank:
                yield ()
                return
            for rest in rec(i + 1):
                for a in range(self.invariant_factors[i]):
                    yield (a,) + rest

        return rec(0)

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "1"
        return " x ".join(f"Z/{d}" for d in self.invariant_factors)


@dataclass(frozen=True)
class QuotientMap:
    """Projection ``Z^n -> Z^n / <relations>`` onto a normalized FinAbGroup."""

    n: int
    group: FinAbGroup
    _v: Matrix = field(repr=False)
    _vinv: Matrix = field(repr=False)
    _keep: tuple[int, ...] = field(repr=False)

    def __call__(self, x: Sequence[int]) -> Element:
        if len(x) != self.n:
            raise InvalidElement(f"expected a vector of length {self.n}")
        y = [sum(x[i] * self._v[i][j] for i in range(self.n)) for j in self._keep]
        return self.group.reduce(y)

    def lift(self, e: Element) -> list[int]:
        """Some preimage in Z^n of a group element."""
        e = self.group.check(e)
        y = [0] * self.n
        for j, c in zip(self._keep, e):
            y[j] = c
        return [sum(y[j] * self._vinv[j][i] for j in range(self.n)) for i in range(self.n)]


def presentation(n: int, relations: Sequence[Sequence[int]]) -> QuotientMap:
    """Quotient of Z^n by the row span of ``relations``.

    Raises InfiniteQuotient when the relations have rank < n.
    """
    rels = [list(r) for r in relations]
    for r in rels:
        if len(r) != n:
            raise ValueError(f"relation {r} does not have {n} entries")
    if n == 0:
        return QuotientMap(0, FinAbGroup(), [], [], ())
    if not rels:
        raise InfiniteQuotient(f"no relations on {n} generators")
    _, d, v, vinv = _snf(rels, n)
    diag = _diagonal(d) + [0] * max(0, n - len(rels))
    if any(x == 0 for x in diag[:n]):
        raise InfiniteQuotient(f"relation matrix has rank < {n}")
    keep = tuple(j for j in range(n) if diag[j] != 1)
    group = FinAbGroup(tuple(diag[j] for j in keep))
    return QuotientMap(n, group, v, vinv, keep)


def group_from_relations(n: int, relations: Sequence[Sequence[int]]) -> FinAbGroup:
    return presentation(n, relations).group


def cyclic_sum(orders: Sequence[int]) -> QuotientMap:
    """Z/o_1 x ... x Z/o_k, normalized; ``q(e_i)`` is the image of the i-th summand generator."""
    k = len(orders)
    return presentation(k, [[o if i == j else 0 for j in range(k)] for i, o in enumerate(orders)])


def _relation_rows(g: FinAbGroup) -> Matrix:
    k = g.rank
    return [[d if i == j else 0 for j in range(k)] for i, d in enumerate(g.invariant_factors)]


@dataclass(frozen=True)
class GroupHom:
    source: FinAbGroup
    target: FinAbGroup
    images: tuple[Element, ...]

    def __post_init__(self):
        if len(self.images) != self.source.rank:
            raise IllFormedHom("need one image per source generator")
        try:
            images = tuple(self.target.reduce(img) for img in self.images)
        except InvalidElement as exc:
            raise IllFormedHom(str(exc)) from None
        for d, img in zip(self.source.invariant_factors, images):
            if self.target.mul(d, img) != self.target.identity:
                raise IllFormedHom(f"order {d} generator sent to {img}, which does not have order dividing {d}")
        object.__setattr__(self, "images", images)

    def __call__(self, x: Element) -> Element:
        x = self.source.check(x)
        out = self.target.identity
        for c, img in zip(x, self.images):
            out = self.target.add(out, self.target.mul(c, img))
        return out

    def then(self, other: GroupHom) -> GroupHom:
        """``other o self``."""
        if other.source != self.target:
            raise IllFormedHom("cannot compose: codomain/domain mismatch")
        return GroupHom(self.source, other.target, tuple(other(img) for img in self.images))

    @classmethod
    def identity(cls, g: FinAbGroup) -> GroupHom:
        return cls(g, g, tuple(g.generators()))

    @classmethod
    def zero(cls, src: FinAbGroup, dst: FinAbGroup) -> GroupHom:
        return cls(src, dst, (dst.identity,) * src.rank)


@dataclass(frozen=True)
class Subgroup:
    ambient: FinAbGroup
    gens: tuple[Element, ...]
    group: FinAbGroup
    inclusion: GroupHom
    _v: Matrix = field(repr=False)
    _diag: tuple[int, ...] = field(repr=False)

    @property
    def order(self) -> int:
        return self.group.order

    def contains(self, x: Sequence[int]) -> bool:
        x = self.ambient.check(x)
        k = self.ambient.rank
        y = [sum(x[i] * self._v[i][j] for i in range(k)) for j in range(k)]
        return all(yj % dj == 0 for yj, dj in zip(y, self._diag))

    __contains__ = contains

    def elements(self) -> list[Element]:
        return sorted({self.inclusion(e) for e in self.group.elements()})


def subgroup_generated(g: FinAbGroup, gens: Sequence[Sequence[int]]) -> Subgroup:
    """Subgroup of ``g`` generated by ``gens``, with its abstract structure and a membership test."""
    gens = tuple(g.check(x) for x in gens)
    k, s = g.rank, len(gens)
    lattice = [list(x) for x in gens] + _relation_rows(g)
    if k == 0:
        trivial = FinAbGroup()
        return Subgroup(g, gens, trivial, GroupHom.zero(trivial, g), [], ())
    _, d, v, _ = _snf(lattice, k)
    diag = tuple(_diagonal(d))
    kernel = integer_kernel(lattice)
    rels = [row[:s] for row in kernel]
    q = presentation(s, rels) if s else presentation(0, [])
    images = []
    for e in q.group.generators():
        coeffs = q.lift(e)
        img = g.identity
        for c, x in zip(coeffs, gens):
            img = g.add(img, g.mul(c, x))
        images.append(img)
    inclusion = GroupHom(q.group, g, tuple(images))
    return Subgroup(g, gens, q.group, inclusion, v, diag)


def quotient(g: FinAbGroup, gens: Sequence[Sequence[int]]) -> QuotientMap:
    """Projection ``g -> g / <gens>``; the map takes reduced elements of ``g``."""
    gens = [list(g.check(x)) for x in gens]
    return presentation(g.rank, _relation_rows(g) + gens)


def quotient_hom(g: FinAbGroup, gens: Sequence[Sequence[int]]) -> GroupHom:
    q = quotient(g, gens)
    return GroupHom(g, q.group, tuple(q(x) for x in g.generators()))


class HomAnalysis(NamedTuple):
    kernel: Subgroup
    image: Subgroup
    cokernel: FinAbGroup


def analyze_hom(f: GroupHom) -> HomAnalysis:
    """Kernel, image and cokernel of a homomorphism."""
    src, dst = f.source, f.target
    image = subgroup_generated(dst, f.images)
    cokernel = quotient(dst, f.images).group
    lattice = [list(img) for img in f.images] + _relation_rows(dst)
    if dst.rank == 0:
        kgens = src.generators()
    else:
        kgens = [src.reduce(row[: src.rank]) for row in integer_kernel(lattice)]
    kernel = subgroup_generated(src, kgens)
    return HomAnalysis(kernel, image, cokernel)


def generalized_index(f: GroupHom) -> Fraction:
    """``#coker f / #ker f``; equals the subgroup index when ``f`` is injective."""
    a = analyze_hom(f)
    return Fraction(a.cokernel.order, a.kernel.order)


class DirectProduct(NamedTuple):
    group: FinAbGroup
    incl_left: GroupHom
    incl_right: GroupHom
    proj_left: GroupHom
    proj_right: GroupHom


def direct_product(g: FinAbGroup, h: FinAbGroup) -> DirectProduct:
    orders = list(g.invariant_factors) + list(h.invariant_factors)
    q = cyclic_sum(orders)
    p = q.group
    kg = g.rank
    units = identity_matrix(len(orders))
    incl_left = GroupHom(g, p, tuple(q(units[i]) for i in range(kg)))
    incl_right = GroupHom(h, p, tuple(q(units[kg + i]) for i in range(h.rank)))
    lifts = [q.lift(e) for e in p.generators()]
    proj_left = GroupHom(p, g, tuple(g.reduce(x[:kg]) for x in lifts))
    proj_right = GroupHom(p, h, tuple(h.reduce(x[kg:]) for x in lifts))
    return DirectProduct(p, incl_left, incl_right, proj_left, proj_right)


def _is_zero(f: GroupHom) -> bool:
    return all(img == f.target.identity for img in f.images)


@dataclass(frozen=True)
class IndexDiagram:
    """Two short exact rows ``A -> B -> C`` and ``A' -> B' -> C'`` with vertical maps."""

    f: GroupHom
    g: GroupHom
    f2: GroupHom
    g2: GroupHom
    alpha: GroupHom
    beta: GroupHom
    gamma: GroupHom


@dataclass(frozen=True)
class IndexLemmaReport:
    ker_orders: tuple[int, int, int]
    coker_orders: tuple[int, int, int]
    index_a: Fraction
    index_b: Fraction
    index_c: Fraction

    @property
    def holds(self) -> bool:
        return self.index_b == self.index_a * self.index_c


def _check_row(f: GroupHom, g: GroupHom, name: str) -> None:
    if f.target != g.source:
        raise NotExact(f"{name}: maps are not composable")
    if analyze_hom(f).kernel.order != 1:
        raise NotExact(f"{name}: first map is not injective")
    gk = analyze_hom(g)
    if gk.cokernel.order != 1:
        raise NotExact(f"{name}: second map is not surjective")
    if not _is_zero(f.then(g)) or analyze_hom(f).image.order != gk.kernel.order:
        raise NotExact(f"{name}: not exact in the middle")


def check_index_lemma(d: IndexDiagram) -> IndexLemmaReport:
    """Verify ``(B':B) = (A':A)(C':C)`` with indices taken as ``#coker/#ker``."""
    _check_row(d.f, d.g, "top row")
    _check_row(d.f2, d.g2, "bottom row")
    if d.f.then(d.beta) != d.alpha.then(d.f2):
        raise NotCommutative("left square does not commute")
    if d.g.then(d.gamma) != d.beta.then(d.g2):
        raise NotCommutative("right square does not commute")
    ha, hb, hc = (analyze_hom(m) for m in (d.alpha, d.beta, d.gamma))
    kers = (ha.kernel.order, hb.kernel.order, hc.kernel.order)
    cokers = (ha.cokernel.order, hb.cokernel.order, hc.cokernel.order)
    ia, ib, ic = (Fraction(c, k) for c, k in zip(cokers, kers))
    return IndexLemmaReport(kers, cokers, ia, ib, ic)


def _random_orders(rng: random.Random, budget: int) -> list[int]:
    orders = []
    for _ in range(rng.randint(0, 3)):
        o = rng.randint(2, 8)
        if o > budget:
            break
        orders.append(o)
        budget //= o
    return orders


def _vertical(rng: random.Random, orders: list[int], injective: bool) -> GroupHom:
    # Z/o_i -> Z/(o_i k_i), multiplication by k_i (by k_i m_i when non-injective), plus extra summands
    src = cyclic_sum(orders)
    scales = [rng.randint(1, 3) for _ in orders]
    big = [o * k for o, k in zip(orders, scales)]
    q = cyclic_sum(big + _random_orders(rng, 8))
    units = identity_matrix(q.n)
    summand_images = []
    for i, k in enumerate(scales):
        m = 1 if injective else rng.choice([1, 1, 2, 3])
        summand_images.append(q([k * m * x for x in units[i]]))
    images = []
    for e in src.group.generators():
        img = q.group.identity
        for c, s_img in zip(src.lift(e), summand_images):
            img = q.group.add(img, q.group.mul(c, s_img))
        images.append(img)
    return GroupHom(src.group, q.group, tuple(images))


def random_diagram(rng: random.Random, max_order: int = 2**12, injective: bool = True) -> IndexDiagram:
    """Random commutative diagram with split exact rows and ``#B' <= max_order``."""
    while True:
        alpha = _vertical(rng, _random_orders(rng, 64), injective)
        gamma = _vertical(rng, _random_orders(rng, 64), injective)
        if alpha.target.order * gamma.target.order <= max_order:
            break
    top = direct_product(alpha.source, gamma.source)
    bottom = direct_product(alpha.target, gamma.target)
    beta_images = tuple(
        bottom.group.add(
            bottom.incl_left(alpha(top.proj_left(b))),
            bottom.incl_right(gamma(top.proj_right(b))),
        )
        for b in top.group.generators()
    )
    beta = GroupHom(top.group, bottom.group, beta_images)
    return IndexDiagram(
        f=top.incl_left,
        g=top.proj_right,
        f2=bottom.incl_left,
        g2=bottom.proj_right,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
    )
