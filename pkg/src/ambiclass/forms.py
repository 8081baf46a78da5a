"""Binary quadratic forms: reduction, composition and class groups.

Classes of forms of discriminant D stand in for ideal classes of the
maximal order.  For D > 0 the cycles of reduced forms are the narrow
classes; the wide class group is the narrow one modulo the class of
``-(principal form)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, isqrt

from .abgroup import Element, FinAbGroup, GroupHom, presentation, quotient
from .quadfield import (
    DiscriminantMismatch,
    OIdeal,
    _xgcd,
    validate_discriminant,
)


class ImprimitiveForm(ValueError):
    pass


@dataclass(frozen=True, order=True)
class QForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    def inverse(self) -> QForm:
        return QForm(self.a, -self.b, self.c)

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


def principal_form(delta: int) -> QForm:
    h = delta % 2
    return QForm(1, h, (h - delta) // 4)


def _check_disc(f: QForm, delta: int | None) -> int:
    d = f.disc
    if delta is not None and d != delta:
        raise DiscriminantMismatch(f"{f} has discriminant {d}, expected {delta}")
    return d


def _normalize_definite(a: int, b: int, c: int) -> tuple[int, int, int]:
    r = (a - b) // (2 * a)
    return a, b + 2 * r * a, a * r * r + b * r + c


def reduce_definite(f: QForm) -> QForm:
    """Unique reduced form properly equivalent to a positive definite ``f``."""
    if f.disc >= 0 or f.a <= 0:
        raise ValueError(f"{f} is not positive definite")
    a, b, c = _normalize_definite(f.a, f.b, f.c)
    while a > c or (a == c and b < 0):
        a, b, c = _normalize_definite(c, -b, a)
    return QForm(a, b, c)


def _is_reduced_indefinite(a: int, b: int, s: int) -> bool:
    # |sqrt(D) - 2|a|| < b < sqrt(D), with s = floor(sqrt(D)) and D not a square
    aa = abs(a)
    return 0 < b <= s and b + 2 * aa > s and 2 * aa - b <= s


def _rho(a: int, b: int, c: int, delta: int, s: int) -> tuple[int, int, int]:
    ac = abs(c)
    if ac <= s:
        nb = s - ((s + b) % (2 * ac))
    else:
        nb = -b % (2 * ac)
        if nb > ac:
            nb -= 2 * ac
    return c, nb, (nb * nb - delta) // (4 * c)


def reduce_indefinite(f: QForm) -> QForm:
    """Some reduced form properly equivalent to an indefinite ``f``."""
    delta = f.disc
    if delta <= 0:
        raise ValueError(f"{f} is not indefinite")
    s = isqrt(delta)
    a, b, c = f.a, f.b, f.c
    guard = 0
    while not _is_reduced_indefinite(a, b, s):
        a, b, c = _rho(a, b, c, delta, s)
        guard += 1
        if guard > 100000:
            raise RuntimeError(f"reduction of {f} did not terminate")
    return QForm(a, b, c)


def cycle(f: QForm) -> tuple[QForm, ...]:
    """The cycle of reduced forms of the class of ``f``, rotated to start at its minimum."""
    g = reduce_indefinite(f)
    delta = g.disc
    s = isqrt(delta)
    out = [g]
    a, b, c = g.a, g.b, g.c
    while True:
        a, b, c = _rho(a, b, c, delta, s)
        if (a, b, c) == (g.a, g.b, g.c):
            break
        out.append(QForm(a, b, c))
    i = out.index(min(out))
    return tuple(out[i:] + out[:i])


def reduce(f: QForm, delta: int | None = None):
    """Reduced representative (D < 0) or the full reduction cycle (D > 0)."""
    d = _check_disc(f, delta)
    return reduce_definite(f) if d < 0 else cycle(f)


def _positive_lead(f: QForm) -> QForm:
    """A properly equivalent form with a > 0."""
    if f.a > 0:
        return f
    if f.c > 0:
        return QForm(f.c, -f.b, f.a)
    # f(1, k) = a + b k + c k^2 as the new leading coefficient, via x -> x, y -> kx + y
    for k in range(1, 1000):
        for kk in (k, -k):
            lead = f.a + f.b * kk + f.c * kk * kk
            if lead > 0:
                # (x, y) -> (x, kk*x + y)
                return QForm(lead, f.b + 2 * f.c * kk, f.c)
    raise RuntimeError(f"no positive value found for {f}")


def compose(f: QForm, g: QForm) -> QForm:
    """A form in the product class (Dirichlet composition via united forms)."""
    if f.disc != g.disc:
        raise DiscriminantMismatch(f"{f} and {g} have different discriminants")
    if not (f.is_primitive and g.is_primitive):
        raise ImprimitiveForm(f"composition needs primitive forms, got {f}, {g}")
    delta = f.disc
    f1, f2 = _positive_lead(f), _positive_lead(g)
    if f1.a > f2.a:
        f1, f2 = f2, f1
    a1, b1 = f1.a, f1.b
    a2, b2, c2 = f2.a, f2.b, f2.c
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, y1, _ = _xgcd(a2, a1)
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, v = _xgcd(s, d)
        y2 = -v
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - delta) // (4 * a3)
    return QForm(a3, b3, c3)


def form_to_ideal(f: QForm) -> OIdeal:
    f = _positive_lead(f)
    return OIdeal(f.disc, 1, f.a, f.b)


def ideal_to_form(x: OIdeal) -> QForm:
    return QForm(x.a, x.b, x.c)


def reduced_forms(delta: int) -> list[QForm]:
    """All primitive reduced forms of discriminant delta."""
    out = []
    if delta < 0:
        amax = isqrt(-delta // 3)
        for a in range(1, amax + 1):
            for b in range(-a + 1, a + 1):
                if (b - delta) % 2:
                    continue
                num = b * b - delta
                if num % (4 * a):
                    continue
                c = num // (4 * a)
                if c < a or (c == a and b < 0):
                    continue
                if gcd(gcd(a, b), c) == 1:
                    out.append(QForm(a, b, c))
        return out
    s = isqrt(delta)
    for b in range(1, s + 1):
        if (b - delta) % 2:
            continue
        n = (delta - b * b) // 4  # = -a c
        lo = (s - b) // 2 + 1  # 2|a| > s - b
        hi = (s + b) // 2  # 2|a| - b <= s
        for aa in range(max(lo, 1), hi + 1):
            if n % aa:
                continue
            for a in (aa, -aa):
                c = -n // a
                if gcd(gcd(a, b), c) == 1:
                    out.append(QForm(a, b, c))
    return out


@dataclass
class ClassGroupData:
    delta: int
    narrow: FinAbGroup
    wide: FinAbGroup
    narrow_to_wide: GroupHom
    narrow_reps: dict[Element, QForm]
    wide_reps: dict[Element, QForm]
    _narrow_of_reduced: dict[QForm, Element] = field(repr=False)

    @property
    def h(self) -> int:
        return self.wide.order

    @property
    def h_narrow(self) -> int:
        return self.narrow.order

    def narrow_class_of(self, x) -> Element:
        f = ideal_to_form(x) if isinstance(x, OIdeal) else x
        _check_disc(f, self.delta)
        if self.delta < 0:
            key = reduce_definite(_positive_lead(f))
        else:
            key = reduce_indefinite(f)
        return self._narrow_of_reduced[key]

    def class_of(self, x) -> Element:
        """Wide class of a form or ideal."""
        return self.narrow_to_wide(self.narrow_class_of(x))

    def class_to_form(self, e: Element) -> QForm:
        return self.wide_reps[self.wide.check(e)]

    def class_to_ideal(self, e: Element) -> OIdeal:
        return form_to_ideal(self.class_to_form(e))

    def classes(self) -> list[Element]:
        return sorted(self.wide.elements())


def _build_group(keys: list, rep: dict, mult, identity_key):
    """Group structure on a finite set of classes by incremental generator search."""
    coords = {identity_key: []}
    ngens = 0
    relations: list[list[int]] = []
    for k in keys:
        if k in coords:
            continue
        # powers of the new generator until one falls in the current subgroup
        powers = [identity_key]
        cur = k
        while cur not in coords:
            powers.append(cur)
            cur = mult(cur, k)
        order = len(powers)
        rel = [-x for x in coords[cur]] + [0] * (ngens - len(coords[cur])) + [order]
        for row in relations:
            row.append(0)
        relations.append(rel)
        old = list(coords.items())
        for h_key, h_vec in old:
            h_vec += [0] * (ngens - len(h_vec))
            h_vec.append(0)
        for j in range(1, order):
            for h_key, h_vec in old:
                new = mult(h_key, powers[j]) if h_key != identity_key else powers[j]
                coords[new] = h_vec[:-1] + [j]
        ngens += 1
    for vec in coords.values():
        vec += [0] * (ngens - len(vec))
    q = presentation(ngens, relations)
    return q, coords


def class_group(delta) -> ClassGroupData:
    """Narrow and wide class groups of the maximal order of discriminant delta."""
    disc = validate_discriminant(int(delta))
    delta = disc.delta
    forms = reduced_forms(delta)
    if delta < 0:
        keys = sorted(forms)
        of_reduced = {f: f for f in forms}
        rep = {f: f for f in forms}

        def mult(x, y):
            return reduce_definite(compose(x, y))

        ident = reduce_definite(principal_form(delta))
    else:
        of_reduced = {}
        rep = {}
        keys = []
        for f in sorted(forms):
            if f in of_reduced:
                continue
            cyc = cycle(f)
            key = cyc[0]
            keys.append(key)
            rep[key] = min((g for g in cyc if g.a > 0), key=lambda g: (g.a, abs(g.b), g.b))
            for g in cyc:
                of_reduced[g] = key

        def mult(x, y):
            return of_reduced[reduce_indefinite(compose(rep[x], rep[y]))]

        ident = of_reduced[reduce_indefinite(principal_form(delta))]

    q, coords = _build_group(keys, rep, mult, ident)
    narrow = q.group
    elem_of_key = {k: q(v) for k, v in coords.items()}
    if len(elem_of_key) != len(keys):
        raise AssertionError("class enumeration and group construction disagree")
    narrow_of_reduced = {f: elem_of_key[k] for f, k in of_reduced.items()}
    narrow_reps = {elem_of_key[k]: rep[k] for k in keys}

    if delta < 0:
        wide = narrow
        to_wide = GroupHom.identity(narrow)
    else:
        p = principal_form(delta)
        sign_form = QForm(-p.a, p.b, -p.c)
        sign_class = narrow_of_reduced[reduce_indefinite(sign_form)]
        wq = quotient(narrow, [sign_class])
        wide = wq.group
        to_wide = GroupHom(narrow, wide, tuple(wq(g) for g in narrow.generators()))
    wide_reps: dict[Element, QForm] = {}
    for e in sorted(narrow_reps):
        w = to_wide(e)
        if w not in wide_reps:
            wide_reps[w] = narrow_reps[e]
    return ClassGroupData(delta, narrow, wide, to_wide, narrow_reps, wide_reps, narrow_of_reduced)
