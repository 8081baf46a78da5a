"""Arithmetic in the maximal order of a quadratic field Q(sqrt(D)).

Elements are stored as ``(u + v*sqrt(D)) / (2*d)``; ideals as
``content * (a*Z + (b + sqrt(D))/2 * Z)``.  All arithmetic is exact.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Mapping, NamedTuple

from sympy import factorint, isprime
from sympy.ntheory import sqrt_mod


class NotFundamental(ValueError):
    pass


class NotPrime(ValueError):
    pass


class DiscriminantMismatch(ValueError):
    pass


class FactorizationTooLarge(ValueError):
    pass


class NormNotUnit(ValueError):
    pass


class NotInvariant(ValueError):
    pass


DEFAULT_FACTOR_BOUND = 10**40


def factor_bound() -> int:
    """Largest integer ``factorize`` will accept; ``AMBICLASS_FACTOR_BOUND`` overrides."""
    env = os.environ.get("AMBICLASS_FACTOR_BOUND")
    return int(env) if env else DEFAULT_FACTOR_BOUND


@lru_cache(maxsize=65536)
def _factor_cached(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(factorint(n).items()))


def factorize(n: int, bound: int | None = None) -> dict[int, int]:
    """Prime factorization of a positive integer."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    limit = factor_bound() if bound is None else bound
    if n > limit:
        raise FactorizationTooLarge(f"{n} exceeds the factoring bound {limit}")
    return dict(_factor_cached(n))


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    k = (n & -n).bit_length() - 1
    n >>= k
    if k:
        if a % 2 == 0:
            return 0
        if k % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n), n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


@dataclass(frozen=True)
class FundamentalDiscriminant:
    delta: int
    finite_ramified: tuple[int, ...]

    @property
    def is_real(self) -> bool:
        return self.delta > 0

    @property
    def sign(self) -> str:
        return "real" if self.delta > 0 else "imaginary"

    @property
    def infinite_ramified(self) -> bool:
        return self.delta < 0

    @property
    def t(self) -> int:
        return len(self.finite_ramified) + (1 if self.infinite_ramified else 0)

    @property
    def radicand(self) -> int:
        """Squarefree m with Q(sqrt(m)) the field."""
        return self.delta if self.delta % 4 == 1 else self.delta // 4

    def __int__(self) -> int:
        return self.delta


def is_fundamental(n: int) -> bool:
    try:
        validate_discriminant(n)
    except NotFundamental:
        return False
    return True


@lru_cache(maxsize=None)
def validate_discriminant(n: int) -> FundamentalDiscriminant:
    """Check that ``n`` is a fundamental discriminant and collect its ramified primes."""
    n = int(n)
    if n in (0, 1):
        raise NotFundamental(f"{n} is excluded (must not be 0 or 1)")
    if n % 4 == 1:
        m = n
    elif n % 4 == 0:
        m = n // 4
        if m % 4 not in (2, 3):
            raise NotFundamental(f"{n} = 4*{m} with {m} = {m % 4} mod 4: not a fundamental discriminant")
    else:
        raise NotFundamental(f"{n} = {n % 4} mod 4: not a fundamental discriminant")
    fac = factorize(abs(m))
    if any(e > 1 for e in fac.values()):
        raise NotFundamental(f"{n}: {abs(m)} has a square factor")
    return FundamentalDiscriminant(n, tuple(sorted(factorize(abs(n)))))


def _as_disc(delta) -> int:
    return delta.delta if isinstance(delta, FundamentalDiscriminant) else int(delta)


def _sign_of(p: int, q: int, delta: int) -> int:
    """Sign of p + q*sqrt(delta) for delta > 0 not a square."""
    if q == 0:
        return (p > 0) - (p < 0)
    if p == 0 or (p > 0) == (q > 0):
        return 1 if q > 0 else -1
    # opposite signs: compare p^2 with q^2 * delta
    bigger = p * p - q * q * delta
    return (1 if p > 0 else -1) if bigger > 0 else (1 if q > 0 else -1)


@dataclass(frozen=True)
class QuadNumber:
    """The field element ``(u + v*sqrt(delta)) / (2*d)``, kept in lowest terms with ``d > 0``."""

    delta: int
    u: int
    v: int
    d: int = 1

    def __post_init__(self):
        u, v, d = self.u, self.v, self.d
        if d == 0:
            raise ZeroDivisionError("zero denominator")
        if d < 0:
            u, v, d = -u, -v, -d
        g = gcd(gcd(u, v), d)
        if g > 1:
            u, v, d = u // g, v // g, d // g
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "d", d)

    @classmethod
    def rational(cls, delta: int, q) -> QuadNumber:
        q = Fraction(q)
        return cls(delta, 2 * q.numerator, 0, q.denominator)

    @classmethod
    def sqrt_delta(cls, delta: int) -> QuadNumber:
        return cls(delta, 0, 2, 1)

    @classmethod
    def omega(cls, delta: int) -> QuadNumber:
        return cls(delta, delta % 2, 1, 1)

    def _check(self, other: QuadNumber) -> None:
        if self.delta != other.delta:
            raise DiscriminantMismatch(f"{self.delta} vs {other.delta}")

    def _coerce(self, other) -> QuadNumber:
        if isinstance(other, QuadNumber):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return QuadNumber.rational(self.delta, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadNumber(
            self.delta,
            self.u * other.d + other.u * self.d,
            self.v * other.d + other.v * self.d,
            self.d * other.d,
        )

    __radd__ = __add__

    def __neg__(self) -> QuadNumber:
        return QuadNumber(self.delta, -self.u, -self.v, self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        u1, v1, u2, v2 = self.u, self.v, other.u, other.v
        return QuadNumber(
            self.delta,
            u1 * u2 + self.delta * v1 * v2,
            u1 * v2 + u2 * v1,
            2 * self.d * other.d,
        )

    __rmul__ = __mul__

    def conjugate(self) -> QuadNumber:
        return QuadNumber(self.delta, self.u, -self.v, self.d)

    def norm(self) -> Fraction:
        return Fraction(self.u * self.u - self.delta * self.v * self.v, 4 * self.d * self.d)

    def trace(self) -> Fraction:
        return Fraction(self.u, self.d)

    def inverse(self) -> QuadNumber:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conjugate()
        return QuadNumber(self.delta, c.u * n.denominator, c.v * n.denominator, c.d * n.numerator)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int) -> QuadNumber:
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        out = QuadNumber(self.delta, 2, 0, 1)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self) -> bool:
        return bool(self.u or self.v)

    @property
    def is_integral(self) -> bool:
        return self.d == 1 and (self.u - self.v * self.delta) % 2 == 0

    @property
    def is_rational(self) -> bool:
        return self.v == 0

    def coordinates(self) -> tuple[Fraction, Fraction]:
        """(x, y) with self = x + y*omega, omega = (delta mod 2 + sqrt(delta))/2."""
        y = Fraction(self.v, self.d)
        x = Fraction(self.u - self.v * (self.delta % 2), 2 * self.d)
        return x, y

    def sign(self) -> int:
        """Sign of the real embedding with sqrt(delta) > 0 (real fields only)."""
        if self.delta < 0:
            raise ValueError("no real embedding")
        return _sign_of(self.u, self.v, self.delta)

    def __str__(self) -> str:
        m = self.delta if self.delta % 4 == 1 else self.delta // 4
        # (u + v sqrt(delta))/(2d) = (u + v' sqrt(m)) / (2d) with v' = v or 2v
        u, v, den = self.u, (self.v if self.delta % 4 == 1 else 2 * self.v), 2 * self.d
        g = gcd(gcd(u, v), den)
        u, v, den = u // g, v // g, den // g
        root = f"√{m}" if m != -1 else "i"
        if v == 0:
            body = str(u)
        else:
            coeff = "" if abs(v) == 1 else str(abs(v))
            sign = "-" if v < 0 else "+"
            body = f"{coeff}{root}" if u == 0 and v > 0 else (
                f"-{coeff}{root}" if u == 0 else f"{u}{sign}{coeff}{root}"
            )
        if den == 1:
            return body
        return f"({body})/{den}"


QuadInt = QuadNumber


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _hnf2(vectors: Iterable[tuple[int, int]]) -> tuple[int, int, int]:
    """Lattice spanned by 2-vectors as Z(A, 0) + Z(X, Y), Y > 0, 0 <= X < A."""
    big_a, x_top, y_top = 0, 0, 0
    for x, y in vectors:
        if y == 0:
            big_a = gcd(big_a, x)
            continue
        if y_top == 0:
            x_top, y_top = x, y
            continue
        g, s, t = _xgcd(y_top, y)
        nx = s * x_top + t * x
        rest = (y // g) * x_top - (y_top // g) * x
        big_a = gcd(big_a, rest)
        x_top, y_top = nx, g
    if y_top < 0:
        x_top, y_top = -x_top, -y_top
    if y_top == 0 or big_a == 0:
        raise ValueError("vectors do not span a full-rank lattice")
    return big_a, x_top % big_a, y_top


def _normalize_b(a: int, b: int) -> int:
    b %= 2 * a
    return b - 2 * a if b > a else b


@dataclass(frozen=True)
class OIdeal:
    """Fractional ideal ``content * (a*Z + (b + sqrt(delta))/2 * Z)``."""

    delta: int
    content: Fraction
    a: int
    b: int

    def __post_init__(self):
        a, b = self.a, self.b
        if a <= 0:
            raise ValueError(f"a must be positive, got {a}")
        if (b * b - self.delta) % (4 * a):
            raise ValueError(f"b^2 = {self.delta} mod 4a fails for a={a}, b={b}")
        c = Fraction(self.content)
        if c <= 0:
            raise ValueError("content must be positive")
        object.__setattr__(self, "content", c)
        object.__setattr__(self, "b", _normalize_b(a, b))

    @classmethod
    def unit(cls, delta) -> OIdeal:
        delta = _as_disc(delta)
        return cls(delta, Fraction(1), 1, delta % 2)

    @classmethod
    def rational(cls, delta, q) -> OIdeal:
        delta = _as_disc(delta)
        return cls(delta, abs(Fraction(q)), 1, delta % 2)

    @classmethod
    def principal(cls, x: QuadNumber) -> OIdeal:
        if not x:
            raise ZeroDivisionError("the zero ideal is not a fractional ideal")
        delta = x.delta
        num = QuadNumber(delta, x.u, x.v, 1)  # x = num / d
        omega = QuadNumber.omega(delta)
        den = 1
        if not num.is_integral:
            # (u + v sqrt(D))/2 is integral after doubling
            num = num * 2
            den = 2
        vecs = []
        for y in (num, num * omega):
            cx, cy = y.coordinates()
            vecs.append((int(cx), int(cy)))
        ideal = cls._from_lattice(delta, vecs)
        return ideal.scale(Fraction(1, den * x.d))

    @classmethod
    def _from_lattice(cls, delta: int, vecs) -> OIdeal:
        big_a, x, y = _hnf2(vecs)
        if big_a % y or x % y:
            raise ValueError("lattice is not an O-ideal")
        return cls(delta, Fraction(y), big_a // y, 2 * (x // y) + delta % 2)

    @property
    def c(self) -> int:
        return (self.b * self.b - self.delta) // (4 * self.a)

    @property
    def is_primitive(self) -> bool:
        return self.content == 1

    @property
    def is_integral(self) -> bool:
        return self.content.denominator == 1

    def primitive_part(self) -> OIdeal:
        return OIdeal(self.delta, Fraction(1), self.a, self.b)

    def basis(self) -> tuple[QuadNumber, QuadNumber]:
        q = self.content
        return (
            QuadNumber.rational(self.delta, q * self.a),
            QuadNumber(self.delta, self.b, 1) * q,
        )

    def norm(self) -> Fraction:
        return self.content * self.content * self.a

    def conjugate(self) -> OIdeal:
        return OIdeal(self.delta, self.content, self.a, -self.b)

    def scale(self, q) -> OIdeal:
        return OIdeal(self.delta, self.content * abs(Fraction(q)), self.a, self.b)

    def is_invariant(self) -> bool:
        return self == self.conjugate()

    def __mul__(self, other: OIdeal) -> OIdeal:
        if not isinstance(other, OIdeal):
            return NotImplemented
        if other.delta != self.delta:
            raise DiscriminantMismatch(f"{self.delta} vs {other.delta}")
        if self.a == 1:
            return other.scale(self.content)
        if other.a == 1:
            return self.scale(other.content)
        delta = self.delta
        half = delta % 2
        # primitive parts: basis (a, 0), ((b - half)/2, 1) in the basis {1, omega}
        a1, x1 = self.a, (self.b - half) // 2
        a2, x2 = other.a, (other.b - half) // 2
        # omega^2 = half*omega + (delta - half)/4
        w2 = (delta - half) // 4
        vecs = [
            (a1 * a2, 0),
            (a1 * x2, a1),
            (a2 * x1, a2),
            (x1 * x2 + w2, x1 + x2 + half),
        ]
        prim = OIdeal._from_lattice(delta, vecs)
        return prim.scale(self.content * other.content)

    def inverse(self) -> OIdeal:
        return OIdeal(self.delta, 1 / (self.content * self.a), self.a, -self.b)

    def __truediv__(self, other: OIdeal) -> OIdeal:
        return self * other.inverse()

    def __pow__(self, k: int) -> OIdeal:
        base = self if k >= 0 else self.inverse()
        out = OIdeal.unit(self.delta)
        k = abs(k)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def contains(self, x: QuadNumber) -> bool:
        if x.delta != self.delta:
            raise DiscriminantMismatch(f"{self.delta} vs {x.delta}")
        y = x * QuadNumber.rational(self.delta, 1 / self.content)
        cx, cy = y.coordinates()
        half = self.delta % 2
        if cy.denominator != 1:
            return False
        rest = cx - cy * ((self.b - half) // 2)
        return rest.denominator == 1 and rest.numerator % self.a == 0

    def __str__(self) -> str:
        prim = f"[{self.a}, ({self.b}+√{self.delta})/2]"
        if self.a == 1:
            prim = "(1)"
        if self.content == 1:
            return prim
        return f"{self.content}*{prim}"


def ideal_mul(x: OIdeal, y: OIdeal) -> OIdeal:
    return x * y


def ideal_conjugate(x: OIdeal) -> OIdeal:
    return x.conjugate()


def ideal_norm(x: OIdeal) -> Fraction:
    return x.norm()


def ideal_eq(x: OIdeal, y: OIdeal) -> bool:
    if x.delta != y.delta:
        raise DiscriminantMismatch(f"{x.delta} vs {y.delta}")
    return x == y


class Splitting(NamedTuple):
    kind: str  # "ramified", "split" or "inert"
    primes: tuple[OIdeal, ...]


@lru_cache(maxsize=65536)
def _splitting(delta: int, p: int) -> Splitting:
    k = kronecker(delta, p)
    if k == -1:
        return Splitting("inert", (OIdeal.rational(delta, p),))
    if p == 2:
        b = next(b for b in (1, 2, 0, -1) if (b * b - delta) % 8 == 0)
    else:
        r = sqrt_mod(delta % p, p) if delta % p else 0
        b = r if (r - delta) % 2 == 0 else r - p
    first = OIdeal(delta, Fraction(1), p, b)
    if k == 0:
        return Splitting("ramified", (first,))
    if first.b < 0:
        first = first.conjugate()
    return Splitting("split", (first, first.conjugate()))


def prime_splitting(p: int, delta) -> Splitting:
    """Decomposition of the rational prime ``p``, classified by the Kronecker symbol."""
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    return _splitting(_as_disc(delta), int(p))


def ramified_prime(delta, p: int) -> OIdeal:
    s = prime_splitting(p, delta)
    if s.kind != "ramified":
        raise ValueError(f"{p} does not ramify in discriminant {_as_disc(delta)}")
    return s.primes[0]


def factor_ideal(x: OIdeal, bound: int | None = None) -> dict[OIdeal, int]:
    """Prime ideal factorization; fractional content gives negative exponents."""
    out: dict[OIdeal, int] = {}

    def bump(pr: OIdeal, e: int) -> None:
        out[pr] = out.get(pr, 0) + e
        if out[pr] == 0:
            del out[pr]

    q = x.content
    for part, sgn in ((q.numerator, 1), (q.denominator, -1)):
        for p, e in factorize(part, bound).items():
            s = _splitting(x.delta, p)
            if s.kind == "ramified":
                bump(s.primes[0], 2 * e * sgn)
            else:
                for pr in s.primes:
                    bump(pr, e * sgn)
    for p, e in factorize(x.a, bound).items():
        s = _splitting(x.delta, p)
        if s.kind == "inert":
            raise AssertionError("inert prime divides a primitive ideal")
        if s.kind == "ramified":
            bump(s.primes[0], e)
        else:
            pr = s.primes[0]
            if (x.b - pr.b) % (2 * p):
                pr = s.primes[1]
            bump(pr, e)
    return out


def ideal_from_factors(delta, factors: Mapping[OIdeal, int]) -> OIdeal:
    out = OIdeal.unit(delta)
    for pr, e in factors.items():
        out = out * pr**e
    return out


def _rho(delta: int, a: int, b: int, s: int) -> tuple[int, int, int]:
    """One reduction step: returns (a', b', c) with [a, b] = ((b + sqrt D)/2 / c) * [a', b']."""
    c = (b * b - delta) // (4 * a)
    ac = abs(c)
    if delta > 0 and ac <= s:
        nb = s - ((s + b) % (2 * ac))
    else:
        nb = _normalize_b(ac, -b)
    return ac, nb, c


def _is_reduced_real(a: int, b: int, s: int) -> bool:
    return 0 < b <= s and b + 2 * a > s and 2 * a - b <= s


class _Walk:
    """Reduce a primitive ideal, optionally tracking gamma with I_start = gamma * I_current."""

    def __init__(self, delta: int, a: int, b: int, track: bool):
        self.delta = delta
        self.s = isqrt(abs(delta))
        self.a, self.b = a, b
        self.track = track
        self.gamma = (2, 0, 1)  # (u, v, d): (u + v sqrt D)/(2d)

    def step(self) -> None:
        delta, a, b = self.delta, self.a, self.b
        na, nb, c = _rho(delta, a, b, self.s)
        if self.track:
            u, v, d = self.gamma
            # gamma *= (b + sqrt D) / (2c)
            u, v, d = u * b + delta * v, u + v * b, 2 * d * c
            if d < 0:
                u, v, d = -u, -v, -d
            g = gcd(gcd(u, v), d)
            self.gamma = (u // g, v // g, d // g)
        self.a, self.b = na, nb

    def normalize(self) -> None:
        if self.delta > 0 and self.a <= self.s:
            self.b = self.s - ((self.s - self.b) % (2 * self.a))
        else:
            self.b = _normalize_b(self.a, self.b)

    def reduced(self) -> bool:
        if self.delta < 0:
            c = (self.b * self.b - self.delta) // (4 * self.a)
            return self.a <= c
        return _is_reduced_real(self.a, self.b, self.s)


def _find_generator(delta: int, a: int, b: int, track: bool):
    """Return (u, v, d) of a generator of the primitive ideal [a, b], True, or None."""
    w = _Walk(delta, a, b, track)
    w.normalize()
    guard = 0
    while not w.reduced():
        if w.a == 1:
            break
        w.step()
        guard += 1
        if guard > 10000:
            raise RuntimeError("ideal reduction did not terminate")
    if w.a == 1:
        return w.gamma if track else True
    if delta < 0:
        return None
    start = (w.a, w.b)
    while True:
        w.step()
        if w.a == 1:
            return w.gamma if track else True
        if (w.a, w.b) == start:
            return None
        guard += 1
        if guard > 10**7:
            raise RuntimeError("reduction cycle did not close")


def _torsion_units(delta: int) -> list[QuadNumber]:
    if delta == -4:
        i = QuadNumber(delta, 0, 1)
        return [i**k for k in range(4)]
    if delta == -3:
        z = QuadNumber(delta, 1, 1)
        return [z**k for k in range(6)]
    one = QuadNumber(delta, 2, 0)
    return [one, -one]


def normalize_generator(g: QuadNumber) -> QuadNumber:
    """Canonical associate of a generator.

    Real fields: first move ``|g / g'|`` into ``[1, eps^2)`` with powers of the
    fundamental unit, then fix the sign.  Among remaining associates pick the
    one with the largest ``(u, v)``, i.e. positive trace, ties broken by ``v``.
    """
    delta = g.delta
    if delta > 0:
        from .units import fundamental_unit

        eps = fundamental_unit(delta)
        eps_bar = eps.conjugate()
        # |g| >= |g'| iff u*v >= 0
        while g.u * g.v < 0:
            g = g * eps
        while True:
            h = g * eps_bar
            if h.u * h.v >= 0 and h != g:
                g = h
            else:
                break
        return g if (g.u, g.v) > (-g.u, -g.v) else -g
    return max((g * z for z in _torsion_units(delta)), key=lambda x: (Fraction(x.u, x.d), Fraction(x.v, x.d)))


def is_principal(x: OIdeal) -> bool:
    return _find_generator(x.delta, x.a, x.b, track=False) is not None


def is_principal_with_generator(x: OIdeal, normalize: bool = True) -> QuadNumber | None:
    """A generator of ``x`` if it is principal, else None."""
    found = _find_generator(x.delta, x.a, x.b, track=True)
    if found is None:
        return None
    u, v, d = found
    g = QuadNumber(x.delta, u, v, d) * x.content
    return normalize_generator(g) if normalize else g


def hilbert90_ideal(alpha: QuadNumber) -> OIdeal:
    """An ideal ``A`` with ``conj(A) / A = (alpha)``; needs ``N(alpha) = +-1``."""
    n = alpha.norm()
    if abs(n) != 1:
        raise NormNotUnit(f"N({alpha}) = {n} is not a unit")
    delta = alpha.delta
    fac = factor_ideal(OIdeal.principal(alpha))
    out = OIdeal.unit(delta)
    seen = set()
    for pr, e in fac.items():
        p = pr.a if pr.content == 1 else pr.content.numerator
        if p in seen:
            continue
        s = _splitting(delta, p)
        if s.kind != "split":
            raise AssertionError(f"norm-one ideal has nonzero exponent at non-split {p}")
        seen.add(p)
        first, second = s.primes
        e1, e2 = fac.get(first, 0), fac.get(second, 0)
        if e1 != -e2:
            raise AssertionError("exponents of conjugate primes do not cancel")
        out = out * first ** (-e1)
    return out


def invariant_decompose(x: OIdeal) -> tuple[Fraction, tuple[int, ...]]:
    """Split an invariant ideal as ``q * prod p_i^(a_i)`` over the ramified primes, ``a_i`` in {0, 1}."""
    if not x.is_invariant():
        raise NotInvariant(f"{x} is not fixed by conjugation")
    disc = validate_discriminant(x.delta)
    q = Fraction(1)
    exps = dict.fromkeys(disc.finite_ramified, 0)
    fac = factor_ideal(x)
    for pr, e in fac.items():
        p = pr.a if pr.content == 1 else pr.content.numerator
        s = _splitting(x.delta, p)
        if s.kind == "ramified":
            q *= Fraction(p) ** (e // 2)
            exps[p] = e % 2
        elif s.kind == "inert":
            q *= Fraction(p) ** e
        elif pr == s.primes[0]:
            if fac.get(s.primes[1], 0) != e:
                raise AssertionError("invariant ideal with unbalanced split exponents")
            q *= Fraction(p) ** e
    return q, tuple(exps[p] for p in disc.finite_ramified)


def invariant_compose(delta, q, exponents: Iterable[int]) -> OIdeal:
    """Inverse of invariant_decompose."""
    disc = validate_discriminant(_as_disc(delta))
    out = OIdeal.rational(disc.delta, q)
    for p, e in zip(disc.finite_ramified, exponents):
        if e % 2:
            out = out * ramified_prime(disc.delta, p)
    return out


def fundamental_discriminants(lo: int, hi: int) -> list[int]:
    """Fundamental discriminants in [lo, hi], ascending."""
    return [n for n in range(lo, hi + 1) if n % 4 in (0, 1) and is_fundamental(n)]
