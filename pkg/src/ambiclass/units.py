"""Unit groups of quadratic fields, Hilbert symbols and the unit norm indices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from sympy import isprime

from .abgroup import group_from_relations, integer_kernel
from .quadfield import QuadNumber, validate_discriminant


class NegativeDiscriminant(ValueError):
    pass


class InvalidPlace(ValueError):
    pass


INF = math.inf


@lru_cache(maxsize=4096)
def _fundamental_unit(delta: int) -> QuadNumber:
    s = isqrt(delta)
    # x0 = (b + sqrt D)/2 is reduced, so its expansion is purely periodic
    b = s if (s - delta) % 2 == 0 else s - 1
    p0, q0 = b, 2
    p, q = p0, q0
    qm2, qm1 = 1, 0  # convergent denominators q_{k-2}, q_{k-1}
    while True:
        a = (p + s) // q
        qm2, qm1 = qm1, a * qm1 + qm2
        p = a * q - p
        q = (delta - p * p) // q
        if (p, q) == (p0, q0):
            break
    # eps = q_{l-1} * x0 + q_{l-2}
    return QuadNumber(delta, qm1 * b + 2 * qm2, qm1)


def fundamental_unit(delta) -> QuadNumber:
    """Smallest unit > 1 of the maximal order of a real quadratic field."""
    disc = validate_discriminant(int(delta))
    if disc.delta < 0:
        raise NegativeDiscriminant(f"{disc.delta} < 0 has no fundamental unit")
    return _fundamental_unit(disc.delta)


def torsion_order(delta: int) -> int:
    return {-3: 6, -4: 4}.get(int(delta), 2)


def _split_p(n: int, p: int) -> tuple[int, int]:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


def _as_int_class(x) -> int:
    """Integer in the same square class as the nonzero rational x."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("Hilbert symbol of zero")
    return x.numerator * x.denominator


def _legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def hilbert_symbol(a, b, place) -> int:
    """(a, b)_v for nonzero rationals a, b at a prime ``place`` or ``math.inf``."""
    a, b = _as_int_class(a), _as_int_class(b)
    if place == INF or place == "inf":
        return -1 if a < 0 and b < 0 else 1
    if not isinstance(place, int) or place < 2 or not isprime(place):
        raise InvalidPlace(f"{place!r} is neither a prime nor infinity")
    p = place
    alpha, u = _split_p(a, p)
    beta, v = _split_p(b, p)
    if p == 2:
        eps_u, eps_v = (u - 1) // 2 % 2, (v - 1) // 2 % 2
        om_u, om_v = (u * u - 1) // 8 % 2, (v * v - 1) // 8 % 2
        e = eps_u * eps_v + alpha * om_v + beta * om_u
        return -1 if e % 2 else 1
    e = alpha * beta * ((p - 1) // 2)
    sign = -1 if e % 2 else 1
    if beta % 2:
        sign *= _legendre(u, p)
    if alpha % 2:
        sign *= _legendre(v, p)
    return sign


def minus_one_global_norm(delta) -> bool:
    """Whether -1 is a norm from Q(sqrt(delta)); decided place by place."""
    disc = validate_discriminant(int(delta))
    if disc.delta < 0:
        return False
    return all(hilbert_symbol(-1, disc.delta, p) == 1 for p in disc.finite_ramified)


def unit_norm(delta) -> int | None:
    """N(eps) for real fields, None otherwise."""
    disc = validate_discriminant(int(delta))
    if disc.delta < 0:
        return None
    n = fundamental_unit(disc.delta).norm()
    return int(n)


def norm_indices(delta) -> tuple[int, int]:
    """(E_Q : E_Q & N L*) and (E_Q : N E_L)."""
    idx_q = 1 if minus_one_global_norm(delta) else 2
    n = unit_norm(delta)
    idx_e = 1 if n == -1 else 2
    return idx_q, idx_e


def unit_cohomology_index(delta) -> int:
    """(E_L[N] : E_L^(1-sigma)), worked out on a presentation of E_L.

    E_L = <zeta> x <eps> is written additively as Z/w x Z^r; both subgroups
    become lattices in Z^(1+r) containing w*Z x 0 and the index is a ratio of
    lattice indices.
    """
    disc = validate_discriminant(int(delta))
    w = torsion_order(disc.delta)
    torsion = [w] + ([0] if disc.delta > 0 else [])
    if disc.delta < 0:
        # N(zeta) = 1 and zeta^(1-sigma) = zeta / conj(zeta) = zeta^2
        norm_col = [0]
        image = [[2]]
    else:
        n_eps = unit_norm(disc.delta)
        norm_col = [0, 0 if n_eps == 1 else 1]
        # eps^(1-sigma) = eps / conj(eps) = N(eps) * eps^2, and -1 = zeta^(w/2)
        image = [[2, 0], [0 if n_eps == 1 else w // 2, 2]]
    k = len(torsion)
    # E_L[N]: kernel of the map to {+-1} = Z/2
    kernel = [row[:k] for row in integer_kernel([[c] for c in norm_col] + [[2]])]
    in_kernel = group_from_relations(k, [torsion] + kernel).order
    in_image = group_from_relations(k, [torsion] + image).order
    if in_image % in_kernel:
        raise AssertionError("E_L^(1-sigma) is not contained in E_L[N]")
    return in_image // in_kernel


@dataclass(frozen=True)
class UnitData:
    delta: int
    torsion_order: int
    fund_unit: QuadNumber | None
    norm_eps: int | None
    idx_q: int
    idx_e: int
    idx_coh: int


def unit_data(delta) -> UnitData:
    disc = validate_discriminant(int(delta))
    eps = fundamental_unit(disc.delta) if disc.delta > 0 else None
    idx_q, idx_e = norm_indices(disc.delta)
    return UnitData(
        delta=disc.delta,
        torsion_order=torsion_order(disc.delta),
        fund_unit=eps,
        norm_eps=unit_norm(disc.delta),
        idx_q=idx_q,
        idx_e=idx_e,
        idx_coh=unit_cohomology_index(disc.delta),
    )


@dataclass(frozen=True)
class UnitPGTReport:
    delta: int
    idx_e: int
    idx_coh: int
    e_infinity: int
    lhs: Fraction
    rhs: Fraction

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs


def verify_unit_pgt(delta) -> UnitPGTReport:
    """Check (E_Q : N E_L) / (E_L[N] : E_L^(1-sigma)) = e(inf) / 2."""
    disc = validate_discriminant(int(delta))
    _, idx_e = norm_indices(disc.delta)
    idx_coh = unit_cohomology_index(disc.delta)
    e_inf = 2 if disc.delta < 0 else 1
    return UnitPGTReport(
        disc.delta, idx_e, idx_coh, e_inf, Fraction(idx_e, idx_coh), Fraction(e_inf, 2)
    )
