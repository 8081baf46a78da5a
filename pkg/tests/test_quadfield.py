import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ambiclass.quadfield import (
    DiscriminantMismatch,
    FactorizationTooLarge,
    NormNotUnit,
    NotFundamental,
    NotInvariant,
    NotPrime,
    OIdeal,
    QuadNumber,
    factor_ideal,
    fundamental_discriminants,
    hilbert90_ideal,
    ideal_conjugate,
    ideal_eq,
    ideal_from_factors,
    ideal_mul,
    ideal_norm,
    invariant_compose,
    invariant_decompose,
    is_principal,
    is_principal_with_generator,
    kronecker,
    prime_splitting,
    ramified_prime,
    validate_discriminant,
)

from ambiclass.units import fundamental_unit

from oracles import count_fundamental, kronecker_brute

SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43]
DISCS = [-3, -4, -7, -8, -15, -20, -23, -84, -163, -420, 5, 8, 12, 13, 40, 136, 229, 316, 4620]


def random_ideal(rng, delta, maxp=30):
    x = OIdeal.rational(delta, Fraction(rng.randint(1, 6), rng.randint(1, 6)))
    for p in rng.sample([p for p in SMALL_PRIMES if p < maxp], 3):
        for pr in prime_splitting(p, delta).primes:
            x = x * pr ** rng.randint(-2, 2)
    return x


def test_validate_examples():
    d = validate_discriminant(-20)
    assert d.finite_ramified == (2, 5) and d.infinite_ramified and d.t == 3
    d = validate_discriminant(8)
    assert d.finite_ramified == (2,) and not d.infinite_ramified and d.t == 1
    assert validate_discriminant(12).t == 2
    with pytest.raises(NotFundamental):
        validate_discriminant(20)


@pytest.mark.parametrize("n", [0, 1, 2, 3, -1, 9, 16, 45, -12 * 4, 20])
def test_validate_rejects(n):
    with pytest.raises(NotFundamental):
        validate_discriminant(n)


def test_fundamental_list_matches_definition():
    assert fundamental_discriminants(-1500, 1500) == count_fundamental(-1500, 1500)


def test_kronecker_matches_brute_force():
    for delta in fundamental_discriminants(-400, 400):
        for p in SMALL_PRIMES:
            assert kronecker(delta, p) == kronecker_brute(delta, p), (delta, p)


def test_splitting_examples():
    s = prime_splitting(5, -20)
    assert s.kind == "ramified"
    assert s.primes[0] ** 2 == OIdeal.rational(-20, 5)
    assert prime_splitting(2, 8).kind == "ramified"
    # -20 = 1 mod 3 is a square, so 3 splits
    s = prime_splitting(3, -20)
    assert s.kind == "split"
    assert s.primes[0] * s.primes[1] == OIdeal.rational(-20, 3)
    with pytest.raises(NotPrime):
        prime_splitting(9, -20)


@pytest.mark.parametrize("delta", DISCS)
def test_splitting_product_relation(delta):
    for p in SMALL_PRIMES:
        s = prime_splitting(p, delta)
        k = kronecker_brute(delta, p)
        assert s.kind == {0: "ramified", 1: "split", -1: "inert"}[k]
        prod = OIdeal.unit(delta)
        for pr in s.primes:
            assert pr.norm() == (p if s.kind != "inert" else p * p)
            prod = prod * pr
        if s.kind == "ramified":
            prod = prod * s.primes[0]
        assert prod == OIdeal.rational(delta, p)
        if s.kind == "split":
            assert s.primes[0] != s.primes[1] == s.primes[0].conjugate()


def test_ideal_mul_examples():
    x = prime_splitting(3, -20).primes[0]
    assert x * OIdeal.unit(-20) == x
    p2 = ramified_prime(-20, 2)
    assert ideal_mul(p2, p2) == OIdeal.rational(-20, 2)
    q = prime_splitting(2, -23).primes[0]
    assert ideal_conjugate(q) != q
    assert q * q.conjugate() == OIdeal.rational(-23, 2)


def test_mismatch():
    with pytest.raises(DiscriminantMismatch):
        OIdeal.unit(-20) * OIdeal.unit(-23)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(DISCS), st.integers(0, 2**32))
def test_ideal_arithmetic_laws(delta, seed):
    rng = random.Random(seed)
    x, y, z = (random_ideal(rng, delta) for _ in range(3))
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * x.conjugate() == OIdeal.rational(delta, ideal_norm(x))
    assert ideal_norm(x * y) == ideal_norm(x) * ideal_norm(y)
    assert x.conjugate().conjugate() == x
    assert ideal_eq(x * x.inverse(), OIdeal.unit(delta))
    # every product of basis elements lies in the product ideal
    for s in x.basis():
        for t in y.basis():
            assert (x * y).contains(s * t)
    assert x.is_invariant() == (x == x.conjugate())


def test_factor_examples():
    assert factor_ideal(OIdeal.unit(-20)) == {}
    p2 = ramified_prime(-20, 2)
    p3, q3 = prime_splitting(3, -20).primes
    assert factor_ideal(OIdeal.rational(-20, 6)) == {p2: 2, p3: 1, q3: 1}
    # (-23/5) = (2/5) = -1
    assert prime_splitting(5, -23).kind == "inert"
    assert factor_ideal(OIdeal.rational(-23, 5)) == {OIdeal.rational(-23, 5): 1}
    x = OIdeal.principal(QuadNumber.sqrt_delta(-20) / 2) * p2
    assert factor_ideal(x) == {p2: 1, ramified_prime(-20, 5): 1}


def test_factor_bound():
    x = OIdeal.rational(-20, 1000003 * 1000033)
    with pytest.raises(FactorizationTooLarge):
        factor_ideal(x, bound=10**6)


@pytest.mark.parametrize("delta", DISCS)
def test_factor_roundtrip(delta):
    rng = random.Random(delta)
    for _ in range(40):
        g = QuadNumber(delta, rng.randint(-300, 300), rng.randint(-300, 300))
        if not g or g.norm() == 0:
            continue
        if g.u % 2 != (g.v * delta) % 2:
            g = g * 2
        x = OIdeal.principal(g)
        if x.norm() > 10**6:
            continue
        assert ideal_from_factors(delta, factor_ideal(x)) == x
    for _ in range(20):
        x = random_ideal(rng, delta)
        assert ideal_from_factors(delta, factor_ideal(x)) == x


def test_generator_examples():
    g = is_principal_with_generator(OIdeal.rational(5, 7))
    assert g.u == 14 and g.v == 0 and g.d == 1
    p2 = ramified_prime(12, 2)
    g = is_principal_with_generator(p2)
    assert abs(g.norm()) == 2
    assert OIdeal.principal(g) == p2
    assert is_principal_with_generator(ramified_prime(-20, 2)) is None


def _some_units(delta):
    if delta == -4:
        return [QuadNumber(delta, 0, 1)]
    if delta == -3:
        return [QuadNumber(delta, 1, 1)]
    minus = QuadNumber.rational(delta, -1)
    if delta < 0:
        return [minus]
    eps = fundamental_unit(delta)
    return [minus, eps, eps.inverse() ** 2 * minus]


@pytest.mark.parametrize("delta", [-3, -4, -23, -420, 5, 8, 12, 136, 229, 4620, 9949])
def test_generator_on_random_principal_ideals(delta):
    rng = random.Random(abs(delta))
    done = 0
    while done < 46:
        g = QuadNumber(delta, rng.randint(-10**4, 10**4), rng.randint(-10**4, 10**4), rng.randint(1, 9))
        if not g:
            continue
        x = OIdeal.principal(g)
        h = is_principal_with_generator(x)
        assert h is not None and OIdeal.principal(h) == x
        # the normalized generator does not depend on which associate built the ideal
        for unit in _some_units(delta):
            assert is_principal_with_generator(OIdeal.principal(g * unit)) == h
        done += 1


@pytest.mark.parametrize("delta", [-20, -84, -420, 12, 60, 136, 5, -4, -7])
def test_hilbert90_roundtrip(delta):
    # fields whose class groups are killed by 2, so conj(A)/A is always principal
    rng = random.Random(delta)
    count = 0
    while count < 25:
        a = random_ideal(rng, delta)
        alpha = is_principal_with_generator(a.conjugate() / a, normalize=False)
        assert alpha is not None
        b = hilbert90_ideal(alpha)
        assert b.conjugate() / b == OIdeal.principal(alpha)
        count += 1


def test_hilbert90_units():
    assert hilbert90_ideal(QuadNumber.rational(-20, 1)) == OIdeal.unit(-20)
    assert hilbert90_ideal(QuadNumber.rational(-20, -1)) == OIdeal.unit(-20)
    with pytest.raises(NormNotUnit):
        hilbert90_ideal(QuadNumber.rational(-20, 2))


def test_hilbert90_split_prime():
    p = prime_splitting(3, -11).primes[0]
    alpha = is_principal_with_generator(p.conjugate() / p, normalize=False)
    b = hilbert90_ideal(alpha)
    assert b.conjugate() / b == p.conjugate() / p


def test_invariant_decompose_examples():
    assert invariant_decompose(OIdeal.rational(-20, 5)) == (Fraction(5), (0, 0))
    p2, p5 = ramified_prime(-20, 2), ramified_prime(-20, 5)
    assert invariant_decompose(p2 * p5) == (Fraction(1), (1, 1))
    assert invariant_decompose(p2 * p2) == (Fraction(2), (0, 0))
    with pytest.raises(NotInvariant):
        invariant_decompose(prime_splitting(3, -20).primes[0])


@pytest.mark.parametrize("delta", [-20, -420, 8, 4620, -4, 5])
def test_invariant_bijection(delta):
    disc = validate_discriminant(delta)
    r = len(disc.finite_ramified)
    seen = {}
    for num in range(1, 8):
        for den in range(1, 8):
            q = Fraction(num, den)
            for mask in range(2**r):
                exps = tuple((mask >> i) & 1 for i in range(r))
                x = invariant_compose(delta, q, exps)
                assert x.is_invariant()
                assert invariant_decompose(x) == (q, exps)
                assert seen.setdefault(x, (q, exps)) == (q, exps)


def test_principal_matches_norm_form_brute_force():
    # an integral primitive ideal [a, b] of an imaginary field is principal iff
    # x^2 - D y^2 = 4a has a solution
    for delta in (-20, -23, -84, -56):
        for a in range(1, 40):
            for b in range(-a + 1, a + 1):
                if (b * b - delta) % (4 * a):
                    continue
                x = OIdeal(delta, 1, a, b)
                brute = False
                for y in range(-12, 13):
                    for u in range(-40, 41):
                        if u * u - delta * y * y == 4 * a and x.contains(QuadNumber(delta, u, y)):
                            brute = True
                assert is_principal(x) == brute, (delta, a, b)


def test_quadnumber_printing_and_norm():
    assert str(QuadNumber(8, 2, 1)) == "1+√2"
    assert str(QuadNumber(5, 1, 1)) == "(1+√5)/2"
    assert QuadNumber(136, 70, 6).norm() == 1
    assert QuadNumber(12, 4, 1).trace() == 4
