from math import gcd

from hypothesis import given, strategies as st

from anticyclo.numtheory import (crt, default_modulus, divisors, factorize, is_irreducible,
                                 is_prime, kronecker, primitive_root, sqrt_mod_prime_power, vp,
                                 vp_factorial)


def legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def test_small_primes():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@given(st.integers(min_value=1, max_value=10 ** 6))
def test_factorize_multiplies_back(n):
    prod = 1
    for q, k in factorize(n):
        assert is_prime(q)
        prod *= q ** k
    assert prod == n


def test_divisors_and_valuations():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert vp(250, 5) == 3
    assert vp_factorial(25, 5) == 6


def test_primitive_roots():
    assert primitive_root(5) == 2
    assert primitive_root(7) == 3
    assert primitive_root(23) == 5


@given(st.integers(-500, 500), st.sampled_from([3, 5, 7, 11, 13, 101]))
def test_kronecker_matches_euler_criterion(a, p):
    assert kronecker(a, p) == legendre(a, p)


def test_kronecker_examples():
    assert kronecker(-11, 5) == 1
    assert kronecker(-4, 5) == 1
    assert kronecker(-11, 7) == -1
    assert kronecker(-4, 3) == -1
    assert kronecker(5, 2) == -1


@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_crt(x, y):
    r, M = crt([x % 9, y % 25], [9, 25])
    assert M == 225 and r % 9 == x % 9 and r % 25 == y % 25


def test_square_roots_mod_prime_power():
    roots = sqrt_mod_prime_power(-11 % 125, 5, 3)
    assert len(roots) == 2
    assert all((r * r + 11) % 125 == 0 for r in roots)
    assert sqrt_mod_prime_power(2, 5, 2) == []


def test_default_modulus_is_irreducible():
    for p, f in [(5, 2), (5, 3), (7, 2), (3, 4)]:
        h = list(default_modulus(p, f))
        assert len(h) == f + 1 and h[-1] == 1
        assert is_irreducible(h, p)
    assert not is_irreducible([1, 0, 1], 5)  # x^2 + 1 has roots 2, 3 mod 5
    assert gcd(5, 3) == 1
