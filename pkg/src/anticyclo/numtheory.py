"""Small integer and F_p[x] helpers used throughout the package."""

from functools import lru_cache
from math import gcd, isqrt


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple:
    """Trial division; returns ((q, k), ...) sorted by q."""
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def divisors(n: int) -> list:
    ds = [1]
    for q, k in factorize(n):
        ds = [d * q ** i for d in ds for i in range(k + 1)]
    return sorted(ds)


def vp(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def vp_factorial(n: int, p: int) -> int:
    k, q = 0, p
    while q <= n:
        k += n // q
        q *= p
    return k


def is_squarefree(n: int) -> bool:
    return all(k == 1 for _, k in factorize(n))


@lru_cache(maxsize=None)
def primitive_root(p: int) -> int:
    """Least primitive root mod an odd prime p."""
    qs = [q for q, _ in factorize(p - 1)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    return 1


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n)."""
    if n == 0:
        return 1 if abs(a) == 1 else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a|n) for odd n
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


def crt(residues, moduli):
    x, M = 0, 1
    for r, m in zip(residues, moduli):
        g = gcd(M, m)
        if (r - x) % g:
            raise ValueError("incompatible congruences")
        l = M // g * m
        t = ((r - x) // g) * pow(M // g, -1, m // g) % (m // g)
        x = (x + M * t) % l
        M = l
    return x, M


def sqrt_mod_prime_power(a: int, q: int, k: int) -> list:
    """All x mod q^k with x^2 = a, q odd and a prime to q."""
    mod = q ** k
    roots = [x for x in range(q) if (x * x - a) % q == 0]
    for j in range(1, k):
        m = q ** (j + 1)
        roots = [x + t * q ** j for x in roots for t in range(q)
                 if ((x + t * q ** j) ** 2 - a) % m == 0]
    return sorted(r % mod for r in roots)


# polynomials over F_p as little-endian coefficient lists

def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mod(a, b, p):
    a = [x % p for x in a]
    _ptrim(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        c = a[-1] * inv % p
        shift = len(a) - 1 - db
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _ptrim(a)
    return a


def poly_mulmod(a, b, h, p):
    out = [0] * max(len(a) + len(b) - 1, 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return poly_mod(out, h, p)


def poly_powmod(a, k, h, p):
    result = [1]
    base = poly_mod(a, h, p)
    while k:
        if k & 1:
            result = poly_mulmod(result, base, h, p)
        base = poly_mulmod(base, base, h, p)
        k >>= 1
    return result


def poly_gcd(a, b, p):
    a = _ptrim([x % p for x in a])
    b = _ptrim([x % p for x in b])
    while b:
        a, b = b, poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def is_irreducible(h, p) -> bool:
    """Rabin's test for a monic h over F_p."""
    f = len(h) - 1
    if f <= 1:
        return f == 1
    x = [0, 1]
    for q, _ in factorize(f):
        t = poly_powmod(x, p ** (f // q), h, p)
        diff = t + [0] * (2 - len(t)) if len(t) < 2 else list(t)
        diff[1] = (diff[1] - 1) % p
        if len(poly_gcd(h, diff, p)) != 1:
            return False
    t = poly_powmod(x, p ** f, h, p)
    t = t + [0] * (2 - len(t))
    t[1] = (t[1] - 1) % p
    return not any(x % p for x in t)


@lru_cache(maxsize=None)
def default_modulus(p: int, f: int) -> tuple:
    """Lexicographically least monic irreducible of degree f over F_p."""
    if f == 1:
        return (0, 1)
    n = 0
    while True:
        digits, m = [], n
        for _ in range(f):
            digits.append(m % p)
            m //= p
        h = digits + [1]
        if h[0] and is_irreducible(h, p):
            return tuple(h)
        n += 1
