"""Finite-precision arithmetic in Z_p and its unramified extensions.

An element of W_f = Z_p[x]/(h) is stored as an f-tuple of integer residues
together with an absolute precision: the element is only asserted modulo
p^prec.  Arithmetic never claims more precision than its inputs justify.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd

from .errors import DomainError, NonUnit, PrecisionLoss
from .numtheory import (default_modulus, factorize, is_irreducible, is_prime,
                        poly_mulmod, poly_powmod, primitive_root, vp, vp_factorial)


class PadicContext:
    """Holds p, the precision cap N, and the unramified modulus h of degree f."""

    def __init__(self, p: int, N: int, f: int = 1, h=None):
        if p == 2 or not is_prime(p):
            raise DomainError(f"p must be an odd prime, got {p}")
        if N < 1 or f < 1:
            raise DomainError("N and f must be positive")
        if h is None:
            h = default_modulus(p, f)
        h = tuple(int(c) for c in h)
        if len(h) != f + 1 or h[-1] != 1:
            raise DomainError("h must be monic of degree f")
        if f > 1 and not is_irreducible([c % p for c in h], p):
            raise DomainError("h is reducible mod p")
        self.p = p
        self.N = N
        self.f = f
        self.h = h
        # x^f = sum hred[r] x^r
        self.hred = tuple(-c for c in h[:-1]) if f > 1 else (0,)
        self.modulus = p ** N
        self.g = primitive_root(p)

    def __repr__(self):
        return f"PadicContext(p={self.p}, N={self.N}, f={self.f})"

    @property
    def key(self):
        return (self.p, self.f, self.h)

    def with_precision(self, N: int) -> "PadicContext":
        return padic_context(self.p, N, self.f, self.h)

    # ring interface
    def __call__(self, x, prec=None) -> "PadicElt":
        return self.coerce(x, prec)

    def coerce(self, x, prec=None) -> "PadicElt":
        if isinstance(x, PadicElt):
            if x.ctx.key != self.key:
                raise DomainError("incompatible p-adic contexts")
            cap = min(x.prec, self.N) if prec is None else min(x.prec, prec, self.N)
            return PadicElt(self, x.coeffs, cap)
        if isinstance(x, int):
            return PadicElt(self, (x,) + (0,) * (self.f - 1), self.N if prec is None else prec)
        if isinstance(x, (tuple, list)):
            return PadicElt(self, tuple(x), self.N if prec is None else prec)
        raise TypeError(f"cannot coerce {type(x).__name__} to a p-adic element")

    def zero(self, prec=None) -> "PadicElt":
        return self.coerce(0, prec)

    def one(self, prec=None) -> "PadicElt":
        return self.coerce(1, prec)

    @property
    def gamma(self) -> "PadicElt":
        return self.coerce(1 + self.p)

    def wmul(self, a, b, mod):
        """Product of f-vectors in Z/mod[x]/(h)."""
        f = self.f
        if f == 1:
            return (a[0] * b[0] % mod,)
        out = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        hr = self.hred
        for d in range(2 * f - 2, f - 1, -1):
            t = out[d]
            if t:
                for r in range(f):
                    out[d - f + r] += t * hr[r]
        return tuple(c % mod for c in out[:f])

    def wpow(self, a, k, mod):
        result = (1 % mod,) + (0,) * (self.f - 1)
        while k:
            if k & 1:
                result = self.wmul(result, a, mod)
            a = self.wmul(a, a, mod)
            k >>= 1
        return result

    @lru_cache(maxsize=None)
    def primitive_element(self) -> tuple:
        """A generator of F_{p^f}^x whose norm to F_p is the least primitive root."""
        p, f = self.p, self.f
        if f == 1:
            return (self.g,)
        order = p ** f - 1
        qs = [q for q, _ in factorize(order)]
        h = [c % p for c in self.h]
        norm_exp = order // (p - 1)
        n = 1
        while True:
            cand = [(n // p ** i) % p for i in range(f)]
            n += 1
            if not any(cand):
                continue
            if all(poly_powmod(cand, order // q, h, p) != [1] for q in qs):
                nm = poly_powmod(cand, norm_exp, h, p)
                if len(nm) == 1 and nm[0] == self.g:
                    return tuple(cand)

    def root_of_unity(self, d: int) -> "PadicElt":
        """The fixed primitive d-th root of unity, d | p^f - 1."""
        order = self.p ** self.f - 1
        if order % d:
            raise DomainError(f"no {d}-th roots of unity in degree {self.f}")
        gen = teichmuller_lift(self.coerce(self.primitive_element()))
        return gen ** (order // d)


@lru_cache(maxsize=None)
def padic_context(p: int, N: int, f: int = 1, h=None) -> PadicContext:
    return PadicContext(p, N, f, h)


def _val_int(c: int, p: int, cap: int) -> int:
    if c == 0:
        return cap
    k = 0
    while c % p == 0 and k < cap:
        c //= p
        k += 1
    return k


class PadicElt:
    __slots__ = ("ctx", "coeffs", "prec")

    def __init__(self, ctx: PadicContext, coeffs, prec: int):
        prec = min(prec, ctx.N)
        if prec < 0:
            raise PrecisionLoss("negative precision", deficit=-prec)
        if len(coeffs) != ctx.f:
            raise DomainError("coefficient vector has wrong length")
        mod = ctx.p ** prec
        self.ctx = ctx
        self.coeffs = tuple(int(c) % mod for c in coeffs)
        self.prec = prec

    # basic queries
    def valuation(self) -> int:
        """v_p, capped at prec when the element is zero to precision."""
        return min(_val_int(c, self.ctx.p, self.prec) for c in self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return self.prec >= 1 and self.valuation() == 0

    def lift(self) -> int:
        if self.ctx.f != 1:
            raise DomainError("lift() is only defined for f = 1")
        return self.coeffs[0]

    def centered(self) -> int:
        c, mod = self.lift(), self.ctx.p ** self.prec
        return c - mod if c > mod // 2 else c

    def with_prec(self, prec: int) -> "PadicElt":
        return PadicElt(self.ctx, self.coeffs, min(prec, self.prec))

    def __repr__(self):
        body = self.coeffs[0] if self.ctx.f == 1 else list(self.coeffs)
        return f"{body} + O({self.ctx.p}^{self.prec})"

    # arithmetic
    def _other(self, other):
        if isinstance(other, PadicElt):
            if other.ctx.key != self.ctx.key:
                raise DomainError("incompatible p-adic contexts")
            return other
        if isinstance(other, int):
            return PadicElt(self.ctx, (other,) + (0,) * (self.ctx.f - 1), self.ctx.N)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        prec = min(self.prec, o.prec)
        return PadicElt(self.ctx, [a + b for a, b in zip(self.coeffs, o.coeffs)], prec)

    __radd__ = __add__

    def __neg__(self):
        return PadicElt(self.ctx, [-a for a in self.coeffs], self.prec)

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        prec = min(self.prec + o.valuation(), o.prec + self.valuation(), self.ctx.N)
        mod = self.ctx.p ** prec
        return PadicElt(self.ctx, self.ctx.wmul(self.coeffs, o.coeffs, mod), prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicElt":
        if not self.is_unit():
            raise NonUnit("element is not a unit")
        ctx, prec = self.ctx, self.prec
        mod = ctx.p ** prec
        if ctx.f == 1:
            return PadicElt(ctx, (pow(self.coeffs[0], -1, mod),), prec)
        # inverse mod p via the norm-like power, then Newton lifting
        x = ctx.wpow(self.coeffs, ctx.p ** ctx.f - 2, ctx.p)
        k = 1
        while k < prec:
            k = min(2 * k, prec)
            m = ctx.p ** k
            ax = ctx.wmul(self.coeffs, x, m)
            two_minus = tuple((2 if i == 0 else 0) - c for i, c in enumerate(ax))
            x = ctx.wmul(x, two_minus, m)
        return PadicElt(ctx, x, prec)

    def divide_by_p(self, k: int = 1) -> "PadicElt":
        """Exact division by p^k; precision drops by k."""
        p = self.ctx.p
        v = self.valuation()
        if v < k:
            raise PrecisionLoss(f"element not divisible by {p}^{k}", deficit=k - v)
        q = p ** k
        return PadicElt(self.ctx, [c // q for c in self.coeffs], self.prec - k)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        k = o.valuation()
        if k >= o.prec:
            raise PrecisionLoss("division by an element that is zero to precision")
        num = self.divide_by_p(k) if k else self
        unit = o.divide_by_p(k) if k else o
        return num * unit.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        ctx = self.ctx
        if k == 0:
            return ctx.one(self.prec if self.is_unit() else ctx.N)
        v = self.valuation()
        if v == 0:
            prec = self.prec
        else:
            # (x + p^P d)^k = x^k + k x^(k-1) p^P d + ...
            prec = min(self.prec + (k - 1) * v + vp(k, ctx.p), ctx.N)
        mod = ctx.p ** prec
        return PadicElt(ctx, ctx.wpow(self.coeffs, k, mod), prec)

    def __eq__(self, other):
        o = self._other(other) if isinstance(other, (int, PadicElt)) else NotImplemented
        if o is NotImplemented:
            return NotImplemented
        prec = min(self.prec, o.prec)
        mod = self.ctx.p ** prec
        return all((a - b) % mod == 0 for a, b in zip(self.coeffs, o.coeffs))

    __hash__ = None

    # serialization
    def to_json(self) -> dict:
        p = self.ctx.p

        def digits(c):
            out = []
            for _ in range(self.prec):
                out.append(c % p)
                c //= p
            return out

        payload = {"p": p, "f": self.ctx.f, "prec": self.prec}
        if self.ctx.f == 1:
            payload["digits"] = digits(self.coeffs[0])
        else:
            payload["digits"] = [digits(c) for c in self.coeffs]
            payload["h"] = list(self.ctx.h)
        return payload

    @classmethod
    def from_json(cls, data: dict, N: int | None = None) -> "PadicElt":
        p, f, prec = data["p"], data.get("f", 1), data["prec"]
        h = tuple(data["h"]) if "h" in data else None
        ctx = padic_context(p, max(N or prec, prec, 1), f, h)

        def value(ds):
            return sum(d * p ** i for i, d in enumerate(ds))

        if f == 1:
            coeffs = (value(data["digits"]),)
        else:
            coeffs = tuple(value(ds) for ds in data["digits"])
        return PadicElt(ctx, coeffs, prec)


def teichmuller_lift(a: PadicElt) -> PadicElt:
    """The (p^f - 1)-th root of unity congruent to a mod p, to the context cap."""
    ctx = a.ctx
    if not a.is_unit():
        raise NonUnit("Teichmuller lift of a non-unit")
    mod = ctx.modulus
    q = ctx.p ** ctx.f
    x = tuple(c % mod for c in a.coeffs)
    for _ in range(ctx.N + 1):
        y = ctx.wpow(x, q, mod)
        if y == x:
            break
        x = y
    return PadicElt(ctx, x, ctx.N)


def _series_terms(p: int, v: int, prec: int, loss) -> int:
    # smallest count n0 such that every term n >= n0 has valuation >= prec
    n = 1
    last_bad = 0
    while n <= prec * p + 2 * p:
        if n * v - loss(n) < prec:
            last_bad = n
        n += 1
    return last_bad + 1


def padic_log(u: PadicElt) -> PadicElt:
    """log(u) for u = 1 mod p.  Isometric on 1 + pZ_p, so prec(out) = prec(u)."""
    ctx = u.ctx
    p = ctx.p
    x = u - 1
    if u.prec < 1 or x.valuation() < 1:
        raise DomainError("log needs u = 1 mod p")
    prec = u.prec
    if x.is_zero():
        return ctx.zero(prec)
    v = x.valuation()
    terms = _series_terms(p, v, prec, lambda n: vp(n, p))
    guard = max(vp(n, p) for n in range(1, terms + 1))
    mod = p ** (prec + guard)
    xs = x.coeffs
    acc = [0] * ctx.f
    power = (1,) + (0,) * (ctx.f - 1)
    for n in range(1, terms):
        power = ctx.wmul(power, xs, mod)
        k = vp(n, p)
        unit = n // p ** k
        inv = pow(unit, -1, mod)
        sign = 1 if n % 2 else -1
        for r in range(ctx.f):
            c = power[r]
            assert c % p ** k == 0
            acc[r] += sign * (c // p ** k) * inv
    return PadicElt(ctx, acc, prec)


def padic_exp(x: PadicElt) -> PadicElt:
    """exp(x) for v_p(x) >= 1.  Isometric there, so prec(out) = prec(x)."""
    ctx = x.ctx
    p = ctx.p
    if x.prec < 1 or x.valuation() < 1:
        raise DomainError("exp needs v_p(x) >= 1")
    prec = x.prec
    if x.is_zero():
        return ctx.one(prec)
    v = x.valuation()
    terms = _series_terms(p, v, prec, lambda n: vp_factorial(n, p))
    guard = vp_factorial(terms, p)
    mod = p ** (prec + guard)
    acc = [1] + [0] * (ctx.f - 1)
    power = (1,) + (0,) * (ctx.f - 1)
    for n in range(1, terms):
        power = ctx.wmul(power, x.coeffs, mod)
        fact = 1
        for i in range(2, n + 1):
            fact *= i
        k = vp_factorial(n, p)
        inv = pow(fact // p ** k, -1, mod)
        for r in range(ctx.f):
            acc[r] += (power[r] // p ** k) * inv
    return PadicElt(ctx, acc, prec)


def discrete_log_mod_p(z: int, p: int) -> int:
    """Exponent a with g^a = z mod p for the least primitive root g."""
    g = primitive_root(p)
    z %= p
    if z == 0:
        raise NonUnit("zero mod p")
    x = 1
    for a in range(p - 1):
        if x == z:
            return a
        x = x * g % p
    raise DomainError("discrete log failed")


def decompose_unit(z) -> tuple:
    """(a, s) with z = omega(g)^a * gamma^s, omega the Teichmuller character."""
    if isinstance(z, int):
        raise TypeError("pass a PadicElt")
    ctx = z.ctx
    if ctx.f != 1:
        raise DomainError("decompose_unit is defined on Z_p^x")
    if not z.is_unit():
        raise NonUnit("decompose_unit of a non-unit")
    p = ctx.p
    a = discrete_log_mod_p(z.lift(), p)
    tw = teichmuller_lift(z).with_prec(z.prec)
    principal = z * tw.inverse()
    s = padic_log(principal) / padic_log(ctx.gamma.with_prec(z.prec))
    return a, s


def gamma_exponent(z: int, p: int, n: int) -> int:
    """Brute-force s mod p^(n-1) with gamma^s = <z> mod p^n."""
    mod = p ** n
    g = primitive_root(p)
    # strip the torsion part: <z> = z * omega(z)^-1 mod p^n
    w = g
    for _ in range(n + 1):
        w = pow(w, p, mod)
    a = discrete_log_mod_p(z, p)
    principal = z * pow(pow(w, a, mod), -1, mod) % mod
    x, gamma = 1, 1 + p
    for s in range(p ** max(n - 1, 0)):
        if x == principal:
            return s
        x = x * gamma % mod
    raise DomainError("gamma exponent not found")


def context_for_orders(p: int, N: int, orders) -> PadicContext:
    """Minimal unramified degree holding roots of unity of the given prime-to-p orders."""
    need = 1
    for d in orders:
        d0 = d
        while d0 % p == 0:
            d0 //= p
        need = need * d0 // gcd(need, d0)
    f = 1
    while (p ** f - 1) % need:
        f += 1
    return padic_context(p, N, f)
