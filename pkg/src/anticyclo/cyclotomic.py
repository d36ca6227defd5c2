"""Arithmetic in W[zeta_{p^n}] with pi-adic precision, pi = zeta - 1.

Elements are stored in the power basis {pi^i x^r} (i < e, r < f).  An element
known modulo pi^K is normalized so that the coefficient of pi^i is reduced
modulo p^ceil((K - i)/e); this makes the representative canonical because
v_pi(sum c_i pi^i) = min(e v_p(c_i) + i).
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

from . import kernels
from .errors import DomainError, NonUnit, NotRational, PrecisionLoss
from .padic import PadicContext, PadicElt, padic_context


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class CycloContext:
    """The ring W_f[zeta_{p^n}], totally ramified of degree e over W_f."""

    def __init__(self, base: PadicContext, n: int):
        if n < 1:
            raise DomainError("cyclotomic level must be >= 1")
        p = base.p
        self.base = base
        self.p = p
        self.n = n
        self.f = base.f
        self.q = p ** n
        self.e = p ** (n - 1) * (p - 1)
        self.pi_prec = self.e * base.N
        self.N = base.N
        # E(pi) = sum_{j<p} (1+pi)^(j p^(n-1)), monic of degree e
        E = [0] * (self.e + 1)
        step = p ** (n - 1)
        for j in range(p):
            k = j * step
            for i in range(k + 1):
                E[i] += comb(k, i)
        assert E[-1] == 1
        self.rel = tuple(-c for c in E[:-1])
        self.hred = base.hred
        self._moduli = {}

    def __repr__(self):
        return f"CycloContext(p={self.p}, n={self.n}, N={self.N}, f={self.f})"

    @property
    def key(self):
        return (self.base.key, self.n)

    def with_precision(self, N: int) -> "CycloContext":
        return cyclo_context(self.base.with_precision(N), self.n)

    def flat_moduli(self, K: int) -> tuple:
        """Modulus of each flat coefficient for an element of pi-precision K."""
        mods = self._moduli.get(K)
        if mods is None:
            e, f, p = self.e, self.f, self.p
            mods = tuple(p ** max(_ceil_div(K - i, e), 0) for i in range(e) for _ in range(f))
            self._moduli[K] = mods
        return mods

    def modulus_for(self, K: int) -> int:
        return self.p ** max(_ceil_div(K, self.e), 0)

    # raw kernel wrappers on flat vectors
    def mul_raw(self, a, b, m):
        return kernels.cyc_mul(a, b, self.e, self.f, self.rel, self.hred, m)

    def pow_raw(self, a, k, m):
        return kernels.cyc_pow(a, k, self.e, self.f, self.rel, self.hred, m)

    # constructors
    def __call__(self, x, pi_prec=None) -> "CycloElt":
        return self.coerce(x, pi_prec)

    def element(self, flat, pi_prec=None) -> "CycloElt":
        return CycloElt(self, flat, self.pi_prec if pi_prec is None else pi_prec)

    def zero(self, pi_prec=None) -> "CycloElt":
        return self.element([0] * (self.e * self.f), pi_prec)

    def one(self, pi_prec=None) -> "CycloElt":
        return self.coerce(1, pi_prec)

    @property
    def pi(self) -> "CycloElt":
        v = [0] * (self.e * self.f)
        if self.e > 1:
            v[self.f] = 1
        else:
            # e = 1 only for p = 2, excluded
            raise DomainError("degenerate cyclotomic level")
        return self.element(v)

    def coerce(self, x, pi_prec=None) -> "CycloElt":
        e, f = self.e, self.f
        cap = self.pi_prec if pi_prec is None else min(pi_prec, self.pi_prec)
        if isinstance(x, CycloElt):
            if x.ctx.base.key != self.base.key:
                raise DomainError("incompatible base rings")
            if x.ctx.n == self.n:
                return CycloElt(self, x.coeffs, min(x.pi_prec, cap))
            if x.ctx.n < self.n:
                return self._embed_lower(x, cap)
            raise DomainError("cannot coerce from a higher cyclotomic level; use descend")
        if isinstance(x, PadicElt):
            if x.ctx.key != self.base.key:
                raise DomainError("incompatible base rings")
            v = list(x.coeffs) + [0] * (e * f - f)
            return CycloElt(self, v, min(e * x.prec, cap))
        if isinstance(x, int):
            v = [0] * (e * f)
            v[0] = x
            return CycloElt(self, v, cap)
        raise TypeError(f"cannot coerce {type(x).__name__} to a cyclotomic element")

    def _embed_lower(self, x: "CycloElt", cap: int) -> "CycloElt":
        d = self.n - x.ctx.n
        K = min(x.pi_prec * self.p ** d, cap)
        m = self.modulus_for(K)
        # pi_lower = (1+pi)^(p^d) - 1
        img = self.zeta_raw(self.p ** d, m)
        img[0] = (img[0] - 1) % m
        f = self.f
        cs = [x.coeffs[i * f:(i + 1) * f] for i in range(x.ctx.e)]
        flat = kernels.cyc_eval_scalar(cs, img, self.e, f, self.rel, self.hred, m)
        return CycloElt(self, flat, K)

    @lru_cache(maxsize=None)
    def _zeta_table(self):
        # (1+pi)^j for j < p^n at full modulus, by repeated multiplication by 1+pi
        e, f = self.e, self.f
        m = self.base.modulus
        cur = [0] * (e * f)
        cur[0] = 1
        table = []
        for _ in range(self.q):
            table.append(tuple(cur))
            nxt = list(cur)
            for i in range(e - 1, 0, -1):
                for r in range(f):
                    nxt[i * f + r] += cur[(i - 1) * f + r]
            top = cur[(e - 1) * f:e * f]
            for i in range(e):
                ri = self.rel[i]
                if ri:
                    for r in range(f):
                        nxt[i * f + r] += top[r] * ri
            cur = [c % m for c in nxt]
        return table

    def zeta_raw(self, j: int, m: int) -> list:
        return [c % m for c in self._zeta_table()[j % self.q]]

    def primitive_root(self, j: int = 1) -> "CycloElt":
        """zeta_{p^n}^j."""
        return self.element(self._zeta_table()[j % self.q])

    zeta = primitive_root

    # change of basis, pi-powers <-> zeta-powers, on flat vectors
    def to_zeta(self, flat, m):
        e, f = self.e, self.f
        out = [0] * (e * f)
        for i in range(e):
            for r in range(f):
                c = flat[i * f + r]
                if c:
                    for k in range(i + 1):
                        t = comb(i, k)
                        out[k * f + r] += c * t if (i - k) % 2 == 0 else -c * t
        return [c % m for c in out]

    def from_zeta(self, flat, m):
        e, f = self.e, self.f
        out = [0] * (e * f)
        for k in range(e):
            for r in range(f):
                d = flat[k * f + r]
                if d:
                    for i in range(k + 1):
                        out[i * f + r] += d * comb(k, i)
        return [c % m for c in out]

    def zeta_reduce(self, vec, m):
        """Reduce a zeta-polynomial (length p^n, f-vector entries) to the zeta basis."""
        e, f, p = self.e, self.f, self.p
        step = p ** (self.n - 1)
        v = list(vec)
        for i in range(len(v) // f - 1, e - 1, -1):
            for r in range(f):
                t = v[i * f + r]
                if t:
                    v[i * f + r] = 0
                    for j in range(p - 1):
                        v[(i - e + j * step) * f + r] -= t
        return [c % m for c in v[:e * f]]


@lru_cache(maxsize=None)
def cyclo_context(base: PadicContext, n: int) -> CycloContext:
    return CycloContext(base, n)


class CycloElt:
    __slots__ = ("ctx", "coeffs", "pi_prec")

    def __init__(self, ctx: CycloContext, flat, pi_prec: int):
        pi_prec = min(pi_prec, ctx.pi_prec)
        if pi_prec < 0:
            raise PrecisionLoss("negative pi-adic precision", deficit=-pi_prec)
        mods = ctx.flat_moduli(pi_prec)
        if len(flat) != len(mods):
            raise DomainError("coefficient vector has wrong length")
        self.ctx = ctx
        self.coeffs = tuple(int(c) % m for c, m in zip(flat, mods))
        self.pi_prec = pi_prec

    def pi_val(self) -> int:
        """v_pi, capped at pi_prec when zero to precision."""
        ctx = self.ctx
        e, f, p = ctx.e, ctx.f, ctx.p
        best = self.pi_prec
        for i in range(e):
            for r in range(f):
                c = self.coeffs[i * f + r]
                if c:
                    k = 0
                    while c % p == 0:
                        c //= p
                        k += 1
                    best = min(best, e * k + i)
        return best

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_unit(self) -> bool:
        return self.pi_prec >= 1 and self.pi_val() == 0

    def with_prec(self, pi_prec: int) -> "CycloElt":
        return CycloElt(self.ctx, self.coeffs, min(pi_prec, self.pi_prec))

    def coefficient(self, i: int) -> PadicElt:
        ctx = self.ctx
        prec = max(_ceil_div(self.pi_prec - i, ctx.e), 0)
        return PadicElt(ctx.base, self.coeffs[i * ctx.f:(i + 1) * ctx.f], prec)

    def __repr__(self):
        e, f = self.ctx.e, self.ctx.f
        terms = []
        for i in range(e):
            c = self.coeffs[i * f:(i + 1) * f]
            if any(c):
                body = str(c[0]) if f == 1 else str(list(c))
                terms.append(body if i == 0 else f"{body}*pi^{i}")
        return (" + ".join(terms) or "0") + f" + O(pi^{self.pi_prec})"

    def _other(self, other):
        if isinstance(other, CycloElt):
            if other.ctx.key == self.ctx.key:
                return other
            if other.ctx.base.key == self.ctx.base.key and other.ctx.n < self.ctx.n:
                return self.ctx.coerce(other)
            raise DomainError("incompatible cyclotomic contexts")
        if isinstance(other, (int, PadicElt)):
            return self.ctx.coerce(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return CycloElt(self.ctx, [a + b for a, b in zip(self.coeffs, o.coeffs)],
                        min(self.pi_prec, o.pi_prec))

    __radd__ = __add__

    def __neg__(self):
        return CycloElt(self.ctx, [-a for a in self.coeffs], self.pi_prec)

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
        ctx = self.ctx
        if isinstance(other, int):
            if other == 0:
                return ctx.zero()
            k, t = 0, other
            while t % ctx.p == 0:
                t //= ctx.p
                k += 1
            return CycloElt(ctx, [c * other for c in self.coeffs], self.pi_prec + k * ctx.e)
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        K = min(self.pi_prec + o.pi_val(), o.pi_prec + self.pi_val(), ctx.pi_prec)
        m = ctx.modulus_for(K)
        return CycloElt(ctx, ctx.mul_raw(self.coeffs, o.coeffs, m), K)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        ctx = self.ctx
        if k == 0:
            return ctx.one()
        v = self.pi_val()
        K = self.pi_prec if v == 0 else self.pi_prec + (k - 1) * v
        K = min(K, ctx.pi_prec)
        m = ctx.modulus_for(K)
        return CycloElt(ctx, ctx.pow_raw(self.coeffs, k, m), K)

    def inverse(self) -> "CycloElt":
        if not self.is_unit():
            raise NonUnit("cyclotomic element is not a unit")
        ctx = self.ctx
        c0 = self.coefficient(0).with_prec(1).inverse()
        x = CycloElt(ctx, list(c0.coeffs) + [0] * (ctx.e * ctx.f - ctx.f), 1)
        K = self.pi_prec
        prec = 1
        while prec < K:
            prec = min(2 * prec, K)
            m = ctx.modulus_for(prec)
            ax = ctx.mul_raw(self.coeffs, x.coeffs, m)
            corr = [-c for c in ax]
            corr[0] += 2
            x = CycloElt(ctx, ctx.mul_raw(x.coeffs, corr, m), prec)
        return x.with_prec(K)

    def divide_by_p(self, k: int = 1) -> "CycloElt":
        ctx = self.ctx
        need = k * ctx.e
        v = self.pi_val()
        if v < need:
            raise PrecisionLoss(f"element not divisible by p^{k}", deficit=need - v)
        q = ctx.p ** k
        return CycloElt(ctx, [c // q for c in self.coeffs], self.pi_prec - need)

    def __eq__(self, other):
        if not isinstance(other, (int, PadicElt, CycloElt)):
            return NotImplemented
        if isinstance(other, CycloElt) and other.ctx.n > self.ctx.n:
            return other == self
        o = self._other(other)
        K = min(self.pi_prec, o.pi_prec)
        return (self - o).with_prec(K).is_zero()

    __hash__ = None

    def descend_to_base(self) -> PadicElt:
        """The element as a member of W, if it lies there."""
        ctx = self.ctx
        f = ctx.f
        if any(self.coeffs[f:]):
            raise NotRational("element has nonzero pi-coefficients")
        return PadicElt(ctx.base, self.coeffs[:f], self.pi_prec // ctx.e)

    def descend(self, level: int):
        """Express the element at a lower cyclotomic level (0 means the base ring)."""
        ctx = self.ctx
        if level == ctx.n:
            return self
        if level == 0:
            return self.descend_to_base()
        if level > ctx.n:
            raise DomainError("descend to a higher level")
        p, f, e = ctx.p, ctx.f, ctx.e
        L = self.pi_prec // e
        m = p ** L
        z = ctx.to_zeta(self.coeffs, m)
        step = p ** (ctx.n - level)
        low = cyclo_context(ctx.base, level)
        sub = []
        for k in range(e):
            blk = z[k * f:(k + 1) * f]
            if k % step:
                if any(blk):
                    raise NotRational(f"element does not lie at level {level}")
            else:
                sub.extend(blk)
        return CycloElt(low, low.from_zeta(sub, m), low.e * L)

    def to_json(self) -> dict:
        ctx = self.ctx
        return {"n": ctx.n, "piPrec": self.pi_prec,
                "coeffs": [self.coefficient(i).to_json() for i in range(ctx.e)]}

    @classmethod
    def from_json(cls, data: dict, N: int | None = None) -> "CycloElt":
        cs = [PadicElt.from_json(c) for c in data["coeffs"]]
        p, f = cs[0].ctx.p, cs[0].ctx.f
        h = cs[0].ctx.h
        K = data["piPrec"]
        n = data["n"]
        e = p ** (n - 1) * (p - 1)
        base = padic_context(p, max(N or 1, _ceil_div(K, e), 1), f, h if f > 1 else None)
        ctx = cyclo_context(base, n)
        flat = []
        for c in cs:
            flat.extend(c.coeffs)
        return CycloElt(ctx, flat, K)


# helpers for code that works uniformly over W and W[zeta]

def ring_level(ring) -> int:
    return ring.n if isinstance(ring, CycloContext) else 0


def base_of(ring) -> PadicContext:
    return ring.base if isinstance(ring, CycloContext) else ring


def ring_at(base: PadicContext, level: int, N: int | None = None):
    b = base if N is None else base.with_precision(N)
    return b if level == 0 else cyclo_context(b, level)


def elt_prec(x) -> int:
    """Absolute p-adic precision of a ring element (floor for cyclotomic ones)."""
    if isinstance(x, CycloElt):
        return x.pi_prec // x.ctx.e
    return x.prec


def to_flat(x, ring):
    """Integer lift of x as a flat vector for ring (a CycloContext)."""
    return list(ring.coerce(x).coeffs)


def embed(x, ring):
    return ring.coerce(x)
