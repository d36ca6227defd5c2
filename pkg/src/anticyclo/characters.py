"""Finite-order characters and their values in W[zeta].

Root-of-unity values are handled symbolically as exponents q in Q/Z (the value
is exp(2 pi i q) under a fixed embedding) and only turned into ring elements
on demand.  The fixed choices: zeta_{p^k} = 1 + pi at level k, the tower being
compatible under zeta -> zeta^p; zeta_d for d | p^f - 1 is a power of the
Teichmuller lift of a primitive element whose norm is the least primitive
root g mod p, so zeta_{p-1} = omega(g).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .cyclotomic import CycloElt, cyclo_context, ring_at
from .errors import (DomainError, NonUnit, NotInGroup, NotPrimitive, OddExponent,
                     PrecisionLoss)
from .numtheory import kronecker, vp
from .padic import (PadicContext, PadicElt, decompose_unit, discrete_log_mod_p,
                    gamma_exponent, teichmuller_lift)


def _frac(q) -> Fraction:
    q = Fraction(q)
    return q - (q.numerator // q.denominator)


def root_of_unity_value(q, base: PadicContext):
    """exp(2 pi i q) as an element of W (if its order is prime to p) or W[zeta_{p^k}]."""
    q = _frac(q)
    p = base.p
    d = q.denominator
    k = 0
    while d % p == 0:
        d //= p
        k += 1
    pk = p ** k
    r = q.numerator
    x1 = r * pow(pk, -1, d) % d if d > 1 else 0
    x2 = r * pow(d, -1, pk) % pk if pk > 1 else 0
    tame = base.root_of_unity(d) ** x1 if d > 1 else base.one()
    if k == 0:
        return tame
    ring = cyclo_context(base, k)
    return ring.coerce(tame) * ring.zeta(x2)


# ---------------------------------------------------------------------------
# Dirichlet characters mod p^n

@dataclass(frozen=True)
class DirichletChar:
    """omega^a on the torsion part times zeta_{p^(n-1)}^(w s(z)) on <z>."""

    p: int
    n: int
    a: int = 0
    w: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise DomainError("modulus exponent must be >= 0")
        object.__setattr__(self, "a", self.a % (self.p - 1))
        wm = self.p ** max(self.n - 1, 0)
        object.__setattr__(self, "w", self.w % wm if wm > 1 else 0)

    @property
    def modulus(self) -> int:
        return self.p ** self.n

    def conductor_exponent(self) -> int:
        if self.n == 0:
            return 0
        if self.w:
            return self.n - vp(self.w, self.p)
        return 1 if self.a else 0

    def is_primitive(self) -> bool:
        return self.n >= 1 and self.conductor_exponent() == self.n

    def value_level(self) -> int:
        """Cyclotomic level of the minimal ring holding the values."""
        if not self.w:
            return 0
        return self.n - 1 - vp(self.w, self.p)

    def exponent(self, z: int) -> Fraction:
        p = self.p
        if z % p == 0:
            raise NonUnit("character evaluated at a non-unit")
        if self.n == 0:
            return Fraction(0)
        q = Fraction(self.a * discrete_log_mod_p(z, p), p - 1)
        if self.w:
            q += Fraction(self.w * gamma_exponent(z % self.modulus, p, self.n), p ** (self.n - 1))
        return _frac(q)

    def value(self, z, base: PadicContext):
        if isinstance(z, PadicElt):
            if not z.is_unit():
                raise NonUnit("character evaluated at a non-unit")
            z = z.lift()
        if self.n == 0:
            return base.one()
        v = root_of_unity_value(self.exponent(z), base)
        lvl = self.value_level()
        if lvl and not isinstance(v, CycloElt):
            v = cyclo_context(base, lvl).coerce(v)
        return v

    def table(self, base: PadicContext) -> list:
        """Values on Z/p^n, zero on non-units, all in the minimal value ring."""
        if self.n == 0:
            return [base.one()]
        ring = ring_at(base, self.value_level())
        out = []
        for b in range(self.modulus):
            out.append(ring.zero() if b % self.p == 0 else ring.coerce(self.value(b, base)))
        return out

    def inverse(self) -> "DirichletChar":
        return DirichletChar(self.p, self.n, -self.a, -self.w)

    conj = inverse

    def __mul__(self, other: "DirichletChar") -> "DirichletChar":
        if other.p != self.p:
            raise DomainError("characters for different primes")
        n = max(self.n, other.n)
        a = self.lift_to(n)
        b = other.lift_to(n)
        return DirichletChar(self.p, n, a.a + b.a, a.w + b.w)

    def lift_to(self, n: int) -> "DirichletChar":
        if n < self.n:
            raise DomainError("cannot lower the modulus this way")
        if self.n == 0:
            return DirichletChar(self.p, n, 0, 0)
        return DirichletChar(self.p, n, self.a, self.w * self.p ** (n - self.n))

    def parity(self) -> int:
        """chi(-1) as +-1."""
        if self.n == 0:
            return 1
        q = self.exponent(-1 % self.modulus)
        return 1 if q == 0 else -1

    def to_json(self) -> dict:
        return {"modulus": f"{self.p}^{self.n}", "torsion_exp": self.a, "wild_exp": self.w}

    @classmethod
    def from_json(cls, data: dict) -> "DirichletChar":
        p, n = (int(t) for t in str(data["modulus"]).split("^"))
        return cls(p, n, int(data.get("torsion_exp", 0)), int(data.get("wild_exp", 0)))

    @classmethod
    def from_values(cls, p: int, n: int, fn) -> "DirichletChar":
        """Recover (a, w) from a function u -> exponent in Q/Z on (Z/p^n)^x."""
        from .numtheory import primitive_root
        if n == 0:
            return cls(p, 0)
        g = primitive_root(p)
        tw = g
        for _ in range(n + 1):
            tw = pow(tw, p, p ** n)
        a = _frac(fn(tw)) * (p - 1)
        w = _frac(fn((1 + p) % p ** n)) * p ** (n - 1) if n > 1 else Fraction(0)
        if a.denominator != 1 or w.denominator != 1:
            raise DomainError("function is not a Dirichlet character")
        chi = cls(p, n, int(a), int(w))
        for u in range(1, p ** n):
            if u % p and chi.exponent(u) != _frac(fn(u)):
                raise DomainError("function is not a Dirichlet character")
        return chi


def char_eval(chi: DirichletChar, z, base: PadicContext):
    return chi.value(z, base)


def gauss_sum(chi: DirichletChar, base: PadicContext) -> CycloElt:
    """G(chi) = sum_{b mod p^n} chi(b) zeta_{p^n}^b."""
    if not chi.is_primitive():
        raise NotPrimitive("Gauss sum of an imprimitive character")
    ring = cyclo_context(base, chi.n)
    acc = ring.zero()
    for b in range(1, chi.modulus):
        if b % chi.p:
            acc = acc + ring.coerce(chi.value(b, base)) * ring.zeta(b)
    return acc


# ---------------------------------------------------------------------------
# characters of Gamma = 1 + pZ_p

@dataclass(frozen=True)
class GammaChar:
    """eps(gamma) = zeta_{p^j}^r; eps(z) means eps(<z>) on units."""

    p: int
    r: int = 0
    j: int = 0

    def order(self) -> int:
        if self.j == 0 or self.r % self.p ** self.j == 0:
            return 1
        return self.p ** (self.j - vp(self.r % self.p ** self.j, self.p))

    def at_gamma(self, base: PadicContext):
        if self.order() == 1:
            return base.one()
        return cyclo_context(base, self.j).zeta(self.r)

    def exponent(self, z: int) -> Fraction:
        if self.order() == 1:
            return Fraction(0)
        s = gamma_exponent(z % self.p ** (self.j + 1), self.p, self.j + 1)
        return _frac(Fraction(self.r * s, self.p ** self.j))

    def value(self, z: int, base: PadicContext):
        if self.order() == 1:
            return base.one()
        return cyclo_context(base, self.j).zeta(self.r * gamma_exponent(
            z % self.p ** (self.j + 1), self.p, self.j + 1))


# ---------------------------------------------------------------------------
# characters of ring class groups

@dataclass(frozen=True)
class ClassGroupChar:
    """Character given by the exponents (in Q/Z) of its values on the group generators."""

    group: object
    exps: tuple

    def __post_init__(self):
        exps = tuple(_frac(Fraction(e)) for e in self.exps)
        if len(exps) != len(self.group.invariants):
            raise DomainError("one exponent per generator is required")
        for e, d in zip(exps, self.group.invariants):
            if (e * d).denominator != 1:
                raise DomainError("exponent incompatible with generator order")
        object.__setattr__(self, "exps", exps)

    @classmethod
    def trivial(cls, group) -> "ClassGroupChar":
        return cls(group, tuple(Fraction(0) for _ in group.invariants))

    def order(self) -> int:
        d = 1
        for e in self.exps:
            d = d * e.denominator // gcd(d, e.denominator)
        return d

    def inverse(self) -> "ClassGroupChar":
        return ClassGroupChar(self.group, tuple(-e for e in self.exps))


def class_char_eval(chi: ClassGroupChar, x) -> Fraction:
    """Value at the class x, as an exponent in Q/Z."""
    try:
        coords = chi.group.discrete_log(x)
    except KeyError:
        raise NotInGroup(f"{x} is not in the class group") from None
    return _frac(sum(c * e for c, e in zip(coords, chi.exps)))


def class_char_value(chi: ClassGroupChar, x, base: PadicContext):
    return root_of_unity_value(class_char_eval(chi, x), base)


# ---------------------------------------------------------------------------
# avatars on Z_p^x

@dataclass(frozen=True)
class AvatarOnUnits:
    finite: DirichletChar
    m: int = 0


def avatar_eval(av: AvatarOnUnits, z: PadicElt):
    if not z.is_unit():
        raise NonUnit("avatar evaluated at a non-unit")
    v = av.finite.value(z, z.ctx)
    return v * (z ** av.m) if isinstance(v, CycloElt) else v * z ** av.m


# ---------------------------------------------------------------------------
# the critical character theta with theta^2 = [.]

def sqrt_series_coeffs(M: int) -> list:
    """binom(1/2, j) for j < M, as exact fractions with 2-power denominators."""
    out = [Fraction(1)]
    for j in range(1, M):
        out.append(out[-1] * (Fraction(1, 2) - (j - 1)) / j)
    return out


def _frac_to_padic(q: Fraction, ctx: PadicContext) -> PadicElt:
    mod = ctx.modulus
    if q.denominator % ctx.p == 0:
        raise DomainError("denominator divisible by p")
    return ctx.coerce(q.numerator * pow(q.denominator, -1, mod))


def _power_prec_bound(a0: int, steps: int, e: int, p: int) -> int:
    """Lower bound for v(rho^(p^steps) - 1) given v(rho - 1) = a0 (units of v(p) = e)."""
    a = a0
    for _ in range(steps):
        a = min(p * a, e + a)
    return a


@dataclass(frozen=True)
class CriticalCharacter:
    """theta(z) = omega^b(z) (1+T)^(s(z)/2), with 2b = a0 mod p-1."""

    p: int
    a0: int
    b: int
    branch: int = 0

    def lambda_series(self, z: PadicElt, M: int):
        """theta(z) in Lambda, truncated at T^M, via the binomial series of s(z)/2."""
        from .measures import PowerSeries
        ctx = z.ctx
        a, s = decompose_unit(z)
        half = s * _frac_to_padic(Fraction(1, 2), ctx.with_precision(max(s.prec, 1)))
        tw = teichmuller_lift(ctx.coerce(ctx.g)) ** (self.b * a % (self.p - 1))
        coeffs = []
        c = ctx.one(half.prec)
        for j in range(M):
            coeffs.append(c * tw.with_prec(half.prec))
            # binom(x, j+1) = binom(x, j) (x - j) / (j + 1)
            c = c * (half - j) / ctx.coerce(j + 1)
        return PowerSeries(ctx, coeffs, False, "lambda")

    def specialize(self, z, k: int, eps: "GammaChar | None" = None, M: int = 30):
        """theta_(k,eps)(z): substitute 1 + T -> eps(gamma) gamma^k."""
        if k < 2:
            raise DomainError("weight must be >= 2")
        if isinstance(z, int):
            raise TypeError("pass a PadicElt unit")
        base = z.ctx
        p = self.p
        a, s = decompose_unit(z)
        eps = eps or GammaChar(p)
        gk = base.gamma ** k
        if eps.order() == 1:
            t0 = gk - 1
            ring = base
            v_t0 = t0.valuation()
            e = 1
        else:
            ring = cyclo_context(base, eps.j)
            t0 = ring.coerce(eps.at_gamma(base)) * gk - 1
            v_t0 = t0.pi_val()
            e = ring.e
        coeffs = sqrt_series_coeffs(M)
        rho = ring.zero()
        for q in reversed(coeffs):
            rho = rho * t0 + _frac_to_padic(q, base)
        # truncating the series at T^M costs v(t0^M)
        K_trunc = M * v_t0
        rho = rho.with_prec(K_trunc) if isinstance(rho, CycloElt) else rho.with_prec(K_trunc)
        s_int = s.lift()
        val = rho ** s_int
        v_rho = (rho - 1).pi_val() if isinstance(rho, CycloElt) else (rho - 1).valuation()
        K_s = _power_prec_bound(max(v_rho, 1), s.prec, e, p)
        val = val.with_prec(K_s) if isinstance(val, CycloElt) else val.with_prec(K_s)
        tw = teichmuller_lift(base.coerce(base.g)) ** (self.b * a % (p - 1))
        return val * ring.coerce(tw) if isinstance(val, CycloElt) else val * tw

    def lambda_on_units(self, z, k: int, eps: "GammaChar | None" = None, M: int = 30):
        """lambda_(k,eps) on units: the composite through x -> x^-1 gives theta^-2."""
        th = self.specialize(z, k, eps, M)
        return (th * th).inverse()


def build_critical_character(p: int, a0: int, branch: int = 0) -> CriticalCharacter:
    if (a0 % (p - 1)) % 2:
        raise OddExponent("psi exponent must be even for a square root to exist")
    b = (a0 % (p - 1)) // 2
    if branch:
        b = (b + (p - 1) // 2) % (p - 1)
    return CriticalCharacter(p, a0 % (p - 1), b, 1 if branch else 0)


def specialize_theta(theta: CriticalCharacter, k: int, eps: "GammaChar | None" = None,
                     M: int = 30):
    """The function z -> theta_(k,eps)(z) on units."""
    return lambda z: theta.specialize(z, k, eps, M)


def critical_target(theta: CriticalCharacter, z: PadicElt, k: int, eps: "GammaChar | None" = None):
    """eps(z) psi(z) omega^-k(z) z^k, computed directly (the value theta^2 must match)."""
    base = z.ctx
    p = theta.p
    eps = eps or GammaChar(p)
    zi = z.lift()
    tw = teichmuller_lift(z)
    rhs = tw ** ((theta.a0 - k) % (p - 1)) * z ** k
    if eps.order() == 1:
        return rhs
    ring = cyclo_context(base, eps.j)
    return ring.coerce(rhs) * eps.value(zi, base)


# ---------------------------------------------------------------------------
# conductor recipes

@dataclass
class HeckeCharRecipeData:
    """Bookkeeping for a Hecke character built by the conductor recipe.

    ``conductor`` maps (ell, tag) to an exponent; tag is '+' or '-' for the two
    primes above a split ell and '0' otherwise.  ``p_side`` names the prime above
    p that may carry conductor.
    """

    D: int
    p: int
    conductor: dict = field(default_factory=dict)
    infinity_type: tuple = (0, 0)
    weight: int = 0
    restriction_exp: int = 0
    p_side: str = "+"
    max_p_exponent: int = 1


def validate_recipe(data: HeckeCharRecipeData, nebentypus: DirichletChar | None = None,
                    tame_level: int = 1) -> dict:
    """Check conditions (i)-(iv) of the recipe; returns a pass/fail report."""
    D, p = data.D, data.p
    report = {"fields": True, "i": True, "ii": True, "iii": True, "iv": True}
    for (ell, tag), k in data.conductor.items():
        if k < 0 or tag not in ("+", "-", "0"):
            report["fields"] = False
            continue
        split = kronecker(D, ell) == 1
        if split != (tag in ("+", "-")):
            report["fields"] = False
        if k and ell != p and tame_level % ell:
            report["i"] = False
    for ell in {ell for (ell, _) in data.conductor}:
        if data.conductor.get((ell, "+"), 0) and data.conductor.get((ell, "-"), 0):
            report["ii"] = False
    other = "-" if data.p_side == "+" else "+"
    if data.conductor.get((p, other), 0) or data.conductor.get((p, data.p_side), 0) > data.max_p_exponent:
        report["iii"] = False
    a = nebentypus.a if nebentypus is not None else 0
    if tuple(data.infinity_type) != (data.weight, 0):
        report["iv"] = False
    if (data.restriction_exp + a) % (p - 1):
        report["iv"] = False
    report["all"] = all(report[key] for key in ("fields", "i", "ii", "iii", "iv"))
    return report
