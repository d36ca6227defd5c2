"""Bounded measures on Z_p in their two faces: Amice series and distributions.

A ``PowerSeries`` with ``exact=True`` is a polynomial: coefficients past its
length are zero.  Such a series of degree < M is the Amice transform of a
finite combination of Dirac masses at 0..M-1, so twisting, refining and
rebuilding are lossless.  With ``exact=False`` the series is only known modulo
T^M and every operation caps its output precision by a bound on the tail.

Precision discipline: the maps series -> distribution, series -> twisted
series and the Gauss-sum unfolding are Z_p-linear and integral.  We compute
them on exact integer lifts carrying n guard digits, divide by p^n, and the
result is valid to the input precision.  A failed divisibility check raises
``PrecisionLoss`` with the deficit.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb

from . import kernels
from .cyclotomic import (CycloContext, CycloElt, base_of, cyclo_context, elt_prec,
                         ring_at, ring_level)
from .errors import DomainError, PrecisionExhausted, PrecisionLoss, TruncationError
from .numtheory import vp_factorial
from .padic import PadicContext, PadicElt, padic_context


# ---------------------------------------------------------------------------
# ring element plumbing

def _prec_of(x) -> int:
    return elt_prec(x)


def _relift(x, Pw: int):
    """Treat the integer lift of x as exact to p^Pw, in a context of that cap."""
    if isinstance(x, CycloElt):
        ctx = cyclo_context(x.ctx.base.with_precision(Pw), x.ctx.n)
        return CycloElt(ctx, x.coeffs, ctx.pi_prec)
    ctx = x.ctx.with_precision(Pw)
    return PadicElt(ctx, x.coeffs, Pw)


def _cap(x, P: int):
    """x with precision lowered to P p-adic digits."""
    if isinstance(x, CycloElt):
        return x.with_prec(min(x.pi_prec, max(P, 0) * x.ctx.e))
    return x.with_prec(max(P, 0))


def _rehome(x, ring):
    """Move x into ring (same base field, level >= x's level), keeping its precision."""
    if isinstance(ring, CycloContext):
        if isinstance(x, CycloElt) and x.ctx.n == ring.n:
            return CycloElt(ring, x.coeffs, x.pi_prec)
        return ring.coerce(_to_cap(x, ring.base.N))
    if isinstance(x, CycloElt):
        x = x.descend_to_base()
    return PadicElt(ring, x.coeffs, x.prec)


def _to_cap(x, N):
    if isinstance(x, CycloElt):
        ctx = cyclo_context(x.ctx.base.with_precision(max(N, 1)), x.ctx.n)
        return CycloElt(ctx, x.coeffs, x.pi_prec)
    return PadicElt(x.ctx.with_precision(max(N, 1)), x.coeffs, x.prec)


def _as_elt(x, ring):
    if isinstance(x, int):
        return ring.coerce(x)
    return x


def common_ring(*rings):
    """Smallest ring containing all of the given rings (same base field)."""
    base = base_of(rings[0])
    level = max(ring_level(r) for r in rings)
    N = max(base_of(r).N for r in rings)
    for r in rings:
        if base_of(r).key != base.key:
            raise DomainError("rings over different base fields")
    return ring_at(base, level, N)


# ---------------------------------------------------------------------------
# types

class PowerSeries:
    """Truncated or polynomial element of R[[T]], R = W or W[zeta]."""

    __slots__ = ("ring", "coeffs", "exact", "tag")

    def __init__(self, ring, coeffs, exact: bool = True, tag: str | None = None):
        self.ring = ring
        self.coeffs = tuple(_as_elt(c, ring) for c in coeffs)
        if not self.coeffs:
            self.coeffs = (ring.zero(),)
        self.exact = exact
        self.tag = tag or ("cyclo" if isinstance(ring, CycloContext) else "padic")

    @classmethod
    def from_ints(cls, ring, ints, exact=True, prec=None, tag=None):
        return cls(ring, [ring.coerce(c, prec) if prec is not None else ring.coerce(c) for c in ints],
                   exact, tag)

    @classmethod
    def dirac(cls, ring, a: int, M: int | None = None):
        """(1+T)^a, the Amice transform of the Dirac mass at a >= 0."""
        L = max(a + 1, M or 0)
        return cls(ring, [ring.coerce(comb(a, j)) for j in range(L)], True)

    @property
    def M(self) -> int:
        return len(self.coeffs)

    @property
    def level(self) -> int:
        return ring_level(self.ring)

    def precision(self) -> int:
        return min(_prec_of(c) for c in self.coeffs)

    def coefficient(self, j: int):
        if j < self.M:
            return self.coeffs[j]
        if self.exact:
            return self.ring.zero()
        raise TruncationError(f"coefficient {j} beyond truncation {self.M}")

    def __repr__(self):
        kind = "poly" if self.exact else f"O(T^{self.M})"
        return f"PowerSeries({list(self.coeffs)!r}, {kind})"

    def _binary(self, other, op):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        ring = common_ring(self.ring, other.ring)
        L = max(self.M, other.M)
        if not self.exact:
            L = min(L, self.M)
        if not other.exact:
            L = min(L, other.M)
        out = [op(ring.coerce(self.coefficient(j)) if ring_level(ring) else self.coefficient(j),
                  other.coefficient(j)) for j in range(L)]
        return PowerSeries(ring, out, self.exact and other.exact, self.tag)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __neg__(self):
        return PowerSeries(self.ring, [-c for c in self.coeffs], self.exact, self.tag)

    def scale(self, c):
        return PowerSeries(self.ring if not isinstance(c, CycloElt) or ring_level(self.ring) >= c.ctx.n
                           else c.ctx,
                           [c * x if isinstance(c, CycloElt) else x * c for x in self.coeffs],
                           self.exact, self.tag)

    def mul(self, other: "PowerSeries", M: int | None = None) -> "PowerSeries":
        """Product, truncated to M (or to the honest length for truncated inputs)."""
        ring = common_ring(self.ring, other.ring)
        full = self.M + other.M - 1
        L = full if (self.exact and other.exact) else min(self.M, other.M)
        exact = self.exact and other.exact
        if M is not None and M < L:
            L, exact = M, False
        out = []
        a = [ring.coerce(c) if ring_level(ring) else c for c in self.coeffs]
        b = [ring.coerce(c) if ring_level(ring) else c for c in other.coeffs]
        if ring_level(ring) == 0 and ring.f == 1:
            va = min(c.valuation() for c in a)
            vb = min(c.valuation() for c in b)
            P = min(self.precision() + vb, other.precision() + va, ring.N)
            raw = kernels.series_mul([c.lift() for c in a], [c.lift() for c in b], L, ring.p ** P)
            out = [PadicElt(ring, (c,), P) for c in raw]
        else:
            for k in range(L):
                acc = ring.zero()
                for i in range(max(0, k - len(b) + 1), min(k + 1, len(a))):
                    acc = acc + a[i] * b[k - i]
                out.append(acc)
        return PowerSeries(ring, out, exact, self.tag)

    __mul__ = mul

    def truncate(self, M: int) -> "PowerSeries":
        if M >= self.M:
            return self
        exact = self.exact and all(c.is_zero() for c in self.coeffs[M:])
        return PowerSeries(self.ring, self.coeffs[:M], exact, self.tag)

    def evaluate(self, x):
        """Phi(x) for x of positive valuation (or any x when exact)."""
        if isinstance(x, int):
            x = self.ring.coerce(x)
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * x + c
        if isinstance(x, CycloElt) and not isinstance(acc, CycloElt):
            acc = x.ctx.coerce(acc)
        if not self.exact:
            v = x.pi_val() if isinstance(x, CycloElt) else x.valuation()
            if v == 0:
                raise TruncationError("evaluating a truncated series at a unit")
            tail = self.M * v
            if isinstance(acc, CycloElt):
                if not isinstance(x, CycloElt):
                    tail *= acc.ctx.e
                acc = acc.with_prec(tail)
            else:
                acc = acc.with_prec(tail)
        return acc

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        L = max(self.M, other.M)
        if not self.exact:
            L = min(L, self.M)
        if not other.exact:
            L = min(L, other.M)
        for j in range(L):
            a, b = self.coefficient(j), other.coefficient(j)
            if not (a == b):
                return False
        return True

    __hash__ = None

    def to_json(self) -> dict:
        kind = "lambda" if self.tag == "lambda" else ("cyclo" if self.level else "padic")
        return {"ring": kind, "M": self.M, "exact": self.exact,
                "coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "PowerSeries":
        raw = data["coeffs"]
        if raw and "n" in raw[0]:
            cs = [CycloElt.from_json(c) for c in raw]
            N = max(c.ctx.N for c in cs)
            ring = cyclo_context(cs[0].ctx.base.with_precision(N), cs[0].ctx.n)
            cs = [CycloElt(ring, c.coeffs, c.pi_prec) for c in cs]
        else:
            cs = [PadicElt.from_json(c) for c in raw]
            N = max(c.prec for c in cs) if cs else 1
            ring = cs[0].ctx.with_precision(max(N, 1))
            cs = [PadicElt(ring, c.coeffs, c.prec) for c in cs]
        tag = data.get("ring")
        return cls(ring, cs, data.get("exact", True), tag if tag == "lambda" else None)


class Distribution:
    """Values mu(b + p^n Z_p) for b mod p^n."""

    __slots__ = ("level", "ring", "table")

    def __init__(self, level: int, ring, table):
        p = base_of(ring).p
        if len(table) != p ** level:
            raise DomainError("table length must be p^level")
        self.level = level
        self.ring = ring
        self.table = tuple(_as_elt(v, ring) for v in table)

    @property
    def p(self) -> int:
        return base_of(self.ring).p

    def coarsen(self, level: int) -> "Distribution":
        """Sum fibers down to a lower level."""
        if level > self.level:
            raise DomainError("coarsen to a higher level")
        q = self.p ** level
        out = [self.ring.zero() for _ in range(q)]
        for b, v in enumerate(self.table):
            out[b % q] = out[b % q] + v
        return Distribution(level, self.ring, out)

    def __eq__(self, other):
        if not isinstance(other, Distribution) or other.level != self.level:
            return NotImplemented
        return all(a == b for a, b in zip(self.table, other.table))

    __hash__ = None

    def __repr__(self):
        return f"Distribution(level={self.level}, {list(self.table)!r})"


class Measure:
    """A measure on Z_p (or on Z_p^x, as a measure on Z_p with that support)."""

    def __init__(self, series: PowerSeries, support: str = "Zp"):
        if support not in ("Zp", "units"):
            raise DomainError("support must be 'Zp' or 'units'")
        self.series = series
        self.support = support
        self._tables = {}

    def distribution(self, n: int) -> Distribution:
        if n not in self._tables:
            self._tables[n] = distribution_from_series(self.series, n)
        return self._tables[n]

    def check_unit_support(self, levels=(1, 2)) -> bool:
        p = base_of(self.series.ring).p
        for n in levels:
            d = self.distribution(n)
            if any(not d.table[b].is_zero() and _prec_of(d.table[b]) > 0
                   for b in range(0, p ** n, p)):
                return False
        return True

    def restrict_to_units(self) -> "Measure":
        p = base_of(self.series.ring).p
        ind = [0 if b % p == 0 else 1 for b in range(p)]
        return Measure(twist_pointwise(self.series, ind), "units")

    def moment(self, m: int):
        return moment(self.series, m)


# ---------------------------------------------------------------------------
# combinatorial tables

@lru_cache(maxsize=None)
def _stirling2_row(m: int) -> tuple:
    """S(m, j) * j! for j = 0..m (surjection counts)."""
    row = [1]
    for i in range(1, m + 1):
        new = [0] * (i + 1)
        for j in range(i + 1):
            s = 0
            if j < i:
                s += j * row[j]
            if j >= 1:
                s += row[j - 1]
            new[j] = s
        row = new
    # row[j] is S(m, j); multiply by j!
    out, fact = [], 1
    for j, s in enumerate(row):
        if j:
            fact *= j
        out.append(s * fact)
    return tuple(out)


@lru_cache(maxsize=None)
def _stirling1_row(n: int) -> tuple:
    """Signed s(n, m) for m = 0..n, i.e. the coefficients of x(x-1)...(x-n+1)."""
    row = [1]
    for i in range(n):
        new = [0] * (len(row) + 1)
        for m, c in enumerate(row):
            new[m + 1] += c
            new[m] -= i * c
        row = new
    return tuple(row)


# ---------------------------------------------------------------------------
# conversions

def series_from_distribution(d: Distribution, M: int | None = None) -> PowerSeries:
    """Sum_b d(b) (1+T)^b, an exact polynomial of degree < p^n."""
    ring = d.ring
    q = len(d.table)
    L = q
    coeffs = []
    for j in range(L):
        acc = ring.zero()
        for b in range(j, q):
            acc = acc + d.table[b] * comb(b, j)
        coeffs.append(acc)
    s = PowerSeries(ring, coeffs, True)
    if M is not None:
        if M > L:
            s = PowerSeries(ring, list(coeffs) + [ring.zero()] * (M - L), True)
        else:
            s = s.truncate(M)
    return s


def _tail_cap_distribution(Phi: PowerSeries, n: int) -> int:
    if Phi.exact:
        return 10 ** 9
    p = base_of(Phi.ring).p
    e = p ** (n - 1) * (p - 1)
    return max(Phi.M // p ** n, (Phi.M - n * e) // e)


def _work_rings(base: PadicContext, level: int, Pw: int):
    b = base.with_precision(Pw)
    return b, (cyclo_context(b, level) if level else b)


def _flat_coeffs(Phi: PowerSeries, W: CycloContext, Pw: int):
    """Coefficients of Phi lifted exactly to p^Pw, as flat vectors of W."""
    out = []
    for c in Phi.coeffs:
        lifted = _relift(c, Pw)
        out.append(list(W.coerce(lifted).coeffs))
    return out


def _scalar_coeffs(Phi: PowerSeries):
    return [list(c.coeffs) for c in Phi.coeffs]


def _evaluate_raw(Phi: PowerSeries, W: CycloContext, x, Pw: int, flat=None, m=None):
    m = m or W.p ** Pw
    if ring_level(Phi.ring) == 0:
        return kernels.cyc_eval_scalar(_scalar_coeffs(Phi), x, W.e, W.f, W.rel, W.hred, m)
    flat = flat if flat is not None else _flat_coeffs(Phi, W, Pw)
    return kernels.cyc_horner(flat, x, W.e, W.f, W.rel, W.hred, m)


def _rotate_add(acc, zvec, shift, q, f):
    # acc (length q*f) += x^shift * zvec in Z[x]/(x^q - 1)
    for k in range(len(zvec) // f):
        base = ((k + shift) % q) * f
        for r in range(f):
            c = zvec[k * f + r]
            if c:
                acc[base + r] += c


def _zeta_to_element(W: CycloContext, zvec, n_div: int, out_ring, P: int):
    """Element with zeta-basis vector zvec of W, divided by p^n_div, placed in out_ring."""
    p = W.p
    m = p ** (P + n_div)
    zvec = [c % m for c in zvec]
    q = p ** n_div
    for c in zvec:
        if c % q:
            k = 0
            while c % p == 0:
                c //= p
                k += 1
            raise PrecisionLoss("sum not divisible by p^n", deficit=n_div - k)
    zvec = [c // q for c in zvec]
    mo = p ** P
    level = ring_level(out_ring)
    f = W.f
    step = p ** (W.n - level)
    sub = []
    for k in range(W.e):
        blk = zvec[k * f:(k + 1) * f]
        if k % step:
            if any(c % mo for c in blk):
                from .errors import NotRational
                raise NotRational("value does not lie in the coefficient ring")
        else:
            sub.extend(blk)
    if level == 0:
        return PadicElt(out_ring, sub[:f], min(P, out_ring.N))
    flat = out_ring.from_zeta(sub, mo)
    return CycloElt(out_ring, flat, out_ring.e * min(P, out_ring.N))


def distribution_from_series(Phi: PowerSeries, n: int) -> Distribution:
    """d(b) = p^-n sum_u zeta^(-ub) Phi(zeta^u - 1), descended to the coefficient ring."""
    ring = Phi.ring
    base = base_of(ring)
    p = base.p
    if n == 0:
        return Distribution(0, ring, [Phi.coeffs[0]])
    P = min(Phi.precision(), _tail_cap_distribution(Phi, n))
    if P <= 0:
        raise PrecisionExhausted("series carries no precision at this level")
    L = max(n, ring_level(ring))
    Pw = P + n
    _, W = _work_rings(base, L, Pw)
    m = p ** Pw
    q = p ** n
    shift_unit = p ** (L - n)
    flat = None if ring_level(ring) == 0 else _flat_coeffs(Phi, W, Pw)
    zvals = []
    for u in range(q):
        x = W.zeta_raw(u * shift_unit, m)
        x[0] = (x[0] - 1) % m
        v = _evaluate_raw(Phi, W, x, Pw, flat, m)
        zvals.append(W.to_zeta(v, m))
    f = W.f
    Q = W.q
    out_ring = ring
    table = []
    for b in range(q):
        acc = [0] * (Q * f)
        for u in range(q):
            _rotate_add(acc, zvals[u], (-u * b * shift_unit) % Q, Q, f)
        zvec = W.zeta_reduce(acc, m)
        table.append(_zeta_to_element(W, zvec, n, out_ring, P))
    return Distribution(n, ring, table)


# ---------------------------------------------------------------------------
# moments and the operator D = (1+T) d/dT

def moment(Phi: PowerSeries, m: int):
    """Integral of x^m: the constant term of D^m Phi."""
    if m < 0:
        raise DomainError("moment order must be >= 0")
    if not Phi.exact and m >= Phi.M:
        raise TruncationError(f"moment {m} needs truncation > {m}, have {Phi.M}")
    row = _stirling2_row(m)
    acc = Phi.ring.zero()
    top = min(m, Phi.M - 1)
    if m == 0:
        return Phi.coeffs[0]
    for j in range(1, top + 1):
        acc = acc + Phi.coeffs[j] * row[j]
    return acc


def katz_D(Phi: PowerSeries, m: int = 1) -> PowerSeries:
    """D^m Phi with D = (1+T) d/dT.  A truncated input loses one coefficient per step."""
    cs = list(Phi.coeffs)
    exact = Phi.exact
    for _ in range(m):
        L = len(cs)
        top = L if exact else L - 1
        if top <= 0:
            raise TruncationError("katz_D exhausted the truncation")
        new = []
        for j in range(top):
            v = cs[j] * j
            if j + 1 < L:
                v = v + cs[j + 1] * (j + 1)
            new.append(v)
        cs = new
    return PowerSeries(Phi.ring, cs, exact, Phi.tag)


# ---------------------------------------------------------------------------
# twisting

def _table_ring(phi, default):
    rings = [default]
    for v in phi:
        if isinstance(v, CycloElt):
            rings.append(v.ctx)
        elif isinstance(v, PadicElt):
            rings.append(v.ctx)
    return common_ring(*rings)


def _twist_tail_cap(Phi: PowerSeries, n: int, j: int) -> int:
    if Phi.exact:
        return 10 ** 9
    p = base_of(Phi.ring).p
    e = p ** (n - 1) * (p - 1)
    return (Phi.M - j) // e - n


def _levels_for(M: int, p: int) -> int:
    L, q = 0, 1
    while q < M:
        q *= p
        L += 1
    return L


def twist_pointwise(mu, phi, n: int | None = None) -> PowerSeries:
    """Series of phi*mu, through distribution tables.  phi is a table mod p^n."""
    Phi = mu.series if isinstance(mu, Measure) else mu
    base = base_of(Phi.ring)
    p = base.p
    if n is None:
        n = _levels_for(len(phi), p)
    if len(phi) != p ** n:
        raise DomainError("twisting table must have length p^n")
    L = max(n, _levels_for(Phi.M, p), 1)
    out_ring = _table_ring(phi, Phi.ring)
    exact_part = PowerSeries(Phi.ring, Phi.coeffs, True, Phi.tag)
    d = distribution_from_series(exact_part, L)
    qn = p ** n
    table = []
    for b, v in enumerate(d.table):
        w = phi[b % qn]
        v = out_ring.coerce(v)
        table.append(v * w if isinstance(w, int) else v * out_ring.coerce(w))
    twisted = series_from_distribution(Distribution(L, out_ring, table))
    result = twisted.truncate(max(Phi.M, 1)) if twisted.M > Phi.M else twisted
    if len(result.coeffs) < Phi.M:
        result = PowerSeries(out_ring, list(result.coeffs) + [out_ring.zero()] * (Phi.M - result.M), True)
    if not Phi.exact:
        cs = [_cap(c, _twist_tail_cap(Phi, n, j)) for j, c in enumerate(result.coeffs[:Phi.M])]
        result = PowerSeries(out_ring, cs, False, Phi.tag)
    else:
        result = PowerSeries(out_ring, result.coeffs, result.exact, Phi.tag)
    return result


def _phi_weights(phi, W: CycloContext, n: int, Pw: int):
    """w_u = sum_b phi(b) zeta_{p^n}^(-ub) for each u, as flat vectors of W."""
    p, f = W.p, W.f
    m = p ** Pw
    q = p ** n
    Q = W.q
    step = p ** (W.n - n)
    zphi = []
    for v in phi:
        if isinstance(v, int):
            vec = [0] * (W.e * f)
            vec[0] = v % m
        else:
            vec = list(W.coerce(_relift(v, Pw)).coeffs)
        zphi.append(W.to_zeta(vec, m) if any(vec) else None)
    out = []
    for u in range(q):
        acc = [0] * (Q * f)
        for b in range(q):
            if zphi[b] is not None:
                _rotate_add(acc, zphi[b], (-u * b * step) % Q, Q, f)
        out.append(W.from_zeta(W.zeta_reduce(acc, m), m))
    return out


def twist_fourier(Phi: PowerSeries, phi, n: int | None = None) -> PowerSeries:
    """[phi]Phi(T) = p^-n sum_b phi(b) sum_zeta zeta^-b Phi(zeta(1+T) - 1)."""
    ring = Phi.ring
    base = base_of(ring)
    p = base.p
    if n is None:
        n = _levels_for(len(phi), p)
    if len(phi) != p ** n:
        raise DomainError("twisting table must have length p^n")
    out_ring = _table_ring(phi, ring)
    if n == 0:
        return Phi.scale(phi[0]) if not isinstance(phi[0], int) else PowerSeries(
            ring, [c * phi[0] for c in Phi.coeffs], Phi.exact, Phi.tag)
    P = min(Phi.precision(), min(_prec_of(v) for v in phi if not isinstance(v, int))
            if any(not isinstance(v, int) for v in phi) else Phi.precision())
    L = max(n, ring_level(ring), ring_level(out_ring))
    Pw = P + n
    _, W = _work_rings(base, L, Pw)
    m = p ** Pw
    e, f = W.e, W.f
    M = Phi.M
    q = p ** n
    step = p ** (L - n)
    weights = _phi_weights(phi, W, n, Pw)
    # split cyclotomic coefficients into pi-components with base-scalar series
    lvl = ring_level(ring)
    if lvl == 0:
        comps = [(None, _scalar_coeffs(Phi))]
    else:
        lifted = [_relift(c, Pw) for c in Phi.coeffs]
        e0 = ring.e
        comps = []
        for i in range(e0):
            cs = [list(c.coeffs[i * f:(i + 1) * f]) for c in lifted]
            if any(any(v) for v in cs):
                low = cyclo_context(W.base, lvl)
                pi_i = [0] * (e0 * f)
                pi_i[i * f] = 1
                img = list(W.coerce(CycloElt(low, pi_i, low.pi_prec)).coeffs)
                comps.append((img, cs))
    acc = [[0] * (e * f) for _ in range(M)]
    for u in range(q):
        w = weights[u]
        if not any(w):
            continue
        z = W.zeta_raw(u * step, m)
        a = list(z)
        a[0] = (a[0] - 1) % m
        terms = None
        for img, cs in comps:
            tk = kernels.cyc_taylor(cs, a, z, e, f, W.rel, W.hred, m)
            if img is not None:
                tk = [W.mul_raw(t, img, m) for t in tk]
            if terms is None:
                terms = tk
            else:
                terms = [[(x + y) % m for x, y in zip(s, t)] for s, t in zip(terms, tk)]
        if terms is None:
            continue
        for k in range(M):
            prod = W.mul_raw(terms[k], w, m)
            row = acc[k]
            for i in range(e * f):
                row[i] += prod[i]
    coeffs = []
    for k in range(M):
        zvec = W.to_zeta([c % m for c in acc[k]], m)
        c = _zeta_to_element(W, zvec, n, out_ring, P)
        if not Phi.exact:
            c = _cap(c, _twist_tail_cap(Phi, n, k))
        coeffs.append(c)
    return PowerSeries(out_ring, coeffs, Phi.exact, Phi.tag)


# ---------------------------------------------------------------------------
# evaluation at roots of unity

def eval_at_root(Phi: PowerSeries, u: int, n: int, m: int = 0):
    """(D^m Phi)(zeta_{p^n}^u - 1), computed exactly from the integer lifts."""
    if not Phi.exact and m >= Phi.M:
        raise TruncationError("derivative order exceeds truncation")
    ring = Phi.ring
    base = base_of(ring)
    p = base.p
    DPhi = katz_D(Phi, m) if m else Phi
    if n == 0:
        return DPhi.coefficient(0)
    P = DPhi.precision()
    L = max(n, ring_level(ring))
    _, W = _work_rings(base, L, max(P, 1))
    m_ = p ** max(P, 1)
    x = W.zeta_raw(u * p ** (L - n), m_)
    x[0] = (x[0] - 1) % m_
    v = _evaluate_raw(DPhi, W, x, max(P, 1))
    out = CycloElt(W, v, W.e * P)
    if not Phi.exact:
        xv = CycloElt(W, x, W.pi_prec).pi_val()
        out = out.with_prec(min(out.pi_prec, (Phi.M - m) * xv))
    return out


# ---------------------------------------------------------------------------
# moments -> measure

def from_moments(ms) -> PowerSeries:
    """c_n = sum_m s(n,m)/n! ms[m]; precision drops by v_p(n!)."""
    if not ms:
        raise DomainError("empty moment list")
    ring = ms[0].ctx if not isinstance(ms[0], int) else None
    if ring is None:
        raise DomainError("moments must be ring elements")
    if isinstance(ms[0], CycloElt):
        raise DomainError("from_moments expects W-valued moments")
    p = ring.p
    out = []
    fact = 1
    for n in range(len(ms)):
        if n:
            fact *= n
        row = _stirling1_row(n)
        acc = ring.zero()
        for k in range(n + 1):
            if row[k]:
                acc = acc + ms[k] * row[k]
        loss = vp_factorial(n, p)
        if acc.prec - loss <= 0:
            raise PrecisionExhausted(f"coefficient {n} has no precision left")
        unit = fact // p ** loss
        c = acc.divide_by_p(loss) if loss else acc
        out.append(c * PadicElt(ring, (pow(unit, -1, p ** c.prec),) + (0,) * (ring.f - 1), c.prec))
    return PowerSeries(ring, out, False)


# ---------------------------------------------------------------------------
# the Gauss-sum unfolding

def integration_identity_check(Phi: PowerSeries, phi, m: int):
    """Compare the twisted moment with its Gauss-sum unfolding.

    lhs = int phi(x) x^m dmu; rhs = p^-n G(phi) sum_u phi^-1(-u) (D^m Phi)(zeta^u - 1).
    Returns (lhs, rhs, agree).
    """
    from .characters import gauss_sum

    if not phi.is_primitive():
        raise DomainError("the unfolding needs a primitive character")
    n = phi.n
    base = base_of(Phi.ring)
    p = base.p
    P = Phi.precision()
    vals = phi.table(base)
    lhs = moment(twist_pointwise(Phi, vals, n), m)
    Pw = P + n
    lifted = PowerSeries(ring_at(base, ring_level(Phi.ring), Pw),
                         [_relift(c, Pw) for c in Phi.coeffs], True)
    W = cyclo_context(base.with_precision(Pw), max(n, ring_level(Phi.ring)))
    G = W.coerce(gauss_sum(phi, base.with_precision(Pw)))
    inv = phi.inverse().table(base.with_precision(Pw))
    DPhi = katz_D(lifted, m) if m else lifted
    q = p ** n
    total = W.zero()
    for u in range(1, q):
        if u % p == 0:
            continue
        total = total + W.coerce(inv[-u % q]) * eval_at_root(DPhi, u, n)
    raw = G * total
    rhs = raw.divide_by_p(n).with_prec(W.e * P)
    lhs_c = W.coerce(lhs)
    agree = (rhs - lhs_c).with_prec(min(rhs.pi_prec, lhs_c.pi_prec)).is_zero()
    return lhs, rhs, agree
