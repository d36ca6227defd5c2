"""q-expansions, Hecke operators, ordinary projection and Lambda-adic families.

Coefficients are Python ints (exact) or p-adic ring elements.  Every operator
returns a new QExp whose truncation Q is what the input actually determines.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .characters import ClassGroupChar, GammaChar, class_char_eval, root_of_unity_value
from .cyclotomic import CycloElt, cyclo_context
from .errors import BadPrime, DomainError, NoConvergence, NotStable, TruncationError
from .measures import PowerSeries
from .numtheory import is_prime
from .padic import PadicContext, PadicElt, decompose_unit, teichmuller_lift
from .quadratic import QuadField, QuadOrder, class_group, ideal_class, ideals_of_norm


@dataclass
class QExp:
    """sum a(n) q^n for 0 <= n < Q.

    ``char`` evaluates the nebentypus at primes (None means trivial); ``neben``
    is its JSON descriptor.
    """

    coeffs: list
    weight: int = 0
    level: int = 1
    neben: dict | None = None
    char: object = field(default=None, repr=False, compare=False)

    @property
    def Q(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int):
        if n >= self.Q:
            raise TruncationError(f"coefficient {n} is beyond the truncation {self.Q}")
        return self.coeffs[n]

    def _like(self, coeffs, **kw) -> "QExp":
        data = dict(weight=self.weight, level=self.level, neben=self.neben, char=self.char)
        data.update(kw)
        return QExp(list(coeffs), **data)

    def __add__(self, other: "QExp") -> "QExp":
        Q = min(self.Q, other.Q)
        return self._like(self.coeffs[i] + other.coeffs[i] for i in range(Q))

    def __sub__(self, other: "QExp") -> "QExp":
        Q = min(self.Q, other.Q)
        return self._like(self.coeffs[i] - other.coeffs[i] for i in range(Q))

    def scale(self, c) -> "QExp":
        return self._like(c * a for a in self.coeffs)

    def truncate(self, Q: int) -> "QExp":
        if Q > self.Q:
            raise TruncationError("cannot extend a truncated q-expansion")
        return self._like(self.coeffs[:Q])

    def to_json(self) -> dict:
        def enc(c):
            return c if isinstance(c, int) else c.to_json()
        return {"weight": self.weight, "level": self.level, "neben": self.neben,
                "Q": self.Q, "coeffs": [enc(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "QExp":
        cs = data["coeffs"]
        if any(not isinstance(c, int) for c in cs):
            raise DomainError("only integer q-expansions can be read back without a ring")
        return cls(list(cs), data.get("weight", 0), data.get("level", 1), data.get("neben"))


def _neben_value(f: QExp, ell: int):
    return 1 if f.char is None else f.char(ell)


def hecke_T(f: QExp, ell: int) -> QExp:
    """T(ell) for a prime ell not dividing the level."""
    if not is_prime(ell) or f.level % ell == 0:
        raise BadPrime(f"T({ell}) is not defined at level {f.level}")
    Q = (f.Q - 1) // ell + 1
    w = _neben_value(f, ell) * ell ** (f.weight - 1)
    out = []
    for n in range(Q):
        a = f.coeffs[n * ell]
        if n % ell == 0:
            a = a + w * f.coeffs[n // ell]
        out.append(a)
    return f._like(out)


def hecke_U(f: QExp, p: int) -> QExp:
    Q = (f.Q - 1) // p + 1
    return f._like(f.coeffs[n * p] for n in range(Q))


def hecke_V(f: QExp, p: int) -> QExp:
    Q = (f.Q - 1) * p + 1
    zero = f.coeffs[0] * 0
    return f._like((f.coeffs[n // p] if n % p == 0 else zero) for n in range(Q))


def katz_d(f: QExp, m: int = 1) -> QExp:
    if m < 0:
        raise DomainError("m must be >= 0")
    return f._like(n ** m * a for n, a in enumerate(f.coeffs))


def p_deplete(f: QExp, p: int) -> QExp:
    zero = f.coeffs[0] * 0
    return f._like((a if n % p else zero) for n, a in enumerate(f.coeffs))


def eigenvalue(f: QExp, g: QExp, n: int = 1):
    """The scalar c with g = c f, read off at the first index where f is 1."""
    return g[n] if f[n] == 1 else None


def _series_mul(a: list, b: list, Q: int) -> list:
    out = [0] * Q
    for i, x in enumerate(a[:Q]):
        if x:
            for j in range(min(len(b), Q - i)):
                out[i + j] += x * b[j]
    return out


def eta_power(r: int, Q: int) -> list:
    """Coefficients of prod (1 - q^n)^r up to q^(Q-1), via the pentagonal series."""
    euler = [0] * Q
    k = 0
    while True:
        done = True
        for m in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2) if k else (0,):
            if m < Q:
                euler[m] = -1 if k % 2 else 1
                done = False
        if done and k:
            break
        k += 1
    out = [1] + [0] * (Q - 1)
    base = euler
    while r:
        if r & 1:
            out = _series_mul(out, base, Q)
        base = _series_mul(base, base, Q)
        r >>= 1
    return out


def delta(Q: int) -> QExp:
    """Ramanujan's Delta = q prod (1 - q^n)^24."""
    e = eta_power(24, Q)
    return QExp([0] + e[:Q - 1], weight=12, level=1)


def tau(n: int) -> int:
    return delta(n + 1)[n]


def theta_series(chi: ClassGroupChar | None, order, Q: int, base: PadicContext | None = None) -> QExp:
    """sum over ideals a prime to the conductor of chi(class of a) q^(N a); a(0) = 0."""
    if isinstance(order, QuadField):
        order = QuadOrder(order, 1)
    disc = order.disc
    coeffs = [0]
    binary = chi is None or chi.order() <= 2
    for n in range(1, Q):
        ideals = ideals_of_norm(order, n)
        if chi is None:
            coeffs.append(len(ideals))
            continue
        exps = [class_char_eval(chi, ideal_class(i, disc)) for i in ideals]
        if binary:
            coeffs.append(sum(1 if e == 0 else -1 for e in exps))
        else:
            if base is None:
                raise DomainError("a coefficient ring is needed for characters of order > 2")
            acc = 0
            for e in exps:
                acc = root_of_unity_value(e, base) + acc
            coeffs.append(acc)
    if not binary:
        coeffs[0] = coeffs[1] * 0
    neben = {"disc": disc, "finite_order": True}
    return QExp(coeffs, weight=1, level=-disc, neben=neben)


# ---------------------------------------------------------------------------
# finite spans and the ordinary projector

def _mat_mul(A, B, mod):
    n, m, k = len(A), len(B), len(B[0]) if B else 0
    return [[sum(A[i][t] * B[t][j] for t in range(m)) % mod for j in range(k)] for i in range(n)]


def _solve_mod(C, rhs, p, mod):
    """x with x C = rhs (row vector) mod p^N, C square and invertible mod p."""
    n = len(C)
    # Gauss-Jordan on the transpose
    M = [[C[j][i] % mod for j in range(n)] + [rhs[i] % mod] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] % p), None)
        if piv is None:
            raise DomainError("coefficient matrix is singular mod p")
        M[col], M[piv] = M[piv], M[col]
        inv = pow(M[col][col], -1, mod)
        M[col] = [x * inv % mod for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                c = M[r][col]
                M[r] = [(x - c * y) % mod for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def _lift(c) -> int:
    return c if isinstance(c, int) else c.lift()


class SpanBasis:
    """A finite list of integral q-expansions with pivot indices for coordinates."""

    def __init__(self, forms: list, p: int, N: int):
        self.forms = forms
        self.p = p
        self.N = N
        self.mod = p ** N
        self.Q = min(f.Q for f in forms)
        self.pivots = self._choose_pivots()

    def _choose_pivots(self) -> list:
        p = self.p
        rows = [[_lift(f[n]) % p for n in range(self.Q)] for f in self.forms]
        pivots = []
        work = [r[:] for r in rows]
        for i in range(len(work)):
            col = next((n for n in range(self.Q) if work[i][n] % p and n not in pivots), None)
            if col is None:
                raise DomainError("basis is not independent mod p to this truncation")
            pivots.append(col)
            inv = pow(work[i][col], -1, p)
            for r in range(i + 1, len(work)):
                c = work[r][col] * inv % p
                work[r] = [(x - c * y) % p for x, y in zip(work[r], work[i])]
        return pivots

    def __len__(self):
        return len(self.forms)

    def coordinates(self, g: QExp, check: bool = True) -> list:
        C = [[_lift(f[n]) for n in self.pivots] for f in self.forms]
        x = _solve_mod(C, [_lift(g[n]) for n in self.pivots], self.p, self.mod)
        if check:
            Q = min(g.Q, self.Q)
            for n in range(Q):
                r = _lift(g[n]) - sum(xi * _lift(f[n]) for xi, f in zip(x, self.forms))
                if r % self.mod:
                    raise NotStable(f"residual at q^{n} is not 0 mod p^{self.N}")
        return x

    def matrix_of(self, op) -> list:
        """Rows are coordinates of op(f_i)."""
        return [self.coordinates(op(f)) for f in self.forms]


@dataclass
class ProjectorResult:
    E: list
    U: list
    rank: int
    image: list
    eigenvalue: int | None
    mod: int

    def to_json(self) -> dict:
        return {"E": self.E, "U": self.U, "rank": self.rank, "image": self.image,
                "unit_eigenvalue": self.eigenvalue, "modulus": self.mod}


def _rank_mod_p(A, p) -> int:
    A = [[x % p for x in row] for row in A]
    rank = 0
    cols = len(A[0]) if A else 0
    for col in range(cols):
        piv = next((r for r in range(rank, len(A)) if A[r][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][col], -1, p)
        for r in range(len(A)):
            if r != rank and A[r][col]:
                c = A[r][col] * inv % p
                A[r] = [(x - c * y) % p for x, y in zip(A[r], A[rank])]
        rank += 1
    return rank


def _mat_pow(A, k, mod):
    n = len(A)
    R = [[int(i == j) for j in range(n)] for i in range(n)]
    while k:
        if k & 1:
            R = _mat_mul(R, A, mod)
        A = _mat_mul(A, A, mod)
        k >>= 1
    return R


def ordinary_projector(B: SpanBasis, p: int, N_prec: int | None = None, budget: int = 60) -> ProjectorResult:
    """e = lim U(p)^(n!) on the span, computed mod p^N_prec."""
    N_prec = N_prec or B.N
    mod = p ** N_prec
    U = [[x % mod for x in row] for row in B.matrix_of(lambda f: hecke_U(f, p))]
    A = U
    for k in range(2, budget):
        nxt = _mat_pow(A, k, mod)
        if nxt == A and _mat_mul(A, A, mod) == A:
            break
        A = nxt
    else:
        raise NoConvergence("U(p)^(n!) did not stabilise")
    E = A
    rank = _rank_mod_p(E, p)
    image = [row for row in E if any(x % p for x in row)][:rank]
    alpha = None
    if rank == 1:
        v = image[0]
        w = _mat_mul([v], U, mod)[0]
        i = next(i for i, x in enumerate(v) if x % p)
        alpha = w[i] * pow(v[i], -1, mod) % mod
    return ProjectorResult(E, U, rank, image, alpha, mod)


# ---------------------------------------------------------------------------
# Lambda-adic forms

def group_like_series(s: PadicElt, M: int, ctx: PadicContext | None = None) -> PowerSeries:
    """(1+T)^s truncated at T^M for s in Z_p.

    The coefficient of T^j is binom(s, j); replacing s by an integer lift
    s' = s mod p^P costs floor(log_p j) digits in that coefficient.
    """
    ctx = ctx or s.ctx
    p = ctx.p
    s_int = s.lift()
    coeffs = []
    for j in range(M):
        loss = 0
        t = j
        while t >= p:
            t //= p
            loss += 1
        prec = min(ctx.N, max(s.prec - loss, 0)) if j else ctx.N
        coeffs.append(ctx.coerce(comb(s_int, j), prec))
    return PowerSeries(ctx, coeffs, False, "lambda")


@dataclass
class LambdaQExp:
    """A q-expansion with coefficients in Lambda = W[[T]] (PowerSeries tagged 'lambda')."""

    coeffs: list
    p: int
    a0: int = 0
    level: int = 1

    @property
    def Q(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n: int) -> PowerSeries:
        return self.coeffs[n]


def eisenstein_family(a0: int, ctx: PadicContext, Q: int, M: int) -> LambdaQExp:
    """a(n)(T) = sum_{d | n, p not dividing d} omega^a0(d) d^-1 (1+T)^s(d), a(0) = 0."""
    p = ctx.p
    zero = PowerSeries(ctx, [ctx.zero() for _ in range(M)], False, "lambda")
    cache = {}

    def term(d):
        if d not in cache:
            z = ctx.coerce(d)
            _, s = decompose_unit(z)
            w = teichmuller_lift(z) ** (a0 % (p - 1)) * z.inverse()
            cache[d] = group_like_series(s, M, ctx).scale(w)
        return cache[d]

    coeffs = [zero]
    for n in range(1, Q):
        acc = zero
        for d in range(1, n + 1):
            if n % d == 0 and d % p:
                acc = acc + term(d)
        coeffs.append(acc)
    return LambdaQExp(coeffs, p, a0 % (p - 1), 1)


def weight_point(ctx: PadicContext, k: int, eps: GammaChar | None = None):
    """The value of T at the arithmetic point (k, eps): eps(gamma) gamma^k - 1."""
    gk = ctx.gamma ** k
    if eps is None or eps.order() == 1:
        return gk - 1
    ring = cyclo_context(ctx, eps.j)
    return ring.coerce(eps.at_gamma(ctx)) * ring.coerce(gk) - 1


def specialize_lambda_form(F: LambdaQExp, k: int, eps: GammaChar | None = None) -> QExp:
    """Substitute 1 + T -> eps(gamma) gamma^k coefficientwise."""
    if k < 2:
        raise DomainError("weight must be >= 2")
    ctx = F.coeffs[0].ring
    x = weight_point(ctx, k, eps)
    coeffs = [c.evaluate(x) for c in F.coeffs]
    p = F.p
    tors = (F.a0 - k) % (p - 1)

    def char(ell, _c=ctx, _t=tors, _e=eps):
        v = teichmuller_lift(_c.coerce(ell)) ** _t
        if _e is not None and _e.order() > 1:
            return cyclo_context(_c, _e.j).coerce(v) * _e.value(ell, _c)
        return v

    neben = {"torsion_exp": tors, "eps": [eps.r, eps.j] if eps else None}
    return QExp(coeffs, weight=k, level=F.level * p, neben=neben, char=char)


def eisenstein_oracle(a0: int, ctx: PadicContext, k: int, n: int):
    """sum_{d | n, p not dividing d} psi omega^-k(d) d^(k-1), straight from the definition."""
    p = ctx.p
    acc = ctx.zero()
    for d in range(1, n + 1):
        if n % d == 0 and d % p:
            z = ctx.coerce(d)
            acc = acc + teichmuller_lift(z) ** ((a0 - k) % (p - 1)) * z ** (k - 1)
    return acc
