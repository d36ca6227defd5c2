"""Imaginary quadratic orders and their class groups, via binary quadratic forms.

A form (a, b, c) stands for the proper ideal [a, (-b + sqrt(disc))/2] of the
order of discriminant disc = b^2 - 4ac.  Classes are always carried by their
reduced representative, so equality of classes is equality of tuples.

The prime above p written P below is the one where sqrt(D) is congruent to the
least square root s of D mod p (Hensel-lifted); its conjugate is Pbar.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd, isqrt

from .errors import (BoundExceeded, ConductorMismatch, DiscMismatch, DomainError,
                     NotDefinite, NotPrimitive, NotSplit, Ramified, UnitObstruction)
from .numtheory import crt, factorize, is_prime, kronecker, sqrt_mod_prime_power

DISC_BOUND = 10 ** 7


def is_fundamental(D: int) -> bool:
    if D >= 0:
        return False
    if D % 4 == 1:
        return all(k == 1 for _, k in factorize(-D))
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and all(k == 1 for _, k in factorize(-m))
    return False


def fundamental_part(disc: int) -> tuple:
    """Split disc = c^2 D with D fundamental; returns (D, c)."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise DomainError(f"{disc} is not an imaginary quadratic discriminant")
    c = 1
    for q, k in factorize(-disc):
        c *= q ** (k // 2)
    for f in sorted((d for d in range(1, c + 1) if c % d == 0), reverse=True):
        D = disc // (f * f)
        if disc % (f * f) == 0 and is_fundamental(D):
            return D, f
    raise DomainError(f"{disc} has no fundamental part")


@dataclass(frozen=True)
class QuadField:
    D: int

    def __post_init__(self):
        if not is_fundamental(self.D):
            raise DomainError(f"{self.D} is not a negative fundamental discriminant")

    @property
    def wK(self) -> int:
        return {-3: 6, -4: 4}.get(self.D, 2)


@dataclass(frozen=True)
class QuadOrder:
    field: QuadField
    c: int = 1

    def __post_init__(self):
        if self.c < 1:
            raise DomainError("conductor must be >= 1")

    @property
    def disc(self) -> int:
        return self.c * self.c * self.field.D

    def unit_index(self) -> int:
        """[R^x : O^x]."""
        return 1 if self.c == 1 else self.field.wK // 2


def order_of(D: int, c: int = 1) -> QuadOrder:
    return QuadOrder(QuadField(D), c)


@dataclass(frozen=True, order=True)
class FormClass:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def value(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def as_tuple(self) -> tuple:
        return (self.a, self.b, self.c)

    def __repr__(self):
        return f"({self.a}, {self.b}, {self.c})"


def _as_form(f) -> tuple:
    if isinstance(f, FormClass):
        return f.a, f.b, f.c
    a, b, c = f
    return int(a), int(b), int(c)


def reduce_form(f) -> FormClass:
    a, b, c = _as_form(f)
    if gcd(gcd(a, b), c) != 1:
        raise NotPrimitive(f"form {(a, b, c)} is not primitive")
    if b * b - 4 * a * c >= 0 or a <= 0:
        raise NotDefinite(f"form {(a, b, c)} is not positive definite")
    D = b * b - 4 * a * c
    while True:
        if not -a < b <= a:
            k = (a - b) // (2 * a)
            b += 2 * a * k
            c = (b * b - D) // (4 * a)
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return FormClass(a, b, c)


def principal_form(disc: int) -> FormClass:
    s = disc % 2
    return FormClass(1, s, (s - disc) // 4)


def _xgcd(a: int, b: int) -> tuple:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def compose(x, y) -> FormClass:
    """Dirichlet composition followed by reduction."""
    a1, b1, c1 = _as_form(x)
    a2, b2, c2 = _as_form(y)
    D = b1 * b1 - 4 * a1 * c1
    if b2 * b2 - 4 * a2 * c2 != D:
        raise DiscMismatch("forms of different discriminants")
    beta = (b1 + b2) // 2
    g, u, v = _xgcd(a1, a2)
    e, s, z = _xgcd(g, beta)
    xx, yy = u * s, v * s
    A = a1 * a2 // (e * e)
    B = (xx * a1 * b2 + yy * a2 * b1 + z * (b1 * b2 + D) // 2) // e
    B %= 2 * A
    C = (B * B - D) // (4 * A)
    return reduce_form((A, B, C))


def inverse(x) -> FormClass:
    a, b, c = _as_form(x)
    return reduce_form((a, -b, c))


def power(x, k: int) -> FormClass:
    x = reduce_form(x)
    if k < 0:
        x, k = inverse(x), -k
    out = principal_form(x.disc)
    while k:
        if k & 1:
            out = compose(out, x)
        x = compose(x, x)
        k >>= 1
    return out


def reduced_forms(disc: int) -> list:
    if disc >= 0 or disc % 4 not in (0, 1):
        raise DomainError(f"{disc} is not a negative discriminant")
    if -disc > DISC_BOUND:
        raise BoundExceeded(f"|disc| = {-disc} exceeds {DISC_BOUND}")
    out = []
    amax = isqrt(-disc // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - disc) % 2:
                continue
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) == 1:
                out.append(FormClass(a, b, c))
    return out


# ---------------------------------------------------------------------------
# group structure

def _smith(A: list) -> tuple:
    """Diagonal entries and column transform V (with its inverse) for U A V = diag."""
    n = len(A)
    A = [row[:] for row in A]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    Vi = [row[:] for row in V]
    for t in range(n):
        while True:
            cands = [(abs(A[i][j]), i, j) for i in range(t, n) for j in range(t, n) if A[i][j]]
            if not cands:
                return [A[i][i] for i in range(n)], V, Vi
            _, i, j = min(cands)
            A[t], A[i] = A[i], A[t]
            if j != t:
                for row in A:
                    row[t], row[j] = row[j], row[t]
                for row in V:
                    row[t], row[j] = row[j], row[t]
                Vi[t], Vi[j] = Vi[j], Vi[t]
            piv = A[t][t]
            clean = True
            for i in range(t + 1, n):
                q = A[i][t] // piv
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                q = A[t][j] // piv
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                    for row in V:
                        row[j] -= q * row[t]
                    Vi[t] = [x + q * y for x, y in zip(Vi[t], Vi[j])]
                clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, n) for j in range(t + 1, n)
                        if A[i][j] % piv), None)
            if bad is None:
                if piv < 0:
                    A[t] = [-x for x in A[t]]
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
    return [A[i][i] for i in range(n)], V, Vi


class RingClassGroup:
    """Pic of an order, with an invariant-factor basis and discrete logarithms."""

    def __init__(self, order: QuadOrder):
        self.order = order
        self.disc = order.disc
        self.elements = reduced_forms(self.disc)
        self.identity = principal_form(self.disc)
        self._solve()

    def _solve(self):
        # polycyclic presentation first, then Smith form for independent generators
        H = {self.identity: ()}
        gens = []
        rels = []
        for g in self.elements:
            if len(H) == len(self.elements):
                break
            if g in H:
                continue
            r, x = 1, g
            while x not in H:
                x = compose(x, g)
                r += 1
            k = len(gens)
            v = H[x]
            rels.append([-c for c in v] + [r])
            gens.append(g)
            newH = {}
            for h, coords in H.items():
                y = h
                for i in range(r):
                    newH[y] = coords + (i,)
                    y = compose(y, g)
            H = {h: c + (0,) * (k + 1 - len(c)) for h, c in newH.items()}
        n = len(gens)
        M = [row + [0] * (n - len(row)) for row in rels]
        diag, V, Vi = _smith(M) if n else ([], [], [])
        keep = [i for i in range(n) if abs(diag[i]) > 1]
        self.invariants = tuple(abs(diag[i]) for i in keep)
        self.generators = []
        for i in keep:
            x = self.identity
            for gk, ek in zip(gens, Vi[i]):
                if ek:
                    x = compose(x, power(gk, ek))
            self.generators.append(x)
        self._dlog = {}
        for h, coords in H.items():
            new = []
            for i, d in zip(keep, self.invariants):
                new.append(sum(coords[k] * V[k][i] for k in range(n)) % d)
            self._dlog[h] = tuple(new)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._dlog

    def discrete_log(self, x) -> tuple:
        return self._dlog[reduce_form(x) if not isinstance(x, FormClass) else x]

    def element(self, coords) -> FormClass:
        x = self.identity
        for g, k in zip(self.generators, coords):
            x = compose(x, power(g, k))
        return x

    def compose(self, x, y) -> FormClass:
        return compose(x, y)

    def structure(self) -> list:
        return list(self.invariants)

    def to_json(self) -> dict:
        return {"order": len(self), "disc": self.disc,
                "elements": [f.as_tuple() for f in self.elements],
                "structure": self.structure()}


@lru_cache(maxsize=64)
def _class_group_cached(D: int, c: int) -> RingClassGroup:
    return RingClassGroup(order_of(D, c))


def class_group(order) -> RingClassGroup:
    """Ring class group of a QuadOrder (or of a discriminant given as an int)."""
    if isinstance(order, int):
        D, c = fundamental_part(order)
        return _class_group_cached(D, c)
    return _class_group_cached(order.field.D, order.c)


def class_number_formula(D: int, c: int = 1) -> int:
    h = len(reduced_forms(D))
    num = h * c
    den = QuadOrder(QuadField(D), c).unit_index()
    for ell, _ in factorize(c):
        num = num * (ell - kronecker(D, ell)) // ell
    return num // den


# ---------------------------------------------------------------------------
# splitting, projections and lifts

def is_split(p: int, field) -> bool:
    D = field.D if isinstance(field, QuadField) else field
    if D % p == 0:
        raise Ramified(f"{p} ramifies in Q(sqrt({D}))")
    return kronecker(D, p) == 1


def require_split(p: int, D: int):
    if not is_split(p, D):
        raise NotSplit(f"{p} is inert in Q(sqrt({D}))")


def prime_to_representative(x, m: int) -> tuple:
    """An equivalent (usually unreduced) form whose first coefficient is prime to m."""
    a, b, c = _as_form(x)
    if gcd(a, m) == 1:
        return a, b, c
    f = FormClass(a, b, c)
    bound = 1
    while True:
        for s, t in product(range(-bound, bound + 1), repeat=2):
            if max(abs(s), abs(t)) != bound or gcd(s, t) != 1:
                continue
            if gcd(f.value(s, t), m) != 1:
                continue
            # complete (s, t) to a matrix [[s, r], [t, w]] of determinant 1
            g, w, r = _xgcd(s, t)
            r = -r
            A = f.value(s, t)
            B = 2 * a * s * r + b * (s * w + r * t) + 2 * c * t * w
            C = f.value(r, w)
            return A, B, C
        bound += 1
        if bound > 200:
            raise DomainError("no representative prime to the given modulus found")


def _check_conductors(disc_from: int, disc_to: int) -> int:
    if disc_from % disc_to:
        raise ConductorMismatch(f"{disc_to} does not divide {disc_from}")
    q = disc_from // disc_to
    f = isqrt(q)
    if f * f != q:
        raise ConductorMismatch("discriminant quotient is not a square")
    return f


def project_class(x, target_disc: int, p: int | None = None) -> FormClass:
    """Image of a class under Pic(O) -> Pic(O') for O inside O' (ideal extension)."""
    x = reduce_form(x)
    D, _ = fundamental_part(x.disc)
    if p is not None:
        require_split(p, D)
    f = _check_conductors(x.disc, target_disc)
    if f == 1:
        return x
    a, b, c = prime_to_representative(x, 2 * f)
    B, _ = crt([b * pow(f, -1, a) % a, target_disc % 2], [a, 2])
    C = (B * B - target_disc) // (4 * a)
    return reduce_form((a, B, C))


def lift_class(x, n: int, p: int) -> FormClass:
    """The class at conductor c p^n of the ideal A cap O_(cp^n), A taken prime to p."""
    a, b, c = prime_to_representative(reduce_form(x), p)
    q = p ** n
    return reduce_form((a, q * b, q * q * c))


@lru_cache(maxsize=None)
def split_root(D: int, p: int, n: int) -> int:
    """The square root s of D mod p^n fixing the prime P (least residue mod p)."""
    roots = sqrt_mod_prime_power(D % p ** n, p, n)
    if not roots:
        raise NotSplit(f"{p} is not split in Q(sqrt({D}))")
    return min(roots, key=lambda r: (r % p, r))


def prime_above(D: int, c: int, p: int, conj: bool = False) -> FormClass:
    """Class of P (or Pbar) intersected with the order of conductor c."""
    disc = c * c * D
    s = c * split_root(D, p, 1) % p
    b = -s if conj else s
    b, _ = crt([b % p, disc % 2], [p, 2])
    return reduce_form((p, b, (b * b - disc) // (4 * p)))


@lru_cache(maxsize=None)
def kernel_label(u: int, D: int, c: int, p: int, n: int) -> FormClass:
    """Class at conductor c p^n of alpha O, alpha = u mod P^n and 1 mod Pbar^n.

    u -> kernel_label(u) is an isomorphism from (Z/p^n)^x onto the kernel of
    Pic(O_(cp^n)) -> Pic(O_c) whenever the unit index is 1.
    """
    q = p ** n
    if u % p == 0:
        raise DomainError("label must be a unit mod p")
    disc = c * c * D
    sigma = disc % 2
    s = c * split_root(D, p, n) % q
    inv2 = pow(2, -1, q)
    r = (sigma + s) * inv2 % q
    rbar = (sigma - s) * inv2 % q
    y0 = (u - 1) * pow(s, -1, q) % q
    x0 = (1 - y0 * rbar) % q
    norm0 = (sigma - disc) // 4
    bound = 0
    while True:
        for i, j in product(range(-bound, bound + 1), repeat=2):
            if max(abs(i), abs(j)) != bound:
                continue
            x, y = x0 + i * q, y0 + j * q
            if gcd(x, y) != 1:
                continue
            a = x * x + sigma * x * y + norm0 * y * y
            if gcd(a, 2 * c * p) != 1:
                continue
            if y == 0:
                return principal_form(disc * q * q)
            # the ideal alpha O_c itself (not its reduced class) is what gets lifted
            bmod = -(2 * x + sigma * y) * pow(y, -1, a) % a if a > 1 else 0
            b, _ = crt([bmod, disc % 2], [a, 2])
            return reduce_form((a, q * b, q * (b * b - disc) // (4 * a) * q))
        bound += 1


@dataclass(frozen=True)
class Fiber:
    """Classes at level n over a class A, indexed by u in (Z/p^n)^x.

    ``shift`` is the class of Pbar^-n at conductor c; the fibers are taken over
    A itself and the shift is left for the caller to compose with.
    """

    base: FormClass
    p: int
    n: int
    labels: tuple
    classes: tuple
    shift: FormClass

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def items(self):
        return zip(self.labels, self.classes)

    def by_label(self) -> dict:
        return dict(zip(self.labels, self.classes))


def fiber_classes(A, n: int, p: int) -> Fiber:
    """The p^(n-1)(p-1) classes at conductor c p^n projecting to A at conductor c.

    The class labelled u is lift(A) * kernel_label(-u).
    """
    A = reduce_form(A)
    D, c = fundamental_part(A.disc)
    require_split(p, D)
    if c % p == 0:
        raise ConductorMismatch("base conductor must be prime to p")
    if c == 1 and D in (-3, -4):
        raise UnitObstruction(f"extra units in Q(sqrt({D})) collapse the fiber")
    if n < 1:
        raise DomainError("level must be >= 1")
    q = p ** n
    base = lift_class(A, n, p)
    labels = tuple(u for u in range(1, q) if u % p)
    classes = tuple(compose(base, kernel_label(-u % q, D, c, p, n)) for u in labels)
    shift = power(prime_above(D, c, p, conj=True), -n)
    return Fiber(A, p, n, labels, classes, shift)


# ---------------------------------------------------------------------------
# ideals by norm

def _primitive_ideals(disc: int, a: int) -> list:
    return [b for b in range(-a + 1, a + 1)
            if (b - disc) % 2 == 0 and (b * b - disc) % (4 * a) == 0]


def ideals_of_norm(order, n: int) -> list:
    """Integral ideals of norm n prime to the conductor, as (g, a, b) meaning g [a, (-b+sqrt(disc))/2]."""
    if isinstance(order, QuadField):
        order = QuadOrder(order, 1)
    if n < 1:
        raise DomainError("norm must be >= 1")
    if n > DISC_BOUND:
        raise BoundExceeded(f"norm {n} exceeds {DISC_BOUND}")
    disc, c = order.disc, order.c
    out = []
    g = 1
    while g * g <= n:
        if n % (g * g) == 0:
            a = n // (g * g)
            if gcd(a, c) == 1 and gcd(g, c) == 1:
                out.extend((g, a, b) for b in _primitive_ideals(disc, a))
        g += 1
    return out


def ideal_class(ideal: tuple, disc: int) -> FormClass:
    g, a, b = ideal
    return reduce_form((a, b, (b * b - disc) // (4 * a)))


def ideal_count_oracle(D: int, n: int) -> int:
    """sum_{d | n} (D|d) for the maximal order."""
    return sum(kronecker(D, d) for d in range(1, n + 1) if n % d == 0)
