"""Single- and two-variable anticyclotomic measures assembled from per-class data.

Each ideal class A_j of the base order carries a t-expansion Phi_j (the Amice
series of a measure on Z_p^x) and the scalars (c_j, d_j) with which the weight
k Hecke character is evaluated at A_j^-1 as c_j d_j^k.  A character of the
class group at level s splits into its values on lifts of the A_j and a
Dirichlet character mod p^s read off from the kernel labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .characters import (ClassGroupChar, DirichletChar, class_char_eval, gauss_sum,
                         root_of_unity_value)
from .cyclotomic import CycloElt, base_of, cyclo_context, ring_at
from .errors import BranchMismatch, DomainError, NotPrimitive
from .measures import (Measure, PowerSeries, _relift, eval_at_root, moment,
                       twist_pointwise)
from .modforms import LambdaQExp, group_like_series, weight_point
from .padic import PadicContext, PadicElt, decompose_unit, teichmuller_lift
from .quadratic import (FormClass, class_group, fiber_classes, fundamental_part,
                        kernel_label, lift_class, reduce_form, require_split)


def _prec(x) -> int:
    """Precision in p-adic digits (floor for cyclotomic elements)."""
    if isinstance(x, CycloElt):
        return x.pi_prec // x.ctx.e
    return x.prec


def _lift_up(x, level: int, base: PadicContext):
    if level == 0:
        return x
    ring = cyclo_context(base, level)
    return ring.coerce(x)


def agree(a, b) -> bool:
    """Equality to the joint precision of a and b."""
    if isinstance(a, CycloElt) or isinstance(b, CycloElt):
        lvl = max(a.ctx.n if isinstance(a, CycloElt) else 0, b.ctx.n if isinstance(b, CycloElt) else 0)
        base = a.ctx.base if isinstance(a, CycloElt) else b.ctx.base
        ring = cyclo_context(base, lvl)
        a, b = ring.coerce(a), ring.coerce(b)
        return (a - b).with_prec(min(a.pi_prec, b.pi_prec)).is_zero()
    return (a - b).with_prec(min(a.prec, b.prec)).is_zero()


def joint_precision(a, b) -> int:
    return min(_prec(a), _prec(b))


# ---------------------------------------------------------------------------
# t-expansions

@dataclass
class FamilyTExp:
    """Phi(X; T) = sum_n a(n)(T) (1+X)^n with a(n) in Lambda."""

    terms: dict
    M_T: int

    @classmethod
    def from_lambda_form(cls, F: LambdaQExp, p: int, nmax: int) -> "FamilyTExp":
        """The p-depleted part of F below q^nmax, read as a Dirac combination."""
        terms = {n: F[n] for n in range(1, nmax) if n % p}
        return cls(terms, F[1].M)

    @property
    def ring(self):
        return next(iter(self.terms.values())).ring

    @property
    def degree(self) -> int:
        return max(self.terms) + 1

    def t_coefficient(self, i: int) -> PowerSeries:
        """The X-series multiplying T^i."""
        cache = self.__dict__.setdefault("_tcoeffs", {})
        if i not in cache:
            cache[i] = self._t_coefficient(i)
        return cache[i]

    def _t_coefficient(self, i: int) -> PowerSeries:
        ring = self.ring
        L = self.degree
        out = [ring.zero() for _ in range(L)]
        for n, a in self.terms.items():
            c = a.coefficient(i)
            for r in range(n + 1):
                out[r] = out[r] + c * comb(n, r)
        return PowerSeries(ring, out, True)

    def specialize(self, x) -> PowerSeries:
        """Phi(X; x): substitute a value for T."""
        vals = {n: a.evaluate(x) for n, a in self.terms.items()}
        ring = next(iter(vals.values()))
        ring = ring.ctx
        L = self.degree
        out = [ring.zero() for _ in range(L)]
        for n, v in vals.items():
            for r in range(n + 1):
                out[r] = out[r] + v * comb(n, r)
        return PowerSeries(ring, out, True)


@dataclass
class CMClassData:
    j: int
    rep: FormClass
    c: object
    d: PadicElt
    texp: object

    def __post_init__(self):
        self.rep = reduce_form(self.rep)
        if not self.d.is_unit():
            raise DomainError("d_j must be a unit")

    def lam(self, k: int):
        return self.c * self.d ** k


def measure_from_texpansion(Phi: PowerSeries, rep=None) -> Measure:
    """The measure whose Amice transform is Phi, flagged by its support."""
    mu = Measure(Phi, "Zp")
    if mu.check_unit_support():
        mu.support = "units"
    return mu


def cm_fiber_values(Phi: PowerSeries, n: int, m: int = 0) -> dict:
    """u -> (D^m Phi)(zeta^u - 1) over (Z/p^n)^x."""
    p = base_of(Phi.ring).p
    return {u: eval_at_root(Phi, u, n, m) for u in range(1, p ** n) if u % p}


# ---------------------------------------------------------------------------
# characters of the anticyclotomic tower

@dataclass
class AnticycloCharSpec:
    """A class-group character at level s (conductor c p^s) with infinity exponent m."""

    D: int
    c: int
    p: int
    s: int
    chi: ClassGroupChar | None = None
    m: int = 0
    _finite: DirichletChar | None = field(default=None, repr=False)

    def __post_init__(self):
        require_split(self.p, self.D)
        if self.chi is None:
            self.chi = ClassGroupChar.trivial(self.group)
        elif self.chi.group.disc != self.group.disc:
            raise DomainError("character lives on a different class group")

    @property
    def group(self):
        return class_group(self.c * self.c * self.p ** (2 * self.s) * self.D)

    def exponent_at(self, x) -> Fraction:
        return class_char_eval(self.chi, x)

    def finite_part(self) -> DirichletChar:
        """chi~_p(v) = chi(kernel_label(v)) on (Z/p^s)^x."""
        if self._finite is None:
            if self.s == 0:
                self._finite = DirichletChar(self.p, 0)
            else:
                lab = lambda v: self.exponent_at(kernel_label(v % self.p ** self.s, self.D, self.c, self.p, self.s))
                self._finite = DirichletChar.from_values(self.p, self.s, lab)
        return self._finite

    def value_on_lift(self, A) -> Fraction:
        """Exponent of chi at the lift of A (a class at conductor c)."""
        if self.s == 0:
            return self.exponent_at(reduce_form(A))
        return self.exponent_at(lift_class(A, self.s, self.p))

    def unit_table(self, base: PadicContext) -> list:
        chi = self.finite_part()
        if chi.n == 0:
            return [0] + [1] * (self.p - 1)
        return chi.table(base)

    def describe(self) -> dict:
        return {"disc": self.group.disc, "level": self.s, "m": self.m,
                "exps": [str(e) for e in self.chi.exps],
                "finite": self.finite_part().to_json()}


def characters_of_conductor(D: int, c: int, p: int, s: int) -> list:
    """All class-group characters at level s whose finite part is primitive mod p^s."""
    G = class_group(c * c * p ** (2 * s) * D)
    out = []
    from itertools import product
    for ks in product(*(range(d) for d in G.invariants)):
        chi = ClassGroupChar(G, tuple(Fraction(k, d) for k, d in zip(ks, G.invariants)))
        spec = AnticycloCharSpec(D, c, p, s, chi)
        f = spec.finite_part()
        if s == 0 or f.is_primitive():
            out.append(chi)
    return out


# ---------------------------------------------------------------------------
# the single-variable measure

@dataclass
class SingleVarMeasure:
    classes: list
    p: int
    D: int
    c: int
    base: PadicContext
    k: int = 2
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        require_split(self.p, self.D)
        h = len(class_group(self.c * self.c * self.D))
        if len(self.classes) != h:
            raise DomainError(f"expected {h} classes, got {len(self.classes)}")
        for cls in self.classes:
            if cls.rep.a % self.p == 0:
                raise DomainError("class representatives must be prime to p")

    def measures(self) -> list:
        return [measure_from_texpansion(cl.texp, cl.rep) for cl in self.classes]


def _class_factor(spec: AnticycloCharSpec, A, base: PadicContext):
    """chi(A^-1) for the lift of A."""
    return root_of_unity_value(-spec.value_on_lift(A), base)


def _common_add(acc, x, base):
    if acc is None:
        return x
    lvl = max(acc.ctx.n if isinstance(acc, CycloElt) else 0, x.ctx.n if isinstance(x, CycloElt) else 0)
    if lvl:
        ring = cyclo_context(base, lvl)
        return ring.coerce(acc) + ring.coerce(x)
    return acc + x


def _mul(a, b, base):
    lvl = max(a.ctx.n if isinstance(a, CycloElt) else 0, b.ctx.n if isinstance(b, CycloElt) else 0)
    if lvl:
        ring = cyclo_context(base, lvl)
        return ring.coerce(a) * ring.coerce(b)
    return a * b


def twisted_moment(Phi: PowerSeries, spec: AnticycloCharSpec, base: PadicContext, m: int | None = None):
    """int_{Z_p^x} chi~_p(z) z^m d(mu_Phi)."""
    m = spec.m if m is None else m
    table = spec.unit_table(base)
    return moment(twist_pointwise(Phi, table), m)


def single_var_L(mu: SingleVarMeasure, spec: AnticycloCharSpec, omega=None):
    """sum_j lambda_j chi(A_j^-1) int chi~_p(z) z^m dmu_j."""
    base = mu.base
    total = None
    for cl in mu.classes:
        inner = twisted_moment(cl.texp, spec, base)
        term = _mul(_mul(cl.lam(mu.k), _class_factor(spec, cl.rep, base), base), inner, base)
        total = _common_add(total, term, base)
    return _normalize(total, omega, mu.k, spec.m)


def _normalize(value, omega, k: int, m: int):
    if omega is None:
        return value
    return value * omega.inverse() ** (k + 2 * m)


def fiber_sum_expansion(mu: SingleVarMeasure, spec: AnticycloCharSpec, m: int | None = None):
    """p^-s G(chi~_p) sum_j sum_u lambda_j chi(a_{j,u})^-1 (D^m Phi_j)(zeta^u - 1).

    Computed from integer lifts with s guard digits, then divided by p^s.
    """
    m = spec.m if m is None else m
    s = spec.s
    if s < 1:
        raise DomainError("the unfolded form needs s >= 1")
    phi = spec.finite_part()
    if not phi.is_primitive():
        raise NotPrimitive("finite part is not primitive mod p^s")
    base = mu.base
    p = mu.p
    lams = [cl.lam(mu.k) for cl in mu.classes]
    P = min(min(cl.texp.precision(), _prec(lam)) for cl, lam in zip(mu.classes, lams))
    Pw = P + s
    wbase = base.with_precision(Pw)
    W = cyclo_context(wbase, s)
    total = W.zero()
    for cl, lam in zip(mu.classes, lams):
        lam = W.coerce(_relift(lam, Pw))
        lifted = PowerSeries(ring_at(wbase, 0), [_relift(x, Pw) for x in cl.texp.coeffs], True)
        fiber = fiber_classes(cl.rep, s, p)
        inner = W.zero()
        for u, a in fiber.items():
            val = root_of_unity_value(-spec.exponent_at(a), wbase)
            inner = inner + W.coerce(val) * eval_at_root(lifted, u, s, m)
        total = total + lam * inner
    G = gauss_sum(phi, wbase)
    raw = W.coerce(G) * total
    return raw.divide_by_p(s).with_prec(W.e * P)


# ---------------------------------------------------------------------------
# the two-variable measure

@dataclass
class TwoVarMeasure:
    classes: list
    k0: int
    p: int
    D: int
    c: int
    base: PadicContext
    scalars: list = field(default_factory=list)
    shifts: list = field(default_factory=list)
    _moments: dict = field(default_factory=dict, repr=False)

    @property
    def M_T(self) -> int:
        return self.classes[0].texp.M_T

    def check_branch(self, k: int):
        if k < 2:
            raise DomainError("weight must be >= 2")
        if (k - self.k0) % (self.p - 1):
            raise BranchMismatch(f"k = {k} is not congruent to the branch {self.k0} mod {self.p - 1}")

    def slice(self, k: int) -> SingleVarMeasure:
        """The weight-k single-variable measure: substitute 1+T -> gamma^k."""
        self.check_branch(k)
        x = weight_point(self.base, k)
        classes = [CMClassData(cl.j, cl.rep, cl.c, cl.d, cl.texp.specialize(x)) for cl in self.classes]
        return SingleVarMeasure(classes, self.p, self.D, self.c, self.base, k,
                                {"branch": self.k0})


def build_two_var(classes: list, k0: int, p: int, D: int, c: int, base: PadicContext) -> TwoVarMeasure:
    """Fold c_j omega(d_j)^k0 into a scalar and <d_j>^k into (1+T)^s(d_j)."""
    k0 %= p - 1
    scalars, shifts = [], []
    for cl in classes:
        _, sd = decompose_unit(cl.d)
        tw = teichmuller_lift(cl.d) ** k0
        scalars.append(cl.c * tw)
        shifts.append(group_like_series(sd, cl.texp.M_T, base))
    require_split(p, D)
    h = len(class_group(c * c * D))
    if len(classes) != h:
        raise DomainError(f"expected {h} classes, got {len(classes)}")
    return TwoVarMeasure(classes, k0, p, D, c, base, scalars, shifts)


def _series_in_ring(coeffs, base):
    lvl = max((x.ctx.n if isinstance(x, CycloElt) else 0) for x in coeffs)
    ring = ring_at(base, lvl)
    return PowerSeries(ring, [ring.coerce(x) if lvl else x for x in coeffs], False, "lambda")


def two_var_L(F: TwoVarMeasure, spec: AnticycloCharSpec, k: int, omega=None):
    """Integrate over the class group coefficientwise in T, then specialize at gamma^k - 1."""
    F.check_branch(k)
    base = F.base
    x = weight_point(base, k)
    total = None
    # the T-coefficient integrals do not depend on k
    key = (spec.D, spec.c, spec.p, spec.s, spec.m, spec.chi.exps)
    if key not in F._moments:
        F._moments[key] = [[twisted_moment(cl.texp.t_coefficient(i), spec, base)
                            for i in range(F.M_T)] for cl in F.classes]
    for cl, scal, shift, coeffs in zip(F.classes, F.scalars, F.shifts, F._moments[key]):
        cf = _class_factor(spec, cl.rep, base)
        # (Lj * shift)(x) = Lj(x) shift(x) to the truncation cap; evaluating the
        # factors separately keeps the per-coefficient precision
        Lj = _series_in_ring(coeffs, base)
        val = _mul(Lj.evaluate(x), shift.evaluate(x), base)
        term = _mul(_mul(scal, cf, base), val, base)
        total = _common_add(total, term, base)
    return _normalize(total, omega, k, spec.m)


def lvalue_pair(F: TwoVarMeasure, spec: AnticycloCharSpec, k: int) -> tuple:
    """(two_var_L, single_var_L of the slice, agree)."""
    a = two_var_L(F, spec, k)
    b = single_var_L(F.slice(k), spec)
    return a, b, agree(a, b)
