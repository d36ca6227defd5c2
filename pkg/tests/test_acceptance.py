"""Acceptance criteria 1-10, each checked at its stated tolerance and time budget.

Every criterion prints one PASS/FAIL line.  Run with ``pytest -s`` to see them
inline; they are also repeated in the terminal summary.
"""

import random
import sys
import time
from contextlib import contextmanager

import pytest

from anticyclo.assembly import (AnticycloCharSpec, agree, characters_of_conductor,
                                fiber_sum_expansion, joint_precision, single_var_L, two_var_L)
from anticyclo.characters import (DirichletChar, GammaChar, build_critical_character,
                                  critical_target)
from anticyclo.cyclotomic import CycloElt
from anticyclo.errors import UnitObstruction
from anticyclo.fixtures import eisenstein_two_var, random_series
from anticyclo.measures import (Distribution, PowerSeries, distribution_from_series,
                                integration_identity_check, moment, series_from_distribution,
                                twist_fourier, twist_pointwise)
from anticyclo.modforms import (SpanBasis, delta, eisenstein_family, hecke_T, hecke_U, hecke_V,
                                ordinary_projector, specialize_lambda_form, tau)
from anticyclo.padic import padic_context, teichmuller_lift
from anticyclo.quadratic import (QuadField, class_group, fiber_classes, ideals_of_norm,
                                 principal_form, project_class)

RESULTS = {}


@contextmanager
def criterion(num, title, budget):
    t0 = time.perf_counter()
    ok, note = False, ""
    try:
        yield
        ok = True
    except AssertionError as exc:
        note = str(exc).splitlines()[0] if str(exc) else "assertion failed"
        raise
    finally:
        dt = time.perf_counter() - t0
        if ok and dt >= budget:
            ok, note = False, f"over budget ({budget} s)"
        line = f"criterion {num:2d} {'PASS' if ok else 'FAIL'}  {dt:6.2f} s  {title}"
        if note:
            line += f"  [{note}]"
        RESULTS[num] = line
        print(line, file=sys.stderr)
    assert dt < budget, f"criterion {num} took {dt:.2f} s, budget {budget} s"


def cong(a, b, j):
    """a = b mod p^j, also for cyclotomic values."""
    if isinstance(a, CycloElt) or isinstance(b, CycloElt):
        W = (a if isinstance(a, CycloElt) else b).ctx
        d = W.coerce(a) - W.coerce(b)
        return d.pi_prec >= j * W.e and d.with_prec(j * W.e).is_zero()
    d = a - b
    return d.prec >= j and d.with_prec(j).is_zero()


def test_criterion_01_amice_calculus():
    ctx = padic_context(5, 6)
    rng = random.Random(1)
    with criterion(1, "Amice/Mellin calculus round-trips and Dirac moments", 1.0):
        for n in (1, 2):
            for _ in range(3):
                d = Distribution(n, ctx, [rng.randrange(5 ** 6) for _ in range(5 ** n)])
                assert distribution_from_series(series_from_distribution(d, 25), n) == d
        for _ in range(3):
            Phi = random_series(ctx, 25, rng)
            assert series_from_distribution(distribution_from_series(Phi, 2), 25) == Phi
        for a in range(25):
            Phi = PowerSeries.dirac(ctx, a, 25)
            for m in range(9):
                assert moment(Phi, m) == ctx.coerce(a ** m)


def test_criterion_02_twist_equivalence():
    ctx = padic_context(5, 6)
    rng = random.Random(2)
    with criterion(2, "twist_fourier = twist_pointwise on 100 random series", 10.0):
        for i in range(100):
            Phi = random_series(ctx, 25, rng)
            n = 1 + i % 2
            phi = [rng.randrange(5 ** 6) for _ in range(5 ** n)]
            a, b = twist_fourier(Phi, phi, n), twist_pointwise(Phi, phi, n)
            assert a == b and a.precision() == 6


def test_criterion_03_integration_identity():
    ctx = padic_context(5, 6)
    rng = random.Random(3)
    prim = {n: [DirichletChar(5, n, a, w) for a in range(4) for w in range(5 ** (n - 1))
                if DirichletChar(5, n, a, w).is_primitive()] for n in (1, 2)}
    with criterion(3, "Gauss-sum unfolding on 100 random measures, n in {1,2}, m <= 4", 30.0):
        for _ in range(100):
            Phi = random_series(ctx, 25, rng)
            for n in (1, 2):
                chi = rng.choice(prim[n])
                for m in range(5):
                    lhs, rhs, ok = integration_identity_check(Phi, chi, m)
                    assert ok, (n, chi, m)


def test_criterion_04_class_tower():
    with criterion(4, "class-group tower, projections, fibers, unit obstruction", 5.0):
        assert [len(class_group(d)) for d in (-11, -275, -6875)] == [1, 4, 20]
        small = class_group(-275).elements
        counts = {}
        for x in class_group(-6875).elements:
            y = project_class(x, -275, 5)
            counts[y] = counts.get(y, 0) + 1
        assert set(counts) == set(small) and set(counts.values()) == {5}
        for n in (1, 2):
            fib = fiber_classes(principal_form(-11), n, 5)
            assert len(fib) == len(set(fib.classes)) == 5 ** (n - 1) * 4
        with pytest.raises(UnitObstruction):
            fiber_classes(principal_form(-4), 1, 5)


def test_criterion_05_ideal_counts():
    def chi4(d):
        return 0 if d % 2 == 0 else (1 if d % 4 == 1 else -1)
    with criterion(5, "Q(i) ideal counts = sum_{d|n} chi_-4(d), n <= 500", 1.0):
        Qi = QuadField(-4)
        for n in range(1, 501):
            assert len(ideals_of_norm(Qi, n)) == sum(chi4(d) for d in range(1, n + 1) if n % d == 0)


# tau(5) = 4830 = 2 * 3 * 5 * 7 * 23 is divisible by 5, so Delta is not ordinary at 5:
# both roots of X^2 - 4830 X + 5^11 have positive valuation and U(5) is topologically
# nilpotent on span{Delta(q), Delta(q^5)}.  The projector is therefore 0 and the
# rank-1 / unit-eigenvalue parts of this criterion cannot hold.
@pytest.mark.xfail(strict=True, reason="Delta is not ordinary at 5 (5 | tau(5)); e = 0 on the span")
def test_criterion_06_ordinary_projector():
    with criterion(6, "tau values; e on span{Delta, Delta(q^5)} at p = 5", 10.0):
        assert (tau(2), tau(3), tau(5)) == (-24, 252, 4830)
        p, N = 5, 4
        D = delta(400)
        B = SpanBasis([D, hecke_V(D, p)], p, N)
        res = ordinary_projector(B, p, N)
        E, mod = res.E, res.mod
        EE = [[sum(E[i][k] * E[k][j] for k in range(2)) % mod for j in range(2)] for i in range(2)]
        assert EE == E
        U = res.U
        assert ([[sum(E[i][k] * U[k][j] for k in range(2)) % mod for j in range(2)] for i in range(2)]
                == [[sum(U[i][k] * E[k][j] for k in range(2)) % mod for j in range(2)] for i in range(2)])
        assert res.rank == 1, f"rank(E) = {res.rank}: tau(5) = 4830 is divisible by 5"
        alpha = res.eigenvalue
        assert alpha % p and (alpha * (tau(5) - alpha) - p ** 11) % mod == 0


def test_criterion_06_supplement_ordinary_prime():
    """The same machinery at p = 11, where tau(11) is a unit, gives rank 1."""
    p, N = 11, 4
    D = delta(11 * 11 * 4)
    res = ordinary_projector(SpanBasis([D, hecke_V(D, p)], p, N), p, N)
    assert res.rank == 1
    alpha = res.eigenvalue
    assert alpha % p and (alpha * (tau(11) - alpha) - p ** 11) % res.mod == 0


def test_criterion_07_control_congruence():
    ctx = padic_context(5, 6)
    with criterion(7, "Eisenstein k vs k+20 mod 5^2 (n <= 200); T(l) eigenvalues", 5.0):
        F = eisenstein_family(2, ctx, 201, 12)
        for k in (2, 4, 6):
            f, g = specialize_lambda_form(F, k), specialize_lambda_form(F, k + 20)
            for n in range(1, 201):
                assert cong(f[n], g[n], 2), (k, n)
            for ell in (2, 3, 7, 11, 13):
                Tf = hecke_T(f, ell)
                lam = ctx.one() + f.char(ell) * ctx.coerce(ell) ** (k - 1)
                for n in range(1, Tf.Q):
                    assert Tf[n] == lam * f[n]
            assert hecke_U(f, 5).coeffs[1:] == f.coeffs[1:hecke_U(f, 5).Q]


def test_criterion_08_critical_character():
    base = padic_context(5, 8)
    rng = random.Random(8)
    zs = []
    while len(zs) < 50:
        z = rng.randrange(1, 5 ** 8)
        if z % 5:
            zs.append(z)
    with criterion(8, "theta_(k,eps)^2 = eps psi omega^-k z^k mod 5^5; branches differ by omega^2", 5.0):
        th0 = build_critical_character(5, 2, 0)
        th1 = build_critical_character(5, 2, 1)
        for eps in (None, GammaChar(5, 1, 1)):
            for k in range(2, 9):
                for z in zs:
                    x = base.coerce(z)
                    v0 = th0.specialize(x, k, eps)
                    assert cong(v0 * v0, critical_target(th0, x, k, eps), 5), (z, k)
                    v1 = th1.specialize(x, k, eps)
                    w2 = teichmuller_lift(x) ** 2
                    w2 = v1.ctx.coerce(w2) if isinstance(v1, CycloElt) else w2
                    assert cong(v1, v0 * w2, 5)


@pytest.fixture(scope="module")
def families():
    return {0: eisenstein_two_var(0), 2: eisenstein_two_var(2)}


def test_criterion_09_two_variable_consistency(families):
    with criterion(9, "two_var_L = single_var_L(slice); unfolding for s >= 1", 60.0):
        slices = {k: families[k % 4].slice(k) for k in (2, 4, 6)}
        for s in (0, 1, 2):
            for chi in characters_of_conductor(-11, 1, 5, s):
                for m in range(3):
                    spec = AnticycloCharSpec(-11, 1, 5, s, chi, m)
                    for k in (2, 4, 6):
                        a = two_var_L(families[k % 4], spec, k)
                        b = single_var_L(slices[k], spec)
                        assert agree(a, b) and joint_precision(a, b) >= 4, (s, chi.exps, m, k)
                        if s:
                            assert agree(b, fiber_sum_expansion(slices[k], spec))


def test_criterion_10_branch_continuity():
    with criterion(10, "two_var_L at k and k + 20 congruent mod 5^2", 10.0):
        families = {0: eisenstein_two_var(0), 2: eisenstein_two_var(2)}
        chars = [(s, chi) for s in (0, 1, 2) for chi in characters_of_conductor(-11, 1, 5, s)[:2]]
        for s, chi in chars:
            for m in (0, 1):
                spec = AnticycloCharSpec(-11, 1, 5, s, chi, m)
                for k in (2, 4, 6):
                    F = families[k % 4]
                    assert cong(two_var_L(F, spec, k), two_var_L(F, spec, k + 20), 2), (s, m, k)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
