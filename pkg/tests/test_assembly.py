from fractions import Fraction

import pytest

from anticyclo.assembly import (AnticycloCharSpec, agree, build_two_var, characters_of_conductor,
                                cm_fiber_values, fiber_sum_expansion, joint_precision,
                                lvalue_pair, measure_from_texpansion, single_var_L, two_var_L)
from anticyclo.characters import ClassGroupChar, DirichletChar
from anticyclo.cyclotomic import CycloElt, cyclo_context
from anticyclo.errors import BranchMismatch, DomainError
from anticyclo.fixtures import dirac_single_var, eisenstein_cm_classes, eisenstein_two_var
from anticyclo.measures import PowerSeries, moment, twist_pointwise
from anticyclo.modforms import specialize_lambda_form, eisenstein_family
from anticyclo.padic import padic_context
from anticyclo.quadratic import class_group

ctx = padic_context(5, 6)


def congruent(a, b, j):
    """a = b mod p^j, for base or cyclotomic values."""
    if isinstance(a, CycloElt) or isinstance(b, CycloElt):
        W = (a if isinstance(a, CycloElt) else b).ctx
        return (W.coerce(a) - W.coerce(b)).with_prec(j * W.e).is_zero()
    return (a - b).with_prec(j).is_zero()


@pytest.fixture(scope="module")
def two_var():
    return {k0: eisenstein_two_var(k0) for k0 in (0, 2)}


def quadratic_spec():
    G = class_group(-275)
    return AnticycloCharSpec(-11, 1, 5, 1, ClassGroupChar(G, (Fraction(1, 2),)))


def test_measure_from_texpansion_examples():
    mu = measure_from_texpansion(PowerSeries.from_ints(ctx, [1]))
    assert mu.distribution(1).table[0].lift() == 1 and mu.support == "Zp"
    Phi = PowerSeries.dirac(ctx, 7, 10)
    for m in range(5):
        assert measure_from_texpansion(Phi).moment(m).lift() == 7 ** m
    depleted = PowerSeries.dirac(ctx, 3, 12) + PowerSeries.dirac(ctx, 11, 12)
    assert measure_from_texpansion(depleted).support == "units"


def test_cm_fiber_values_examples():
    W = cyclo_context(ctx, 1)
    a = 3
    Phi = PowerSeries.dirac(ctx, a, 12)
    vals0 = cm_fiber_values(Phi, 1, 0)
    vals1 = cm_fiber_values(Phi, 1, 1)
    assert sorted(vals0) == [1, 2, 3, 4]
    for u in vals0:
        assert vals0[u] == W.primitive_root(u * a)
        assert vals1[u] == W.primitive_root(u * a) * W.coerce(a)


def test_spec_finite_parts():
    assert AnticycloCharSpec(-11, 1, 5, 0).finite_part().n == 0
    assert quadratic_spec().finite_part() == DirichletChar(5, 1, 2, 0)
    chars = characters_of_conductor(-11, 1, 5, 2)
    assert len(chars) == 16  # primitive characters mod 25
    assert all(AnticycloCharSpec(-11, 1, 5, 2, chi).finite_part().is_primitive() for chi in chars)


def test_single_var_examples():
    lam = (3, 2)
    mu = dirac_single_var([{1: 1}], lam=lam)
    val = single_var_L(mu, AnticycloCharSpec(-11, 1, 5, 0))
    assert val == ctx.coerce(3 * 2 ** 2)
    mu = dirac_single_var([{2: 1}], lam=lam)
    val = single_var_L(mu, quadratic_spec())
    assert val == ctx.coerce(-3 * 2 ** 2)


def test_single_var_matches_direct_twist():
    mu = dirac_single_var([{1: 2, 2: 5, 7: 1, 10: 4}])
    spec = AnticycloCharSpec(-11, 1, 5, 1, quadratic_spec().chi, m=2)
    expect = moment(twist_pointwise(mu.classes[0].texp, [0, 1, -1, -1, 1]), 2)
    assert single_var_L(mu, spec) == expect


@pytest.mark.parametrize("s", [1, 2])
def test_fiber_sum_unfolds_single_var(s):
    mu = dirac_single_var([{1: 2, 3: 1, 8: 5, 12: 3}])
    for chi in characters_of_conductor(-11, 1, 5, s)[:3]:
        for m in (0, 1):
            spec = AnticycloCharSpec(-11, 1, 5, s, chi, m)
            assert agree(single_var_L(mu, spec), fiber_sum_expansion(mu, spec))


def test_fiber_sum_needs_positive_level():
    mu = dirac_single_var([{1: 1}])
    with pytest.raises(DomainError):
        fiber_sum_expansion(mu, AnticycloCharSpec(-11, 1, 5, 0))


def test_dirac_power_scaling():
    mu = dirac_single_var([{3: 1}])
    spec0 = AnticycloCharSpec(-11, 1, 5, 1, quadratic_spec().chi, 0)
    spec1 = AnticycloCharSpec(-11, 1, 5, 1, quadratic_spec().chi, 1)
    v0, v1 = fiber_sum_expansion(mu, spec0), fiber_sum_expansion(mu, spec1)
    assert agree(v1, v0 * v0.ctx.coerce(3))


def test_slice_is_eisenstein_specialization(two_var):
    F = two_var[2]
    sl = F.slice(6)
    f6 = specialize_lambda_form(eisenstein_family(2, ctx, 25, 8), 6)
    expect = sum((PowerSeries.dirac(ctx, n, 25).scale(f6[n]) for n in range(1, 25) if n % 5),
                 PowerSeries.from_ints(ctx, [0] * 25))
    assert sl.classes[0].texp == expect
    assert sl.k == 6


def test_two_var_consistency(two_var):
    for k in (2, 4, 6):
        F = two_var[k % 4]
        for s in (0, 1):
            chi = characters_of_conductor(-11, 1, 5, s)[-1]
            a, b, ok = lvalue_pair(F, AnticycloCharSpec(-11, 1, 5, s, chi, 1), k)
            assert ok and joint_precision(a, b) >= 4


def test_group_like_scalar():
    # d_1 = 6 = gamma against the default d_1 = 2: the ratio at weight k is 3^k
    ctx_, classes = eisenstein_cm_classes(scalars={1: (1, 6)})
    F = build_two_var(classes, 0, 5, -11, 1, ctx_)
    plain = eisenstein_two_var(0)
    spec = AnticycloCharSpec(-11, 1, 5, 0)
    lhs = two_var_L(F, spec, 4)
    rhs = two_var_L(plain, spec, 4) * ctx.coerce(3) ** 4
    assert agree(lhs, rhs)


def test_branch_mismatch(two_var):
    with pytest.raises(BranchMismatch):
        two_var_L(two_var[2], AnticycloCharSpec(-11, 1, 5, 0), 4)
    with pytest.raises(BranchMismatch):
        two_var[0].slice(6)


def test_branch_continuity(two_var):
    spec = AnticycloCharSpec(-11, 1, 5, 1, characters_of_conductor(-11, 1, 5, 1)[0])
    a = two_var_L(two_var[2], spec, 2)
    b = two_var_L(two_var[2], spec, 22)
    assert congruent(a, b, 2)


def test_omega_placeholder():
    mu = dirac_single_var([{1: 1}], lam=(1, 1))
    spec = AnticycloCharSpec(-11, 1, 5, 0)
    raw = single_var_L(mu, spec)
    assert single_var_L(mu, spec, omega=ctx.one()) == raw
    assert single_var_L(mu, spec, omega=ctx.coerce(2)) * ctx.coerce(4) == raw
