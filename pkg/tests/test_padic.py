import pytest
from hypothesis import given, settings, strategies as st

from anticyclo.errors import DomainError, NonUnit, PrecisionLoss
from anticyclo.padic import (PadicElt, decompose_unit, gamma_exponent, padic_context, padic_exp,
                             padic_log, teichmuller_lift)


def test_teichmuller_examples():
    assert teichmuller_lift(padic_context(5, 2).coerce(1)).lift() == 1
    assert teichmuller_lift(padic_context(5, 2).coerce(2)).lift() == 7
    assert teichmuller_lift(padic_context(5, 3).coerce(2)).lift() == 57


def test_teichmuller_rejects_non_units():
    with pytest.raises(NonUnit):
        teichmuller_lift(padic_context(5, 3).coerce(10))


@given(st.integers(1, 10 ** 9).filter(lambda a: a % 7))
def test_teichmuller_is_a_root_of_unity(a):
    ctx = padic_context(7, 5)
    w = teichmuller_lift(ctx.coerce(a))
    assert w ** 6 == ctx.one()
    assert (w.lift() - a) % 7 == 0


def test_teichmuller_in_unramified_extension():
    ctx = padic_context(5, 4, 2)
    z = ctx.coerce(ctx.primitive_element())
    w = teichmuller_lift(z)
    assert w ** 24 == ctx.one()


def test_log_examples():
    ctx = padic_context(5, 3)
    assert padic_log(ctx.one()).is_zero()
    assert padic_log(ctx.coerce(6)) == ctx.coerce(55)
    with pytest.raises(DomainError):
        padic_log(ctx.coerce(2))


@given(st.integers(0, 5 ** 8))
def test_exp_log_roundtrip(r):
    ctx = padic_context(5, 8)
    u = ctx.coerce(1 + 5 * r)
    back = padic_exp(padic_log(u))
    assert (back - u).with_prec(7).is_zero()


def test_decompose_unit_examples():
    ctx = padic_context(5, 4)
    a, s = decompose_unit(ctx.coerce(6))
    assert a == 0 and s == ctx.coerce(1).with_prec(s.prec)
    a, s = decompose_unit(teichmuller_lift(ctx.coerce(2)))
    assert s.is_zero() and pow(2, a, 5) == 2
    z = ctx.coerce(2)
    a, s = decompose_unit(z)
    rebuilt = teichmuller_lift(z) * ctx.gamma ** s.lift()
    assert (rebuilt - z).with_prec(s.prec).is_zero()


@settings(max_examples=60)
@given(st.integers(1, 5 ** 7), st.integers(1, 5 ** 7))
def test_decompose_unit_is_multiplicative(x, y):
    ctx = padic_context(5, 7)
    if x % 5 == 0 or y % 5 == 0:
        return
    a1, s1 = decompose_unit(ctx.coerce(x))
    a2, s2 = decompose_unit(ctx.coerce(y))
    a3, s3 = decompose_unit(ctx.coerce(x * y))
    assert (a1 + a2 - a3) % 4 == 0
    assert s1 + s2 == s3


def test_gamma_exponent_matches_log_route():
    ctx = padic_context(5, 6)
    for z in (2, 3, 7, 11, 24, 101):
        _, s = decompose_unit(ctx.coerce(z))
        assert (s.lift() - gamma_exponent(z % 5 ** 4, 5, 4)) % 5 ** 3 == 0


@given(st.integers(0, 5 ** 10), st.integers(0, 5 ** 10))
def test_precision_soundness(x, y):
    hi, lo = padic_context(5, 9), padic_context(5, 5)
    for op in (lambda a, b: a + b, lambda a, b: a * b, lambda a, b: a - b):
        h = op(hi.coerce(x), hi.coerce(y))
        l = op(lo.coerce(x), lo.coerce(y))
        assert (h.lift() - l.lift()) % 5 ** l.prec == 0


def test_multiplication_tracks_valuations():
    ctx = padic_context(5, 6)
    a = ctx.coerce(25).with_prec(4)
    b = ctx.coerce(3).with_prec(3)
    assert (a * b).prec == 4  # min(2 + 3, 0 + 4)
    assert (a * ctx.coerce(3).with_prec(1)).prec == 3


def test_divide_by_p():
    ctx = padic_context(5, 6)
    assert ctx.coerce(50).divide_by_p(2).lift() == 2
    with pytest.raises(PrecisionLoss):
        ctx.coerce(51).divide_by_p(1)


def test_inverse_in_extension():
    ctx = padic_context(7, 5, 3)
    x = PadicElt(ctx, (3, 1, 4), 5)
    assert x * x.inverse() == ctx.one()


def test_json_roundtrip():
    ctx = padic_context(5, 4)
    x = ctx.coerce(123)
    data = x.to_json()
    assert data == {"p": 5, "f": 1, "prec": 4, "digits": [3, 4, 4, 0]}
    assert PadicElt.from_json(data) == x
    ext = padic_context(5, 3, 2)
    y = PadicElt(ext, (7, 11), 3)
    assert PadicElt.from_json(y.to_json()) == y


def test_roots_of_unity_orders():
    ctx = padic_context(5, 5, 2)
    z = ctx.root_of_unity(24)
    assert z ** 24 == ctx.one()
    assert z ** 12 != ctx.one() and z ** 8 != ctx.one()
