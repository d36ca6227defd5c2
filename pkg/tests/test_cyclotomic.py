import pytest
from hypothesis import given, settings, strategies as st

from anticyclo.characters import DirichletChar, gauss_sum
from anticyclo.cyclotomic import CycloElt, cyclo_context
from anticyclo.errors import NotRational
from anticyclo.padic import padic_context


@pytest.fixture(params=[(5, 1), (5, 2), (3, 3)])
def W(request):
    p, n = request.param
    return cyclo_context(padic_context(p, 5), n)


def test_primitive_root_examples(W):
    assert W.primitive_root(0) == W.one()
    assert W.primitive_root(W.q) == W.one()
    total = W.zero()
    for j in range(W.q):
        total = total + W.primitive_root(j)
    assert total.is_zero()


def test_zeta_has_exact_order(W):
    z = W.primitive_root(1)
    assert z ** W.q == W.one()
    assert z ** (W.q // W.p) != W.one()


def test_pi_valuations(W):
    assert W.coerce(W.p).pi_val() == W.e
    assert (W.primitive_root(1) - W.one()).pi_val() == 1
    assert (W.primitive_root(2) - W.one()).pi_val() == 1
    assert W.zero().pi_val() >= W.pi_prec


def test_descend_to_base(W):
    assert W.coerce(3).descend_to_base() == padic_context(W.p, 5).coerce(3)
    with pytest.raises(NotRational):
        (W.primitive_root(1) - W.one()).descend_to_base()


def test_gauss_sum_product_descends():
    base = padic_context(5, 5)
    chi = DirichletChar(5, 1, 2, 0)
    g = gauss_sum(chi, base) * gauss_sum(chi.conj(), base)
    assert g.descend_to_base() == base.coerce(5)


def test_tower_compatibility():
    base = padic_context(5, 4)
    W2, W1 = cyclo_context(base, 2), cyclo_context(base, 1)
    z = W2.primitive_root(1) ** 5
    assert z.descend(1) == W1.primitive_root(1)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 5 ** 6), min_size=4, max_size=4),
       st.lists(st.integers(0, 5 ** 6), min_size=4, max_size=4))
def test_valuation_is_additive(a, b):
    W = cyclo_context(padic_context(5, 6), 1)
    x, y = W.element(a), W.element(b)
    if x.is_zero() or y.is_zero():
        return
    vx, vy = x.pi_val(), y.pi_val()
    prod = x * y
    if vx + vy < prod.pi_prec:
        assert prod.pi_val() == vx + vy
    s = x + y
    assert s.pi_val() >= min(vx, vy)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 5 ** 5), min_size=4, max_size=4))
def test_units_invert(a):
    W = cyclo_context(padic_context(5, 5), 1)
    x = W.element(a)
    if not x.is_unit():
        return
    assert x * x.inverse() == W.one()


def test_json_roundtrip():
    W = cyclo_context(padic_context(5, 3), 2)
    x = W.primitive_root(7) + W.coerce(11)
    data = x.to_json()
    assert data["n"] == 2 and data["piPrec"] == x.pi_prec and len(data["coeffs"]) == W.e
    assert CycloElt.from_json(data) == x


def test_unramified_coefficients():
    W = cyclo_context(padic_context(5, 3, 2), 1)
    z = W.primitive_root(1)
    assert z ** 5 == W.one()
    x = W.coerce(W.base.root_of_unity(24))
    assert x ** 24 == W.one()
