import random
from collections import Counter
from math import gcd, isqrt

import pytest
from hypothesis import given, settings, strategies as st

from anticyclo.errors import (ConductorMismatch, DiscMismatch, NotDefinite, NotPrimitive, NotSplit,
                              Ramified, UnitObstruction)
from anticyclo.quadratic import (FormClass, QuadField, class_group, class_number_formula, compose,
                                 fiber_classes, fundamental_part, ideals_of_norm, inverse,
                                 is_split, kernel_label, lift_class, order_of, power,
                                 principal_form, project_class, reduce_form, reduced_forms)


def brute_reduced(disc):
    """Reduced primitive forms straight from the definition."""
    out = []
    for a in range(1, isqrt(-disc // 3) + 2):
        for b in range(-a + 1, a + 1):
            if (b * b - disc) % (4 * a):
                continue
            c = (b * b - disc) // (4 * a)
            if c < a or (c == a and b < 0) or gcd(gcd(a, b), c) != 1:
                continue
            out.append((a, b, c))
    return sorted(out)


def test_reduce_examples():
    assert reduce_form((1, 0, 25)) == FormClass(1, 0, 25)
    assert reduce_form((13, -2, 2)) == FormClass(2, 2, 13)
    assert reduce_form((1, 1, 3)) == FormClass(1, 1, 3)
    with pytest.raises(NotPrimitive):
        reduce_form((2, 2, 26))
    with pytest.raises(NotDefinite):
        reduce_form((1, 5, 1))


@settings(max_examples=50)
@given(st.integers(1, 60), st.integers(-60, 60), st.integers(1, 60))
def test_reduction_preserves_disc(a, b, c):
    if b * b - 4 * a * c >= 0 or gcd(gcd(a, b), c) != 1:
        return
    f = reduce_form((a, b, c))
    assert f.disc == b * b - 4 * a * c
    assert f.as_tuple() in brute_reduced(f.disc)


def test_composition_examples():
    x = FormClass(2, 2, 13)
    assert compose(principal_form(-100), x) == x
    assert compose(x, x) == principal_form(-100)
    with pytest.raises(DiscMismatch):
        compose(x, FormClass(1, 1, 3))


def test_group_axioms():
    rng = random.Random(7)
    for disc in (-275, -6875, -900, -23 * 49):
        els = class_group(disc).elements
        e = principal_form(disc)
        for _ in range(20):
            x, y, z = (rng.choice(els) for _ in range(3))
            assert compose(x, inverse(x)) == e
            assert compose(x, y) == compose(y, x)
            assert compose(compose(x, y), z) == compose(x, compose(y, z))
            assert power(x, len(els)) == e


@pytest.mark.parametrize("disc,h", [(-11, 1), (-100, 2), (-275, 4), (-6875, 20), (-23, 3),
                                    (-4 * 25, 2), (-3 * 49, 2), (-900, 8)])
def test_class_numbers(disc, h):
    assert len(class_group(disc)) == h
    assert sorted(f.as_tuple() for f in reduced_forms(disc)) == brute_reduced(disc)
    D, c = fundamental_part(disc)
    assert class_number_formula(D, c) == h


def test_structure_and_discrete_log():
    G = class_group(-900)
    assert sorted(G.structure()) == [2, 4]
    for x in G.elements:
        assert G.element(G.discrete_log(x)) == x
    G = class_group(-6875)
    assert G.structure() == [20]
    data = G.to_json()
    assert data["order"] == 20 and len(data["elements"]) == 20


def test_splitting():
    assert is_split(5, QuadField(-11))
    assert is_split(5, QuadField(-4))
    assert not is_split(7, QuadField(-11))
    with pytest.raises(Ramified):
        is_split(11, QuadField(-11))


def test_projection_is_surjective_homomorphism():
    big, small = class_group(-6875), class_group(-275)
    img = {x: project_class(x, -275, 5) for x in big.elements}
    assert Counter(img.values()) == {y: 5 for y in small.elements}
    rng = random.Random(3)
    for _ in range(20):
        x, y = rng.choice(big.elements), rng.choice(big.elements)
        assert project_class(compose(x, y), -275) == compose(img[x], img[y])
    assert project_class(principal_form(-6875), -11) == principal_form(-11)


def test_projection_errors():
    with pytest.raises(NotSplit):
        project_class(principal_form(-11 * 49), -11, 7)
    with pytest.raises(ConductorMismatch):
        project_class(principal_form(-275), -11 * 4)


def test_lift_then_project():
    for x in class_group(-275).elements:
        assert project_class(lift_class(x, 1, 5), -275) == x


def test_kernel_labels_form_a_group():
    q = 25
    labels = {u: kernel_label(u, -11, 1, 5, 2) for u in range(1, q) if u % 5}
    assert len(set(labels.values())) == 20
    for u in (2, 3, 7):
        for v in (4, 11):
            assert compose(labels[u], labels[v]) == labels[u * v % q]


@pytest.mark.parametrize("n,size", [(1, 4), (2, 20)])
def test_fiber_classes(n, size):
    A = principal_form(-11)
    fib = fiber_classes(A, n, 5)
    assert len(fib) == size == 5 ** (n - 1) * 4
    assert len(set(fib.classes)) == size
    assert set(fib.classes) == set(class_group(-11 * 25 ** n).elements)
    assert all(project_class(x, -11) == A for x in fib)


def test_fiber_classes_nontrivial_base():
    for A in class_group(-23).elements:
        fib = fiber_classes(A, 1, 3)
        assert len(fib) == 2 and all(project_class(x, -23) == A for x in fib)


def test_unit_obstruction():
    with pytest.raises(UnitObstruction):
        fiber_classes(principal_form(-4), 1, 5)
    assert len(class_group(-100)) == 2


def test_ideals_of_norm_examples():
    Qi = QuadField(-4)
    assert len(ideals_of_norm(Qi, 1)) == 1
    assert len(ideals_of_norm(Qi, 5)) == 2
    assert len(ideals_of_norm(Qi, 3)) == 0
    assert len(ideals_of_norm(Qi, 9)) == 1


def test_ideal_counts_match_divisor_sums():
    def chi4(d):
        return 0 if d % 2 == 0 else (1 if d % 4 == 1 else -1)
    Qi = QuadField(-4)
    for n in range(1, 301):
        expect = sum(chi4(d) for d in range(1, n + 1) if n % d == 0)
        assert len(ideals_of_norm(Qi, n)) == expect


def test_order_helpers():
    O = order_of(-11, 5)
    assert O.disc == -275 and O.unit_index() == 1
    assert order_of(-4, 5).unit_index() == 2
    assert fundamental_part(-6875) == (-11, 25)
