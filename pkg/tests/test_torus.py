from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.exact.linalg import IntMatrix, lattice_from_generators, rational_lattice
from app.exact.torus import (
    Subtorus,
    Torus,
    TorusElement,
    element_subgroup_lattice,
    exp,
    generated_subtorus,
    order,
)

T2 = Torus(2)

fractions = st.builds(Fraction, st.integers(-20, 20), st.integers(1, 12))
vectors2 = st.tuples(fractions, fractions)


@pytest.mark.parametrize("v, expected", [
    ((1, 0), ("0", "0")),
    ((Fraction(-1, 2), 0), ("1/2", "0")),
    ((Fraction(1, 3), Fraction(5, 4)), ("1/3", "1/4")),
])
def test_exp_examples(v, expected):
    assert exp(v, T2) == TorusElement.parse(expected)


def test_exp_rejects_wrong_dimension():
    with pytest.raises(ValueError):
        exp((1, 2, 3), T2)


def test_torus_dimension_positive():
    with pytest.raises(ValueError):
        Torus(0)


@settings(max_examples=200, deadline=None)
@given(vectors2, vectors2)
def test_exp_is_a_homomorphism(v, w):
    total = tuple(a + b for a, b in zip(v, w))
    assert exp(total, T2) == exp(v, T2) + exp(w, T2)


@pytest.mark.parametrize("coords, expected", [
    (("0", "0"), 1),
    (("1/2", "0"), 2),
    (("1/3", "1/6"), 6),
])
def test_order_examples(coords, expected):
    assert order(TorusElement.parse(coords)) == expected


@settings(max_examples=200, deadline=None)
@given(vectors2)
def test_order_is_minimal(v):
    t = exp(v, T2)
    n = order(t)
    assert (n * t).is_identity()
    assert all(not (m * t).is_identity() for m in range(1, n))


def test_element_arithmetic():
    a = TorusElement.parse(["1/2", "1/3"])
    b = TorusElement.parse(["1/2", "2/3"])
    assert (a + b).is_identity()
    assert -a == TorusElement.parse(["1/2", "2/3"])
    assert a - a == TorusElement.identity(2)
    assert str(a) == "[1/2, 1/3]"
    with pytest.raises(ValueError):
        a + TorusElement.identity(3)


# --- Subtori ---

def test_generated_subtorus_examples():
    e1 = Subtorus.spanned_by(T2, [(1, 0)])
    e2 = Subtorus.spanned_by(T2, [(0, 1)])
    assert generated_subtorus(T2, [e1, e2]) == Subtorus.full(T2)
    assert generated_subtorus(T2, []) == Subtorus.trivial(T2)
    assert generated_subtorus(T2, [Subtorus.spanned_by(T2, [(2, 0)])]).basis() == [(1, 0)]


def test_generated_subtorus_rejects_foreign_torus():
    with pytest.raises(ValueError):
        generated_subtorus(T2, [Subtorus.full(Torus(3))])


T3 = Torus(3)

subtori_3 = st.builds(
    lambda vectors: Subtorus.spanned_by(T3, vectors),
    st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)), max_size=2),
)


@settings(max_examples=60, deadline=None)
@given(st.lists(subtori_3, max_size=4).flatmap(lambda parts: st.tuples(st.just(parts), st.permutations(parts))))
def test_generated_subtorus_is_idempotent_and_order_free(case):
    parts, shuffled = case
    generated = generated_subtorus(T3, parts)
    assert generated_subtorus(T3, [generated]) == generated
    assert generated_subtorus(T3, parts + [generated]) == generated
    assert generated_subtorus(T3, shuffled) == generated
    for part in parts:
        assert all(generated.lattice.contains(v) for v in part.basis())


def test_subtorus_requires_saturated_lattice():
    with pytest.raises(ValueError):
        Subtorus(T2, lattice_from_generators([(2, 0)], 2))


def test_subtorus_membership():
    circle = Subtorus.spanned_by(T2, [(1, 1)])
    assert circle.contains_element(TorusElement.parse(["1/3", "1/3"]))
    assert not circle.contains_element(TorusElement.parse(["1/3", "0"]))
    assert Subtorus.full(T2).contains_element(TorusElement.parse(["1/5", "2/7"]))
    assert Subtorus.trivial(T2).contains_element(TorusElement.identity(2))
    assert not Subtorus.trivial(T2).contains_element(TorusElement.parse(["1/2", "0"]))


# --- Generated subgroups ---

def test_element_subgroup_lattice_examples():
    assert element_subgroup_lattice([TorusElement.identity(2)]) == rational_lattice([(1, 0), (0, 1)], 2)

    half = element_subgroup_lattice([TorusElement.parse(["1/2", "0"])])
    assert half.scale == 2
    assert half.basis == IntMatrix.from_rows([[1, 0], [0, 2]])

    both = element_subgroup_lattice([TorusElement.parse(["1/2", "0"]), TorusElement.parse(["0", "1/2"])])
    assert both == rational_lattice([(Fraction(1, 2), 0), (0, Fraction(1, 2))], 2)


def test_element_subgroup_lattice_needs_dimension_for_empty_list():
    with pytest.raises(ValueError):
        element_subgroup_lattice([])
    assert element_subgroup_lattice([], 2) == rational_lattice([(1, 0), (0, 1)], 2)
