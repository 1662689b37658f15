from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.exact.linalg import (
    AbelianInvariants,
    IntMatrix,
    Lattice,
    abelian_invariants,
    hnf,
    integer_kernel,
    is_unimodular,
    kernel_basis,
    lattice_from_generators,
    primitive_vector,
    rational_lattice,
    rational_rank,
    saturate,
    snf,
    solve_rational,
)

small_ints = st.integers(min_value=-9, max_value=9)


def int_matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=m, max_size=m)
        )
    ).map(lambda rows: IntMatrix.from_rows(rows))


def _check_hnf_shape(h: IntMatrix):
    last_pivot = -1
    seen_zero = False
    for i, row in enumerate(h.entries):
        nonzero = [j for j, x in enumerate(row) if x]
        if not nonzero:
            seen_zero = True
            continue
        assert not seen_zero, "zero rows must be at the bottom"
        j = nonzero[0]
        assert j > last_pivot
        assert row[j] > 0
        for above in range(i):
            assert 0 <= h[above, j] < row[j]
        last_pivot = j


# --- Hermite normal form ---

def test_hnf_identity():
    h, u = hnf(IntMatrix.identity(2))
    assert h == IntMatrix.identity(2)
    assert u == IntMatrix.identity(2)


def test_hnf_zero():
    h, u = hnf(IntMatrix.zero(2, 2))
    assert h == IntMatrix.zero(2, 2)
    assert u == IntMatrix.identity(2)


def test_hnf_small_example():
    a = IntMatrix.from_rows([[2, 4], [6, 8]])
    h, u = hnf(a)
    assert h == IntMatrix.from_rows([[2, 0], [0, 4]])
    assert abs(h.det()) == abs(a.det()) == 8
    assert u @ a == h


@settings(max_examples=150, deadline=None)
@given(int_matrices())
def test_hnf_properties(a):
    h, u = hnf(a)
    assert u @ a == h
    assert is_unimodular(u)
    _check_hnf_shape(h)


@settings(max_examples=100, deadline=None)
@given(int_matrices(), st.data())
def test_hnf_is_canonical(a, data):
    # any unimodular row operation leaves the normal form unchanged
    i = data.draw(st.integers(0, a.rows - 1))
    j = data.draw(st.integers(0, a.rows - 1))
    factor = data.draw(small_ints)
    rows = [list(r) for r in a.entries]
    if i != j:
        rows[i] = [x + factor * y for x, y in zip(rows[i], rows[j])]
    else:
        rows[i] = [-x for x in rows[i]]
    assert hnf(IntMatrix.from_rows(rows, a.cols))[0] == hnf(a)[0]


# --- Smith normal form ---

@pytest.mark.parametrize("rows, expected", [
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [1, 1, 1]),
    ([[1, 1], [2, 0], [0, 2]], [1, 2]),
    ([[2, 0], [0, 3]], [1, 6]),
    ([[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]], [1, 10, 30]),
    ([[2, 4]], [2]),
    ([[0, 0], [0, 0]], []),
    ([[0, 0], [0, 3]], [3]),
    ([[0, 2], [4, 0]], [2, 4]),
    ([[0, 6], [0, 4], [0, 0]], [2]),
])
def test_snf_examples(rows, expected):
    assert snf(IntMatrix.from_rows(rows)) == expected


def test_snf_of_empty_matrices():
    assert snf(IntMatrix.zero(0, 3)) == []
    assert snf(IntMatrix.zero(2, 0)) == []


@settings(max_examples=150, deadline=None)
@given(int_matrices())
def test_snf_divisibility_and_rank(a):
    d = snf(a)
    assert all(x > 0 for x in d)
    assert all(b % a_ == 0 for a_, b in zip(d, d[1:]))
    assert len(d) == rational_rank(a.entries)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(
    lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_snf_product_is_determinant(rows):
    a = IntMatrix.from_rows(rows)
    det = abs(a.det())
    d = snf(a)
    product = 1
    for x in d:
        product *= x
    assert (product if len(d) == a.rows else 0) == det


def test_abelian_invariants_of_cone_point_relations():
    inv = abelian_invariants(IntMatrix.from_rows([[1, 1], [2, 0], [0, 2]]))
    assert inv == AbelianInvariants(0, (2,))
    assert str(inv) == "Z/2"
    assert inv.torsion_order == 2


def test_abelian_invariants_free_part():
    inv = abelian_invariants(IntMatrix.from_rows([[0, 0, 2]]))
    assert inv.free_rank == 2
    assert inv.torsion == (2,)
    assert str(inv) == "Z^2 + Z/2"


def test_abelian_invariants_rejects_broken_chain():
    with pytest.raises(ValueError):
        AbelianInvariants(0, (2, 3))


# --- Lattices ---

def test_saturate_examples():
    assert saturate(lattice_from_generators([(2, 0)], 2)) == lattice_from_generators([(1, 0)], 2)
    assert saturate(lattice_from_generators([(1, 0)], 2)) == lattice_from_generators([(1, 0)], 2)
    empty = lattice_from_generators([], 2)
    assert saturate(empty) == empty
    assert saturate(empty).rank == 0


@settings(max_examples=100, deadline=None)
@given(int_matrices(max_rows=3, max_cols=3))
def test_saturate_properties(a):
    lat = lattice_from_generators(a.entries, a.cols)
    sat = saturate(lat)
    assert saturate(sat) == sat
    assert sat.rank == lat.rank
    for v in lat.vectors():
        assert sat.contains(v)


def test_rational_lattice_canonical_scale():
    lat = rational_lattice([(Fraction(1, 2), 0), (1, 0), (0, 1)], 2)
    assert lat.scale == 2
    assert lat.basis == IntMatrix.from_rows([[1, 0], [0, 2]])
    assert rational_lattice([(Fraction(2, 4), 0), (0, 1)], 2) == lat


def test_rational_lattice_half_lattice():
    half = rational_lattice([(Fraction(1, 2), 0), (Fraction(1, 2), Fraction(1, 2)), (0, 1)], 2)
    assert half.scale == 2
    assert half.basis == IntMatrix.identity(2)
    assert rational_lattice([(1, 0), (0, 1)], 2) == Lattice(2, IntMatrix.identity(2), 1)


def test_integer_kernel():
    k = integer_kernel(IntMatrix.from_rows([[2, 3]]))
    assert k.rows == 1
    assert abs(2 * k[0, 0] + 3 * k[0, 1]) == 0
    assert primitive_vector(k.row(0)) in {(3, -2), (-3, 2)}


def test_kernel_basis_examples():
    assert len(kernel_basis([[0, 0], [0, 0]])) == 2
    assert kernel_basis([[0, 1], [-1, 0]]) == []
    assert len(kernel_basis([[0, 1, 2], [-1, 0, 3], [-2, -3, 0]])) == 1


def test_solve_rational():
    assert solve_rational([[1, 0], [0, 2]], [1, 1]) == (Fraction(1), Fraction(1, 2))
    assert solve_rational([[1], [1]], [1, 2]) is None
    with pytest.raises(ValueError):
        solve_rational([[1, 1], [2, 2]], [1, 2])


@pytest.mark.parametrize("rows, expected", [
    ([[1, 0], [0, 1]], True),
    ([[2, 1], [1, 2]], False),
    ([[0, 1], [1, 0]], True),
])
def test_is_unimodular(rows, expected):
    assert is_unimodular(IntMatrix.from_rows(rows)) is expected


def test_is_unimodular_rejects_non_square():
    with pytest.raises(ValueError):
        is_unimodular(IntMatrix.from_rows([[1, 0, 0], [0, 1, 0]]))


def test_matrix_bounds_checked():
    with pytest.raises(IndexError):
        IntMatrix.identity(2)[2, 0]
