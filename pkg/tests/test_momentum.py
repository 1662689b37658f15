import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.analytics.momentum import (
    ProjectivePoint,
    SpherePoint,
    cpn_momentum,
    hamilton_residual_s2,
    hamiltonian_grid,
    hull_violation,
    momentum_hull_estimate,
    s2_momentum,
)


def test_sphere_point_ranges():
    assert s2_momentum(SpherePoint(1.0, -0.25)) == -0.25
    with pytest.raises(ValueError):
        SpherePoint(2 * math.pi, 0.0)
    with pytest.raises(ValueError):
        SpherePoint(0.0, 1.5)


def test_projective_point_checks():
    with pytest.raises(ValueError):
        ProjectivePoint(np.zeros(3))
    with pytest.raises(ValueError):
        ProjectivePoint(np.array([1.0]))
    assert ProjectivePoint.from_real_pairs([(1, 0), (0, 1), (0, 0)]).n == 2


def test_cp2_momentum_at_coordinate_points():
    lam = 2.0
    assert np.allclose(cpn_momentum(ProjectivePoint(np.array([1, 0, 0])), lam), [0.0, 0.0])
    assert np.allclose(cpn_momentum(ProjectivePoint(np.array([0, 1, 0])), lam), [lam, 0.0])
    assert np.allclose(cpn_momentum(ProjectivePoint(np.array([0, 0, 1])), lam), [0.0, lam])


def test_cpn_momentum_is_projectively_invariant():
    z = ProjectivePoint(np.array([1 + 1j, 2, -0.5j]))
    scaled = ProjectivePoint(z.coords * (3 - 4j))
    assert np.allclose(cpn_momentum(z, 1.0), cpn_momentum(scaled, 1.0))


def test_cpn_momentum_needs_positive_lambda():
    with pytest.raises(ValueError):
        cpn_momentum(ProjectivePoint(np.array([1, 1])), 0.0)


@settings(max_examples=100, deadline=None)
@given(
    st.floats(-2.0, 2.0),
    st.floats(0.0, 6.28),
    st.floats(-0.9, 0.9),
)
def test_hamilton_residual_is_small(x, theta, h):
    assert hamilton_residual_s2(x, SpherePoint(theta, h), 1e-5) < 1e-6


def test_hamilton_residual_rejects_bad_steps():
    with pytest.raises(ValueError):
        hamilton_residual_s2(1.0, SpherePoint(0.0, 0.0), 0.0)
    with pytest.raises(ValueError):
        hamilton_residual_s2(1.0, SpherePoint(0.0, 0.99999), 1e-4)


def test_hamiltonian_grid_is_seeded():
    first = hamiltonian_grid(50, seed=7)
    second = hamiltonian_grid(50, seed=7)
    assert list(first.columns) == ["theta", "h", "X", "residual"]
    assert len(first) == 50
    assert first.equals(second)
    assert (first["h"].abs() <= 0.9).all()
    assert (first["residual"] < 1e-6).all()


def test_empty_grid():
    df = hamiltonian_grid(0)
    assert df.empty
    assert list(df.columns) == ["theta", "h", "X", "residual"]


def test_hull_violation():
    assert hull_violation(np.array([0.2, 0.3]), 1.0) == 0.0
    assert hull_violation(np.array([-0.5, 0.3]), 1.0) == pytest.approx(0.5)
    assert hull_violation(np.array([0.7, 0.8]), 1.0) == pytest.approx(0.5)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_momentum_hull_of_cpn(n):
    estimate = momentum_hull_estimate(n, 1.5, samples=500, seed=3)
    assert estimate.contained
    assert estimate.vertices.shape == (n + 1, n)
    expected = np.vstack([np.zeros(n), 1.5 * np.eye(n)])
    assert np.allclose(np.sort(estimate.vertices, axis=0), np.sort(expected, axis=0))


def test_momentum_hull_needs_samples():
    with pytest.raises(ValueError):
        momentum_hull_estimate(2, 1.0, samples=0)


def test_hamilton_residual_on_full_grid():
    df = hamiltonian_grid(1000, seed=0, step=1e-5, h_max=0.9)
    assert df["residual"].max() < 1e-6


def test_coordinate_points_hit_simplex_vertices():
    lam = 0.75
    for j in range(4):
        image = cpn_momentum(ProjectivePoint(np.eye(4)[j]), lam)
        expected = np.zeros(3) if j == 0 else lam * np.eye(3)[j - 1]
        assert np.max(np.abs(image - expected)) <= 1e-12
