"""
Floating-point checks of momentum maps: the height function on S^2, the
standard momentum map of CP^n, and Hamilton's equation
-d<mu, X> = i_{X_M} omega by central differences.

All values here are approximate; exact invariants live in app.exact.
"""
from dataclasses import dataclass
from typing import Sequence
import logging
import math

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

TWO_PI = 2 * math.pi
HULL_TOLERANCE = 1e-12

# omega = d(theta) ^ d(h) in the (theta, h) chart
OMEGA_S2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class SpherePoint:
    """
    Point of the unit sphere in cylindrical coordinates: angle theta in
    [0, 2*pi) and height h in [-1, 1].
    """
    theta: float
    h: float

    def __post_init__(self):
        if not 0.0 <= self.theta < TWO_PI:
            raise ValueError(f"theta must lie in [0, 2*pi), got {self.theta}.")
        if not -1.0 <= self.h <= 1.0:
            raise ValueError(f"h must lie in [-1, 1], got {self.h}.")


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """
    Homogeneous coordinates [z_0 : ... : z_n] of a point of CP^n.
    """
    coords: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.coords, dtype=complex)
        if z.ndim != 1 or z.size < 2:
            raise ValueError("A point of CP^n needs at least two homogeneous coordinates.")
        if np.linalg.norm(z) == 0:
            raise ValueError("Homogeneous coordinates must not all vanish.")
        object.__setattr__(self, "coords", z)

    @classmethod
    def from_real_pairs(cls, pairs: Sequence[Sequence[float]]) -> "ProjectivePoint":
        return cls(np.array([complex(re, im) for re, im in pairs]))

    @property
    def n(self) -> int:
        return self.coords.size - 1


@dataclass(frozen=True, eq=False)
class HullEstimate:
    vertices: np.ndarray
    samples: int
    contained: bool
    max_violation: float


# --- Momentum maps ---

def s2_momentum(p: SpherePoint) -> float:
    return p.h


def cpn_momentum(z: ProjectivePoint, lam: float) -> np.ndarray:
    """
    mu_k = lam * |z_k|^2 / sum_i |z_i|^2 for k = 1..n.
    """
    if lam <= 0:
        raise ValueError(f"lambda must be positive, got {lam}.")
    weights = np.abs(z.coords) ** 2
    return lam * weights[1:] / weights.sum()


# --- Hamilton's equation ---

def hamilton_residual_s2(X: float, p: SpherePoint, step: float) -> float:
    """
    Max-norm discrepancy between -d<mu, X> and i_{X_M} omega at p, both by
    central differences. The circle acts by theta -> theta - sX, so the
    fundamental vector field is X_M = -X d/dtheta.
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}.")
    if abs(p.h) + step > 1.0:
        raise ValueError(f"Point with h = {p.h} is too close to a pole of the (theta, h) chart.")

    def hamiltonian(theta: float, h: float) -> float:
        return X * s2_momentum(SpherePoint(theta % TWO_PI, h))

    def flow(s: float) -> np.ndarray:
        return np.array([p.theta - s * X, p.h])

    lhs = -np.array([
        (hamiltonian(p.theta + step, p.h) - hamiltonian(p.theta - step, p.h)) / (2 * step),
        (hamiltonian(p.theta, p.h + step) - hamiltonian(p.theta, p.h - step)) / (2 * step),
    ])
    x_m = (flow(step) - flow(-step)) / (2 * step)
    rhs = x_m @ OMEGA_S2
    return float(np.max(np.abs(lhs - rhs)))


def hamiltonian_grid(points: int, seed: int = 0, step: float = 1e-5, h_max: float = 0.9) -> pd.DataFrame:
    """
    Residuals of Hamilton's equation at random (X, theta, h) with |h| <= h_max.
    """
    rng = np.random.default_rng(seed)
    thetas = rng.uniform(0.0, TWO_PI, points)
    heights = rng.uniform(-h_max, h_max, points)
    xs = rng.uniform(-2.0, 2.0, points)

    rows = [
        {
            "theta":    float(theta),
            "h":        float(h),
            "X":        float(x),
            "residual": hamilton_residual_s2(float(x), SpherePoint(float(theta), float(h)), step),
        }
        for theta, h, x in zip(thetas, heights, xs)
    ]
    logger.debug("evaluated Hamilton residuals at %d points", points)
    return pd.DataFrame(rows, columns=["theta", "h", "X", "residual"])


# --- Momentum polytope of CP^n ---

def _random_point(rng: np.random.Generator, n: int) -> ProjectivePoint:
    return ProjectivePoint(rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1))


def hull_violation(x: np.ndarray, lam: float) -> float:
    """
    How far x lies outside conv{0, lam e_1, ..., lam e_n}; 0 when inside.
    """
    return max(0.0, -float(np.min(x)), float(np.sum(x)) - lam)


def momentum_hull_estimate(n: int, lam: float, samples: int, seed: int = 0) -> HullEstimate:
    """
    Vertex candidates from the coordinate points e_0..e_n plus a containment
    check of random sample images.
    """
    if samples < 1:
        raise ValueError(f"samples must be at least 1, got {samples}.")

    images = [cpn_momentum(ProjectivePoint(np.eye(n + 1)[j]), lam) for j in range(n + 1)]
    vertices = np.unique(np.round(np.array(images), 12), axis=0)

    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        worst = max(worst, hull_violation(cpn_momentum(_random_point(rng, n), lam), lam))

    return HullEstimate(
        vertices=vertices,
        samples=samples,
        contained=worst <= HULL_TOLERANCE,
        max_violation=worst,
    )
