from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple
import logging

from sympy import ZZ, Matrix
from sympy.matrices.normalforms import invariant_factors
try:
    from sympy.core.intfunc import igcdex
except ImportError:  # sympy < 1.13
    from sympy.core.numbers import igcdex

logger = logging.getLogger(__name__)

RationalVector = Tuple[Fraction, ...]


def to_fraction(value) -> Fraction:
    """
    Convert an int, Fraction, "p/q" string or sympy Rational into a reduced Fraction.
    """
    if isinstance(value, Fraction):
        return value
    if hasattr(value, "p") and hasattr(value, "q"):
        return Fraction(int(value.p), int(value.q))
    return Fraction(value)


def rational_vector(values: Sequence) -> RationalVector:
    return tuple(to_fraction(v) for v in values)


def primitive_vector(values: Sequence) -> Tuple[int, ...]:
    """
    Scale a nonzero rational vector to the primitive integer vector pointing the same way.
    """
    vec = rational_vector(values)
    den = lcm(*(v.denominator for v in vec)) if vec else 1
    ints = [int(v * den) for v in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("Zero vector has no primitive direction.")
    return tuple(x // g for x in ints)


@dataclass(frozen=True)
class IntMatrix:
    """
    Dense integer matrix, row-major, arbitrary precision entries.
    """
    rows: int
    cols: int
    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("Matrix dimensions must be non-negative.")
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError("Matrix entries do not match the declared shape.")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("Column count required for a matrix without rows.")
            cols = len(rows[0])
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    def __getitem__(self, index: Tuple[int, int]) -> int:
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"Entry ({i}, {j}) out of bounds for {self.rows}x{self.cols} matrix.")
        return self.entries[i][j]

    def row(self, i: int) -> Tuple[int, ...]:
        return self.entries[i]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}.")
        cols_of_other = other.transpose().entries
        return IntMatrix(self.rows, other.cols, tuple(
            tuple(sum(a * b for a, b in zip(r, c)) for c in cols_of_other)
            for r in self.entries
        ))

    def mod(self, n: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(tuple(x % n for x in r) for r in self.entries))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def to_sympy(self) -> Matrix:
        return Matrix(self.rows, self.cols, lambda i, j: self.entries[i][j])

    def det(self) -> int:
        if self.rows != self.cols:
            raise ValueError("Determinant requires a square matrix.")
        if self.rows == 0:
            return 1
        return int(self.to_sympy().det(method="bareiss"))

    def to_lists(self) -> List[List[int]]:
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class Lattice:
    """
    Lattice (1/scale)·rowspan(basis) in Q^n, held in canonical form:
    basis is the row Hermite normal form without zero rows, and
    gcd(scale, all basis entries) = 1. Structural equality is lattice equality.
    """
    ambient_dim: int
    basis: IntMatrix
    scale: int = 1

    @property
    def rank(self) -> int:
        return self.basis.rows

    def vectors(self) -> List[RationalVector]:
        return [tuple(Fraction(x, self.scale) for x in r) for r in self.basis.entries]

    def contains(self, v: Sequence) -> bool:
        """
        Membership test by appending v to the generators and comparing normal forms.
        """
        return rational_lattice(self.vectors() + [rational_vector(v)], self.ambient_dim) == self

    def is_saturated(self) -> bool:
        return self.scale == 1 and saturate(self) == self


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: Tuple[int, ...]

    def __post_init__(self):
        if any(d < 2 for d in self.torsion):
            raise ValueError("Torsion coefficients must be at least 2.")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError("Torsion coefficients must form a divisibility chain.")

    @property
    def torsion_order(self) -> int:
        order = 1
        for d in self.torsion:
            order *= d
        return order

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.torsion]
        if self.free_rank:
            parts.insert(0, "Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


# --- Hermite and Smith normal forms ---

def hnf(a: IntMatrix) -> Tuple[IntMatrix, IntMatrix]:
    """
    Row Hermite normal form. Returns (h, u) with u unimodular and u·a = h.
    Pivots are positive, entries above a pivot lie in [0, pivot),
    zero rows collect at the bottom.
    """
    m, n = a.rows, a.cols
    h = [list(r) for r in a.entries]
    u = [list(r) for r in IntMatrix.identity(m).entries]

    pivot_row = 0
    for col in range(n):
        if pivot_row == m:
            break

        # gcd-combine every lower row into the pivot row
        for i in range(pivot_row + 1, m):
            y = h[i][col]
            if y == 0:
                continue
            x = h[pivot_row][col]
            s, t, g = igcdex(x, y)
            s, t, g = int(s), int(t), int(g)
            p, q = -y // g, x // g
            h[pivot_row], h[i] = (
                [s * hp + t * hi for hp, hi in zip(h[pivot_row], h[i])],
                [p * hp + q * hi for hp, hi in zip(h[pivot_row], h[i])],
            )
            u[pivot_row], u[i] = (
                [s * up + t * ui for up, ui in zip(u[pivot_row], u[i])],
                [p * up + q * ui for up, ui in zip(u[pivot_row], u[i])],
            )

        pivot = h[pivot_row][col]
        if pivot == 0:
            continue
        if pivot < 0:
            h[pivot_row] = [-x for x in h[pivot_row]]
            u[pivot_row] = [-x for x in u[pivot_row]]
            pivot = -pivot

        for i in range(pivot_row):
            q = h[i][col] // pivot
            if q:
                h[i] = [hi - q * hp for hi, hp in zip(h[i], h[pivot_row])]
                u[i] = [ui - q * up for ui, up in zip(u[i], u[pivot_row])]

        pivot_row += 1

    return IntMatrix.from_rows(h, n), IntMatrix.from_rows(u, m)


def snf(a: IntMatrix) -> List[int]:
    """
    Nonzero Smith normal form diagonal d1 | d2 | ... | dr of a, r = rank(a).
    """
    if a.rows == 0 or a.cols == 0:
        return []
    factors = invariant_factors(a.to_sympy(), domain=ZZ)
    diagonal = sorted(abs(int(d)) for d in factors if d != 0)
    logger.debug("snf of %dx%d matrix: %s", a.rows, a.cols, diagonal)
    return diagonal


def abelian_invariants(relations: IntMatrix) -> AbelianInvariants:
    """
    Abelian invariants of Z^cols modulo the row span of the relation matrix.
    """
    diagonal = snf(relations)
    return AbelianInvariants(
        free_rank=relations.cols - len(diagonal),
        torsion=tuple(d for d in diagonal if d > 1),
    )


def is_unimodular(a: IntMatrix) -> bool:
    if a.rows != a.cols:
        raise ValueError(f"Unimodularity needs a square matrix, got {a.rows}x{a.cols}.")
    return abs(a.det()) == 1


# --- Lattices ---

def lattice_from_generators(generators: Sequence[Sequence[int]], ambient_dim: int) -> Lattice:
    if not generators:
        return Lattice(ambient_dim, IntMatrix.zero(0, ambient_dim))
    h, _ = hnf(IntMatrix.from_rows(generators, ambient_dim))
    nonzero = [r for r in h.entries if any(r)]
    return Lattice(ambient_dim, IntMatrix.from_rows(nonzero, ambient_dim))


def rational_lattice(generators: Sequence[Sequence], ambient_dim: int) -> Lattice:
    """
    Canonical form of the lattice generated by rational vectors.
    """
    vectors = [rational_vector(v) for v in generators]
    if any(len(v) != ambient_dim for v in vectors):
        raise ValueError("Generator length does not match the ambient dimension.")
    scale = lcm(*(x.denominator for v in vectors for x in v)) if vectors and ambient_dim else 1
    integral = lattice_from_generators([[int(x * scale) for x in v] for v in vectors], ambient_dim)

    g = scale
    for r in integral.basis.entries:
        for x in r:
            g = gcd(g, x)
    if g > 1:
        integral = Lattice(ambient_dim, IntMatrix.from_rows(
            [[x // g for x in r] for r in integral.basis.entries], ambient_dim))
        scale //= g
    return Lattice(ambient_dim, integral.basis, scale)


def integer_kernel(a: IntMatrix) -> IntMatrix:
    """
    Rows form a basis of {x in Z^cols : a·x = 0}; the result is a saturated lattice.
    """
    h, u = hnf(a.transpose())
    kernel_rows = [u.row(i) for i in range(h.rows) if not any(h.row(i))]
    return IntMatrix.from_rows(kernel_rows, a.cols)


def saturate(lat: Lattice) -> Lattice:
    """
    Smallest saturated lattice containing lat: its Q-span intersected with Z^n.
    """
    n = lat.ambient_dim
    if lat.rank == 0:
        return Lattice(n, IntMatrix.zero(0, n))
    orthogonal = integer_kernel(lat.basis)
    saturated = integer_kernel(orthogonal) if orthogonal.rows else IntMatrix.identity(n)
    return lattice_from_generators(saturated.entries, n)


# --- Rational linear algebra ---

def _to_sympy(a: Sequence[Sequence], cols: Optional[int] = None) -> Matrix:
    rows = [rational_vector(r) for r in a]
    if not rows:
        return Matrix.zeros(0, cols or 0)
    return Matrix(rows)


def kernel_basis(a: Sequence[Sequence], cols: Optional[int] = None) -> List[RationalVector]:
    """
    Basis of the right kernel of a rational matrix; dimension = cols - rank.
    """
    if not a:
        n = cols or 0
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    return [tuple(to_fraction(x) for x in v) for v in _to_sympy(a).nullspace()]


def rational_rank(a: Sequence[Sequence]) -> int:
    if not a:
        return 0
    return int(_to_sympy(a).rank())


def solve_rational(a: Sequence[Sequence], b: Sequence) -> Optional[RationalVector]:
    """
    Unique solution x of a·x = b for a of full column rank, or None if inconsistent.
    """
    A = _to_sympy(a)
    rhs = Matrix([to_fraction(x) for x in b])
    normal = A.T * A
    if normal.rank() != A.cols:
        raise ValueError("solve_rational needs a matrix of full column rank.")
    x = normal.LUsolve(A.T * rhs)
    if A * x != rhs:
        return None
    return tuple(to_fraction(v) for v in x)


def mat_vec(a: Sequence[Sequence], v: Sequence) -> RationalVector:
    return tuple(sum((to_fraction(x) * to_fraction(y) for x, y in zip(r, v)), Fraction(0)) for r in a)


def rational_inverse(a: Sequence[Sequence]) -> List[RationalVector]:
    A = _to_sympy(a)
    if A.rows != A.cols or A.det() == 0:
        raise ValueError("Matrix is not invertible.")
    inv = A.inv()
    return [tuple(to_fraction(inv[i, j]) for j in range(inv.cols)) for i in range(inv.rows)]


def rational_det(a: Sequence[Sequence]) -> Fraction:
    if not a:
        return Fraction(1)
    return to_fraction(_to_sympy(a).det())
