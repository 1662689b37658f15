from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import List, Sequence, Tuple

from app.exact.linalg import (
    IntMatrix,
    Lattice,
    integer_kernel,
    lattice_from_generators,
    rational_lattice,
    rational_vector,
    saturate,
)


@dataclass(frozen=True)
class Torus:
    """
    The standard torus T = (R/Z)^dim with integral lattice Z^dim.
    """
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"Torus dimension must be at least 1, got {self.dim}.")


@dataclass(frozen=True)
class TorusElement:
    """
    A rational point of (R/Z)^k, coordinates normalized into [0, 1).
    The group law is written additively.
    """
    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(x % 1 for x in rational_vector(self.coords)))

    @classmethod
    def identity(cls, k: int) -> "TorusElement":
        return cls((Fraction(0),) * k)

    @classmethod
    def parse(cls, values: Sequence) -> "TorusElement":
        return cls(rational_vector(values))

    @property
    def torus_dim(self) -> int:
        return len(self.coords)

    def is_identity(self) -> bool:
        return all(x == 0 for x in self.coords)

    def _check(self, other: "TorusElement"):
        if other.torus_dim != self.torus_dim:
            raise ValueError(f"Torus dimension mismatch: {self.torus_dim} vs {other.torus_dim}.")

    def __add__(self, other: "TorusElement") -> "TorusElement":
        self._check(other)
        return TorusElement(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "TorusElement":
        return TorusElement(tuple(-a for a in self.coords))

    def __sub__(self, other: "TorusElement") -> "TorusElement":
        return self + (-other)

    def __rmul__(self, n: int) -> "TorusElement":
        return TorusElement(tuple(n * a for a in self.coords))

    def to_strings(self) -> List[str]:
        return [str(x) for x in self.coords]

    def __str__(self) -> str:
        return "[" + ", ".join(self.to_strings()) + "]"


def exp(v: Sequence, torus: Torus) -> TorusElement:
    """
    Exponential t -> T of a rational Lie algebra vector; kernel is Z^k.
    """
    vec = rational_vector(v)
    if len(vec) != torus.dim:
        raise ValueError(f"Vector of length {len(vec)} does not live in a {torus.dim}-torus.")
    return TorusElement(vec)


def order(t: TorusElement) -> int:
    """
    Smallest n >= 1 with n·t = identity.
    """
    return lcm(*(x.denominator for x in t.coords)) if t.coords else 1


@dataclass(frozen=True)
class Subtorus:
    """
    Subtorus of a standard torus, represented by the saturated lattice
    of its Lie algebra.
    """
    ambient: Torus
    lattice: Lattice

    def __post_init__(self):
        if self.lattice.ambient_dim != self.ambient.dim:
            raise ValueError("Subtorus lattice does not live in the ambient torus.")
        if not self.lattice.is_saturated():
            raise ValueError("Subtorus lattice must be saturated.")

    @classmethod
    def spanned_by(cls, torus: Torus, vectors: Sequence[Sequence[int]]) -> "Subtorus":
        return cls(torus, saturate(lattice_from_generators(vectors, torus.dim)))

    @classmethod
    def trivial(cls, torus: Torus) -> "Subtorus":
        return cls(torus, lattice_from_generators([], torus.dim))

    @classmethod
    def full(cls, torus: Torus) -> "Subtorus":
        return cls(torus, lattice_from_generators(IntMatrix.identity(torus.dim).entries, torus.dim))

    @property
    def dim(self) -> int:
        return self.lattice.rank

    def basis(self) -> List[Tuple[int, ...]]:
        return list(self.lattice.basis.entries)

    def contains_element(self, t: TorusElement) -> bool:
        """
        t lies in the subtorus iff it pairs integrally with every integer
        covector vanishing on the subtorus Lie algebra.
        """
        if t.torus_dim != self.ambient.dim:
            raise ValueError("Element and subtorus live in different tori.")
        if self.dim == 0:
            return t.is_identity()
        annihilator = integer_kernel(self.lattice.basis)
        return all(
            sum(w * x for w, x in zip(row, t.coords)).denominator == 1
            for row in annihilator.entries
        )


def generated_subtorus(torus: Torus, parts: Sequence[Subtorus]) -> Subtorus:
    """
    Smallest subtorus containing every part: the saturated sum of their lattices.
    Products of stabilizer subgroups build T_h this way.
    """
    generators = []
    for part in parts:
        if part.ambient != torus:
            raise ValueError(f"Subtorus of a {part.ambient.dim}-torus given for a {torus.dim}-torus.")
        generators.extend(part.basis())
    return Subtorus.spanned_by(torus, generators)


def element_subgroup_lattice(ts: Sequence[TorusElement], torus_dim: int = None) -> Lattice:
    """
    Canonical lattice in Q^k generated by lifts of the elements together with Z^k.
    Equal lattices <=> equal generated subgroups of T.
    """
    if torus_dim is None:
        if not ts:
            raise ValueError("Torus dimension required for an empty element list.")
        torus_dim = ts[0].torus_dim
    if any(t.torus_dim != torus_dim for t in ts):
        raise ValueError("Elements live in tori of different dimensions.")

    generators = [t.coords for t in ts]
    generators += [tuple(Fraction(int(i == j)) for j in range(torus_dim)) for i in range(torus_dim)]
    return rational_lattice(generators, torus_dim)
