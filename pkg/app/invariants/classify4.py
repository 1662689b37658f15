"""
Four-case classification of effective symplectic 2-torus actions on compact
4-manifolds, read off from an invariant record.
"""
from dataclasses import dataclass
from typing import ClassVar, Dict, List, Tuple, Union
import logging

from app.exact.linalg import RationalVector
from app.exact.torus import TorusElement
from app.geometry.orbifold import FuchsianSignature, MonodromyHom, is_bad_signature
from app.geometry.polytope import Polytope, is_delzant
from app.invariants import coisotropic, symplectic_orbit
from app.invariants.coisotropic import CoisotropicInvariants
from app.invariants.fixtures import s2xt2
from app.invariants.symplectic_orbit import SymplecticOrbitInvariants

logger = logging.getLogger(__name__)


class ClassificationError(ValueError):
    """
    Raised for records that are inconsistent with every case.
    """

    def __init__(self, problems: List[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


# --- Action descriptors ---

@dataclass(frozen=True)
class LagrangianAction:
    invariants: CoisotropicInvariants


@dataclass(frozen=True)
class SymplecticAction:
    invariants: SymplecticOrbitInvariants


ActionDescriptor4 = Union[LagrangianAction, SymplecticAction]


# --- Cases ---

@dataclass(frozen=True)
class Toric:
    tag: ClassVar[str] = "Toric"
    delta: Polytope


@dataclass(frozen=True)
class MixedS2T2:
    tag: ClassVar[str] = "MixedS2T2"
    delta: Polytope
    period_basis: Tuple[RationalVector, ...]


@dataclass(frozen=True)
class FreeLagrangian:
    tag: ClassVar[str] = "FreeLagrangian"
    period_basis: Tuple[RationalVector, ...]
    chern: Dict[Tuple[int, int], RationalVector]
    tau_basis: Tuple[TorusElement, ...]


@dataclass(frozen=True)
class OrbifoldBundle:
    tag: ClassVar[str] = "OrbifoldBundle"
    signature: FuchsianSignature
    monodromy: MonodromyHom


FourCase = Union[Toric, MixedS2T2, FreeLagrangian, OrbifoldBundle]


def _classify_lagrangian(inv: CoisotropicInvariants) -> FourCase:
    if any(x != 0 for row in inv.omega_t for x in row):
        raise ClassificationError(["Lagrangian orbits need omega_t = 0"])
    violations = coisotropic.validate(inv)
    if violations:
        raise ClassificationError(violations)

    dim_h = inv.t_h.dim
    delta = coisotropic.hamiltonian_polytope(inv)
    if dim_h == 2:
        if delta.affine_dim != 2 or not is_delzant(delta):
            raise ClassificationError(["toric case needs a 2-dimensional Delzant polygon"])
        return Toric(delta)
    if dim_h == 1:
        problems = []
        if delta.affine_dim != 1 or len(delta.vertices) != 2:
            problems.append("mixed case needs delta to be an interval")
        if len(inv.period_basis) != 1:
            problems.append("mixed case needs a rank-1 period lattice")
        if problems:
            raise ClassificationError(problems)
        return MixedS2T2(delta, inv.period_basis)
    if len(inv.period_basis) != 2:
        raise ClassificationError(["free Lagrangian case needs a rank-2 period lattice"])
    return FreeLagrangian(inv.period_basis, dict(inv.chern), inv.tau_basis)


def _classify_symplectic(inv: SymplecticOrbitInvariants) -> FourCase:
    problems = symplectic_orbit.validate(inv)
    if is_bad_signature(inv.signature):
        problems.append(f"bad signature {inv.signature}: the orbit space is not a good orbisurface")
    if problems:
        raise ClassificationError(problems)
    return OrbifoldBundle(inv.signature, inv.monodromy)


def classify(d: ActionDescriptor4) -> FourCase:
    """
    Exactly one case per consistent record: symplectic orbits give an
    orbifold bundle; Lagrangian orbits split by dim T_h into toric (2),
    mixed S^2 x T^2 (1) and free (0).
    """
    if d.invariants.torus.dim != 2:
        raise ClassificationError([f"expected a 2-torus, got dimension {d.invariants.torus.dim}"])

    if isinstance(d, LagrangianAction):
        case = _classify_lagrangian(d.invariants)
    elif isinstance(d, SymplecticAction):
        case = _classify_symplectic(d.invariants)
    else:
        raise TypeError(f"Unsupported action descriptor {type(d).__name__}.")

    logger.info("record %r classified as %s", d.invariants.name, case.tag)
    return case


def case_of_mixed_example() -> FourCase:
    return classify(LagrangianAction(s2xt2()))
