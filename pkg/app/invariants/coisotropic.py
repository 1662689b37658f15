"""
Invariants of symplectic torus actions with a coisotropic principal orbit.

A record holds the restriction omega_t of the symplectic form to the orbits,
the Hamiltonian subtorus T_h with its Delzant polytope, the period lattice P
inside N = (l / t_h)*, the Chern form c : N x N -> l and the holonomy
tau : P -> T given on a basis of P. Vectors of N are written in a fixed
basis of N; c and tau are stored on the P-basis eps_1, ..., eps_n.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from app.exact.linalg import (
    RationalVector,
    mat_vec,
    rational_inverse,
    rational_lattice,
    rational_rank,
    solve_rational,
    rational_vector,
    IntMatrix,
)
from app.exact.torus import Subtorus, Torus, TorusElement, exp
from app.geometry.polytope import Polytope, equal_up_to_translation, is_delzant, normalize
from app.invariants.verdict import EquivalenceVerdict

logger = logging.getLogger(__name__)

ChernValues = Dict[Tuple[int, int], RationalVector]


@dataclass(frozen=True)
class CoisotropicInvariants:
    torus: Torus
    omega_t: Tuple[RationalVector, ...]
    t_h: Subtorus
    delta: Polytope
    period_basis: Tuple[RationalVector, ...]
    chern: ChernValues = field(default_factory=dict)
    tau_basis: Tuple[TorusElement, ...] = ()
    name: str = ""

    @property
    def k(self) -> int:
        return self.torus.dim

    @cached_property
    def dim_l(self) -> int:
        return self.k - rational_rank(self.omega_t)

    @property
    def dim_n(self) -> int:
        return self.dim_l - self.t_h.dim

    @cached_property
    def period_inverse(self) -> List[RationalVector]:
        """Inverse of the matrix whose rows are the P-basis vectors."""
        return rational_inverse(self.period_basis) if self.period_basis else []


@dataclass(frozen=True)
class GroupElement:
    """
    Element (t, zeta) of G = T x N.
    """
    t: TorusElement
    zeta: RationalVector

    def __post_init__(self):
        object.__setattr__(self, "zeta", rational_vector(self.zeta))


@dataclass(frozen=True)
class HGenerators:
    """
    Generators of H = {(t, zeta) : zeta in P, t + tau_zeta in T_h}: one lift
    (-tau_eps_i, eps_i) per P-basis vector plus the Lie algebra basis of T_h.
    """
    lattice_generators: Tuple[GroupElement, ...]
    hamiltonian_directions: Tuple[Tuple[int, ...], ...]
    closure_failures: Tuple[str, ...] = ()

    @property
    def closed(self) -> bool:
        return not self.closure_failures


@dataclass(frozen=True)
class ModelDescriptor:
    """
    Data of the model G x_H M_h: a bundle with toric fiber M_h (standing in as
    its polytope) over the nilmanifold G/H.
    """
    total_dim: int
    fiber: Polytope
    fiber_dim: int
    hamiltonian_subtorus: Subtorus
    base_period_basis: Tuple[RationalVector, ...]
    base_chern: ChernValues
    base_dim: int
    free_complement_dim: int
    nilpotency_step: int
    first_betti: Optional[int] = None


# --- Bilinear data ---

def _zero(k: int) -> RationalVector:
    return (Fraction(0),) * k


def chern_basis_value(inv: CoisotropicInvariants, i: int, j: int) -> RationalVector:
    """
    c(eps_i, eps_j), extended antisymmetrically from the stored i < j values.
    """
    if i == j:
        return _zero(inv.k)
    if i < j:
        return rational_vector(inv.chern.get((i, j), _zero(inv.k)))
    return tuple(-x for x in chern_basis_value(inv, j, i))


def _chern_p(inv: CoisotropicInvariants, a: Sequence[Fraction], b: Sequence[Fraction]) -> RationalVector:
    # bilinear extension in P-basis coordinates
    total = list(_zero(inv.k))
    for i, j in product(range(inv.dim_n), repeat=2):
        if a[i] and b[j]:
            value = chern_basis_value(inv, i, j)
            total = [s + a[i] * b[j] * x for s, x in zip(total, value)]
    return tuple(total)


def p_coordinates(inv: CoisotropicInvariants, zeta: Sequence) -> RationalVector:
    """
    Coefficients of zeta in N with respect to the P-basis.
    """
    zeta = rational_vector(zeta)
    if len(zeta) != inv.dim_n:
        raise ValueError(f"Vector of length {len(zeta)} does not live in N of dimension {inv.dim_n}.")
    if inv.dim_n == 0:
        return ()
    inverse = inv.period_inverse
    return tuple(
        sum((zeta[i] * inverse[i][j] for i in range(inv.dim_n)), Fraction(0))
        for j in range(inv.dim_n)
    )


def chern_form(inv: CoisotropicInvariants, x: Sequence, y: Sequence) -> RationalVector:
    """
    c(x, y) in l for x, y in N.
    """
    return _chern_p(inv, p_coordinates(inv, x), p_coordinates(inv, y))


# --- The group G ---

def group_identity(inv: CoisotropicInvariants) -> GroupElement:
    return GroupElement(TorusElement.identity(inv.k), _zero(inv.dim_n))


def _check_element(a: GroupElement, inv: CoisotropicInvariants):
    if a.t.torus_dim != inv.k or len(a.zeta) != inv.dim_n:
        raise ValueError(f"Group element does not match T^{inv.k} x N^{inv.dim_n}.")


def group_mul(a: GroupElement, b: GroupElement, inv: CoisotropicInvariants) -> GroupElement:
    """
    (t, zeta)(t', zeta') = (t t' e^{-c(zeta, zeta')/2}, zeta + zeta').
    """
    _check_element(a, inv)
    _check_element(b, inv)
    twist = chern_form(inv, a.zeta, b.zeta)
    return GroupElement(
        a.t + b.t + exp([-x / 2 for x in twist], inv.torus),
        tuple(x + y for x, y in zip(a.zeta, b.zeta)),
    )


def group_inverse(a: GroupElement, inv: CoisotropicInvariants) -> GroupElement:
    # c(zeta, -zeta) = 0, so the inverse needs no twist
    _check_element(a, inv)
    return GroupElement(-a.t, tuple(-x for x in a.zeta))


# --- Holonomy ---

def extend_tau(inv: CoisotropicInvariants, zeta: Sequence, basis_order: Optional[Sequence[int]] = None) -> TorusElement:
    """
    tau_zeta for zeta in P, built from the basis values one step at a time:
    tau_{zeta+eps} = tau_eps tau_zeta e^{-c(eps, zeta)/2} and
    tau_{zeta-eps} = tau_zeta tau_eps^{-1} e^{c(eps, zeta)/2}.
    Basis directions are processed in basis_order (default: index order).
    """
    coeffs = p_coordinates(inv, zeta)
    if any(x.denominator != 1 for x in coeffs):
        raise ValueError(f"Vector {[str(x) for x in rational_vector(zeta)]} is not in the period lattice.")
    if basis_order is None:
        basis_order = range(inv.dim_n)
    if sorted(basis_order) != list(range(inv.dim_n)):
        raise ValueError("basis_order must be a permutation of the P-basis indices.")

    current = [Fraction(0)] * inv.dim_n
    tau = TorusElement.identity(inv.k)
    for i in basis_order:
        n = int(coeffs[i])
        step = 1 if n > 0 else -1
        unit = [Fraction(int(j == i)) for j in range(inv.dim_n)]
        for _ in range(abs(n)):
            twist = _chern_p(inv, unit, current)
            if step > 0:
                tau = inv.tau_basis[i] + tau + exp([-x / 2 for x in twist], inv.torus)
            else:
                tau = tau - inv.tau_basis[i] + exp([x / 2 for x in twist], inv.torus)
            current[i] += step
    return tau


def hom_c_check(inv: CoisotropicInvariants, zeta: Sequence, zeta2: Sequence) -> bool:
    """
    Checks tau_{zeta'} tau_zeta = tau_{zeta+zeta'} e^{c(zeta', zeta)/2}.
    """
    zeta, zeta2 = rational_vector(zeta), rational_vector(zeta2)
    lhs = extend_tau(inv, zeta2) + extend_tau(inv, zeta)
    total = tuple(x + y for x, y in zip(zeta, zeta2))
    rhs = extend_tau(inv, total) + exp([x / 2 for x in chern_form(inv, zeta2, zeta)], inv.torus)
    return lhs == rhs


# --- Validation ---

def _is_zero(v: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in v)


def hamiltonian_polytope(inv: CoisotropicInvariants) -> Optional[Polytope]:
    """
    Delta in coordinates of the Hermite basis of T_h. A delta written in the
    k coordinates of t must lie in a translate of t_h; None if it does not.
    """
    delta, d = inv.delta, inv.t_h.dim
    if delta.ambient_dim == d:
        return delta
    if delta.ambient_dim != inv.k:
        return None

    base = delta.vertices[0]
    diffs = [tuple(a - b for a, b in zip(v, base)) for v in delta.vertices]
    if d == 0:
        return normalize([()]) if all(not any(x) for x in diffs) else None

    columns = [[row[i] for row in inv.t_h.basis()] for i in range(inv.k)]
    coords = []
    for diff in diffs:
        c = solve_rational(columns, diff)
        if c is None:
            return None
        coords.append(c)
    return normalize(coords)


def validate(inv: CoisotropicInvariants) -> List[str]:
    """
    Returns the list of violated record invariants; empty means valid.
    """
    violations = []
    k = inv.k

    # --- omega_t ---
    omega = inv.omega_t
    if len(omega) != k or any(len(r) != k for r in omega):
        return [f"omega_t must be a {k}x{k} matrix"]
    if any(omega[i][j] != -omega[j][i] for i in range(k) for j in range(k)):
        violations.append("omega_t is not antisymmetric")

    # --- T_h inside l = ker omega_t ---
    if inv.t_h.ambient != inv.torus:
        return violations + ["t_h is not a subtorus of the acting torus"]
    for v in inv.t_h.basis():
        if not _is_zero(mat_vec(omega, v)):
            violations.append(f"t_h direction {list(v)} is not in the kernel of omega_t")

    dim_n = inv.dim_n
    if dim_n < 0:
        return violations

    # --- period lattice ---
    structural = True
    if len(inv.period_basis) != dim_n:
        violations.append(f"period lattice needs {dim_n} basis vectors, got {len(inv.period_basis)}")
        structural = False
    elif any(len(v) != dim_n for v in inv.period_basis):
        violations.append(f"period basis vectors must have length dim N = {dim_n}")
        structural = False
    elif dim_n and rational_rank(inv.period_basis) != dim_n:
        violations.append("period basis vectors are linearly dependent")
        structural = False

    # --- Chern form ---
    for (i, j), value in sorted(inv.chern.items()):
        label = f"c(eps{i + 1}, eps{j + 1})"
        if not (0 <= i < j < max(dim_n, 0)):
            violations.append(f"{label} does not index a pair of P-basis vectors")
            structural = False
            continue
        if len(value) != k:
            violations.append(f"{label} must have length {k}")
            structural = False
            continue
        if not _is_zero(mat_vec(omega, value)):
            violations.append(f"{label} is not in the kernel of omega_t")
        if any(x.denominator != 1 for x in rational_vector(value)):
            violations.append(f"{label} = {[str(x) for x in value]} is not integral")

    # --- holonomy ---
    if len(inv.tau_basis) != dim_n:
        violations.append(f"tau needs {dim_n} basis values, got {len(inv.tau_basis)}")
        structural = False
    elif any(t.torus_dim != k for t in inv.tau_basis):
        violations.append(f"tau values must lie in the {k}-torus")
        structural = False

    # --- Delzant polytope ---
    delta = hamiltonian_polytope(inv)
    if inv.delta.ambient_dim not in (inv.t_h.dim, k):
        violations.append(f"delta lives in dimension {inv.delta.ambient_dim}, expected {inv.t_h.dim}")
    elif delta is None:
        violations.append("delta spans directions outside t_h")
    else:
        if delta.affine_dim != inv.t_h.dim:
            violations.append(f"delta has dimension {delta.affine_dim} but t_h has dimension {inv.t_h.dim}")
        certificate = is_delzant(delta)
        if not certificate:
            violations.append(f"delta is not Delzant at vertex "
                              f"{[str(x) for x in certificate.failing_vertex]}: {certificate.reason}")

    # --- twisted homomorphism condition on basis pairs ---
    if structural:
        for i, j in product(range(dim_n), repeat=2):
            if not hom_c_check(inv, inv.period_basis[i], inv.period_basis[j]):
                violations.append(f"tau fails the Hom_c condition on (eps{i + 1}, eps{j + 1})")

    return violations


# --- H and the model ---

def in_H(inv: CoisotropicInvariants, element: GroupElement) -> bool:
    coeffs = p_coordinates(inv, element.zeta)
    if any(x.denominator != 1 for x in coeffs):
        return False
    return inv.t_h.contains_element(element.t + extend_tau(inv, element.zeta))


def build_H(inv: CoisotropicInvariants) -> HGenerators:
    """
    Generators of H with a closure check on all products g_i g_j and g_i g_j^{-1}.
    A closure failure signals a non-integral Chern form.
    """
    generators = tuple(
        GroupElement(-inv.tau_basis[i], inv.period_basis[i]) for i in range(inv.dim_n)
    )

    failures = []
    for (i, a), (j, b) in product(enumerate(generators), repeat=2):
        for label, other in ((f"g{j + 1}", b), (f"g{j + 1}^-1", group_inverse(b, inv))):
            if not in_H(inv, group_mul(a, other, inv)):
                failures.append(f"g{i + 1}*{label} leaves H")
    if failures:
        logger.warning("H fails to close: %s", "; ".join(failures))

    return HGenerators(
        lattice_generators=generators,
        hamiltonian_directions=tuple(inv.t_h.basis()),
        closure_failures=tuple(failures),
    )


def nilmanifold_relations(inv: CoisotropicInvariants) -> IntMatrix:
    """
    Abelianized relations of pi_1(G/H) for trivial T_h, generators a_1..a_k
    (torus loops) then x_1..x_n (lifts of the P-basis): each commutator
    [x_i, x_j] equals the torus loop c(eps_i, eps_j), all other pairs commute.
    """
    k, n = inv.k, inv.dim_n
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            value = chern_basis_value(inv, i, j)
            if any(x.denominator != 1 for x in value):
                raise ValueError("Fundamental group relations need an integral Chern form.")
            rows.append([int(x) for x in value] + [0] * n)
    return IntMatrix.from_rows(rows, k + n)


def nilmanifold_b1(inv: CoisotropicInvariants) -> int:
    """
    First Betti number of G/H when T_h is trivial:
    dim T + dim N - rank of the lattice spanned by the Chern values.
    """
    if inv.t_h.dim != 0:
        raise ValueError("nilmanifold_b1 needs a trivial Hamiltonian subtorus.")
    values = [chern_basis_value(inv, i, j) for i in range(inv.dim_n) for j in range(i + 1, inv.dim_n)]
    return inv.k + inv.dim_n - rational_rank(values)


def model_descriptor(inv: CoisotropicInvariants) -> ModelDescriptor:
    dim_n = inv.dim_n
    free_dim = inv.k - inv.t_h.dim
    twisted = any(not _is_zero(chern_basis_value(inv, i, j))
                  for i in range(dim_n) for j in range(i + 1, dim_n))
    return ModelDescriptor(
        total_dim=inv.k + inv.dim_l,
        fiber=hamiltonian_polytope(inv) or inv.delta,
        fiber_dim=2 * inv.t_h.dim,
        hamiltonian_subtorus=inv.t_h,
        base_period_basis=inv.period_basis,
        base_chern=dict(inv.chern),
        base_dim=free_dim + dim_n,
        free_complement_dim=free_dim,
        nilpotency_step=2 if twisted else 1,
        first_betti=nilmanifold_b1(inv) if inv.t_h.dim == 0 else None,
    )


def sigma_eval(
    inv: CoisotropicInvariants,
    zeta: Sequence,
    u: Tuple[Sequence, Sequence],
    v: Tuple[Sequence, Sequence],
) -> Fraction:
    """
    The two-form sigma on G at (t, zeta) for tangent vectors u = (dt, dzeta),
    v = (d't, d'zeta), in the free Lagrangian-orbit case l = t, T_h trivial:
    sigma = omega_t(dt, d't) + dzeta(X') - d'zeta(X), X = dt + c(dzeta, zeta)/2.
    """
    if inv.t_h.dim != 0 or inv.dim_l != inv.k:
        raise ValueError("sigma_eval supports only l = t with a trivial Hamiltonian subtorus.")

    zeta = rational_vector(zeta)
    dt, dz = rational_vector(u[0]), rational_vector(u[1])
    dt2, dz2 = rational_vector(v[0]), rational_vector(v[1])

    def lift(t_part, z_part):
        return tuple(a + b / 2 for a, b in zip(t_part, chern_form(inv, z_part, zeta)))

    x, x2 = lift(dt, dz), lift(dt2, dz2)
    omega_term = sum((a * b for a, b in zip(dt, mat_vec(inv.omega_t, dt2))), Fraction(0))
    pairing = sum((a * b for a, b in zip(dz, x2)), Fraction(0))
    pairing2 = sum((a * b for a, b in zip(dz2, x)), Fraction(0))
    return omega_term + pairing - pairing2


def compare(inv1: CoisotropicInvariants, inv2: CoisotropicInvariants) -> EquivalenceVerdict:
    """
    On-the-nose comparison of the four invariants for a fixed torus.
    Records agreeing everywhere except on tau are Undetermined, since the
    exp(A) quotient of the holonomy classes is not computed.
    """
    if inv1.k != inv2.k:
        return EquivalenceVerdict.inequivalent("torus", f"dimensions {inv1.k} and {inv2.k}")
    if tuple(map(rational_vector, inv1.omega_t)) != tuple(map(rational_vector, inv2.omega_t)):
        return EquivalenceVerdict.inequivalent("omega_t")
    if inv1.t_h.lattice != inv2.t_h.lattice:
        return EquivalenceVerdict.inequivalent("t_h")
    delta1, delta2 = hamiltonian_polytope(inv1), hamiltonian_polytope(inv2)
    if (delta1 is None or delta2 is None or delta1.ambient_dim != delta2.ambient_dim
            or not equal_up_to_translation(delta1, delta2)):
        return EquivalenceVerdict.inequivalent("delta")

    dim_n = inv1.dim_n
    if rational_lattice(inv1.period_basis, dim_n) != rational_lattice(inv2.period_basis, dim_n):
        return EquivalenceVerdict.inequivalent("period_lattice")

    units = [tuple(Fraction(int(i == j)) for j in range(dim_n)) for i in range(dim_n)]
    for a, b in product(units, repeat=2):
        if chern_form(inv1, a, b) != chern_form(inv2, a, b):
            return EquivalenceVerdict.inequivalent("chern")

    for zeta in inv1.period_basis:
        if extend_tau(inv1, zeta) != extend_tau(inv2, zeta):
            return EquivalenceVerdict.undetermined(
                "holonomy maps differ; their classes modulo exp(A) are not compared"
            )

    return EquivalenceVerdict.equivalent()
