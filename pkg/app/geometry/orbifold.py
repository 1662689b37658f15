from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from app.exact.linalg import AbelianInvariants, IntMatrix, abelian_invariants
from app.exact.torus import Torus, TorusElement, order


@dataclass(frozen=True)
class FuchsianSignature:
    """
    (g; o1, ..., om): genus of the underlying surface and the cone point
    orders in ascending order.
    """
    genus: int
    orders: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(o) for o in self.orders))
        if self.genus < 0:
            raise ValueError(f"Genus must be non-negative, got {self.genus}.")
        if any(o < 2 for o in self.orders):
            raise ValueError(f"Cone point orders must be at least 2, got {list(self.orders)}.")
        if list(self.orders) != sorted(self.orders):
            raise ValueError(f"Cone point orders must be sorted ascending, got {list(self.orders)}.")

    @property
    def cone_points(self) -> int:
        return len(self.orders)

    @property
    def rank(self) -> int:
        """Length 2g + m of a monodromy tuple."""
        return 2 * self.genus + self.cone_points

    def generator_labels(self) -> List[str]:
        labels = []
        for i in range(1, self.genus + 1):
            labels += [f"alpha{i}", f"beta{i}"]
        labels += [f"gamma{k}" for k in range(1, self.cone_points + 1)]
        return labels

    def __str__(self) -> str:
        return f"({self.genus}; {', '.join(map(str, self.orders)) or '-'})"


@dataclass(frozen=True)
class OrbifoldPresentation:
    """
    Presentation of the orbifold fundamental group. relators are words in the
    generator labels; relation_matrix holds the abelianized relations, one row
    sum(gamma_k) = 0 followed by the rows o_k·gamma_k = 0.
    """
    generators: Tuple[str, ...]
    relators: Tuple[str, ...]
    relation_matrix: IntMatrix


@dataclass(frozen=True)
class MonodromyHom:
    """
    Values of the homology monodromy on a symplectic basis (alpha1, beta1, ...)
    and on the small loops gamma_k around the cone points.
    """
    signature: FuchsianSignature
    torus: Torus
    alpha_beta: Tuple[TorusElement, ...]
    gamma: Tuple[TorusElement, ...]

    @property
    def values(self) -> Tuple[TorusElement, ...]:
        return tuple(self.alpha_beta) + tuple(self.gamma)


def relation_matrix(sig: FuchsianSignature) -> IntMatrix:
    g2, m = 2 * sig.genus, sig.cone_points
    rows = [[0] * g2 + [1] * m]
    for k, o in enumerate(sig.orders):
        rows.append([0] * g2 + [o if j == k else 0 for j in range(m)])
    return IntMatrix.from_rows(rows, g2 + m)


def _commutators(genus: int) -> str:
    return "".join(f"[alpha{i},beta{i}]" for i in range(1, genus + 1))


def presentation(sig: FuchsianSignature) -> OrbifoldPresentation:
    """
    pi_1^orb = < alpha_i, beta_i, gamma_k | gamma_1...gamma_m = prod [alpha_i, beta_i], gamma_k^o_k >.
    """
    gammas = [f"gamma{k}" for k in range(1, sig.cone_points + 1)]
    lhs = "*".join(gammas) or "1"
    rhs = _commutators(sig.genus) or "1"
    relators = []
    if lhs != "1" or rhs != "1":
        relators.append(f"{lhs} = {rhs}")
    relators += [f"gamma{k}^{o}" for k, o in enumerate(sig.orders, start=1)]
    return OrbifoldPresentation(
        generators=tuple(sig.generator_labels()),
        relators=tuple(relators),
        relation_matrix=relation_matrix(sig),
    )


def reduced_presentation(sig: FuchsianSignature) -> OrbifoldPresentation:
    """
    For genus 0 the relation gamma_1...gamma_m = 1 eliminates gamma_m; on
    S^2/(Z/2) this leaves < gamma1 | gamma1^2 >. Higher genus is returned as is.
    """
    if sig.genus > 0 or sig.cone_points == 0:
        return presentation(sig)

    kept = [f"gamma{k}" for k in range(1, sig.cone_points)]
    relators: List[str] = []
    for k, o in enumerate(sig.orders[:-1], start=1):
        relators.append(f"gamma{k}^{o}")
    if kept:
        word = "*".join(kept)
        eliminated = f"({word})^{sig.orders[-1]}" if len(kept) > 1 else f"{word}^{sig.orders[-1]}"
        if eliminated not in relators:
            relators.append(eliminated)
    else:
        # (0; o) : gamma1 = 1 and the group is trivial
        relators = []

    n = len(kept)
    rows = [[o if j == k else 0 for j in range(n)] for k, o in enumerate(sig.orders[:-1])]
    if n:
        rows.append([sig.orders[-1]] * n)
    return OrbifoldPresentation(tuple(kept), tuple(relators), IntMatrix.from_rows(rows, n))


def orbifold_homology(sig: FuchsianSignature) -> AbelianInvariants:
    """
    H_1^orb via Smith normal form of the abelianized relations.
    Free rank is always 2g.
    """
    return abelian_invariants(relation_matrix(sig))


def is_bad_signature(sig: FuchsianSignature) -> bool:
    """
    (0; o1) and (0; o1, o2) with o1 < o2 carry no good orbifold structure.
    """
    if sig.genus != 0:
        return False
    if sig.cone_points == 1:
        return True
    return sig.cone_points == 2 and sig.orders[0] < sig.orders[1]


def orbifold_euler(sig: FuchsianSignature) -> Fraction:
    return 2 - 2 * sig.genus - sum((1 - Fraction(1, o) for o in sig.orders), Fraction(0))


def validate_monodromy(h: MonodromyHom) -> List[str]:
    """
    Returns violations; empty means order(h(gamma_k)) | o_k for every k and
    sum_k h(gamma_k) = identity. Values on alpha_i, beta_i are unconstrained.
    """
    violations = []
    sig = h.signature

    if len(h.alpha_beta) != 2 * sig.genus:
        violations.append(f"expected {2 * sig.genus} alpha/beta values, got {len(h.alpha_beta)}")
    if len(h.gamma) != sig.cone_points:
        violations.append(f"expected {sig.cone_points} gamma values, got {len(h.gamma)}")

    for label, t in zip(sig.generator_labels(), h.values):
        if t.torus_dim != h.torus.dim:
            violations.append(f"{label} lives in a {t.torus_dim}-torus, expected {h.torus.dim}")
    if violations:
        return violations

    # the torsion relation o_k·gamma_k = 0 forces order(gamma_k) to divide o_k
    for k, (t, o) in enumerate(zip(h.gamma, sig.orders), start=1):
        if o % order(t):
            violations.append(f"gamma{k}: order {order(t)} does not divide {o}")

    total = TorusElement.identity(h.torus.dim)
    for t in h.gamma:
        total = total + t
    if not total.is_identity():
        violations.append(f"sum of gamma values is {total}, not the identity")

    return violations
