from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple
import logging

from app.exact.linalg import (
    IntMatrix,
    RationalVector,
    kernel_basis,
    mat_vec,
    primitive_vector,
    rational_rank,
    rational_vector,
    snf,
    solve_rational,
)

logger = logging.getLogger(__name__)

MAX_AMBIENT_DIM = 3


@dataclass(frozen=True)
class Polytope:
    """
    Convex hull of finitely many rational points in Q^n, n <= 3.
    Vertices are the extreme points, sorted lexicographically.
    Use normalize() to build one from raw points.
    """
    ambient_dim: int
    vertices: Tuple[RationalVector, ...]

    @property
    def affine_dim(self) -> int:
        base = self.vertices[0]
        return rational_rank([_sub(v, base) for v in self.vertices[1:]])

    def transformed(self, matrix: IntMatrix, shift: Sequence) -> "Polytope":
        """
        Image under x -> matrix·x + shift.
        """
        shift = rational_vector(shift)
        points = [tuple(a + b for a, b in zip(mat_vec(matrix.entries, v), shift)) for v in self.vertices]
        return normalize(points)

    def to_strings(self) -> List[List[str]]:
        return [[str(x) for x in v] for v in self.vertices]


@dataclass(frozen=True)
class VertexEdgeData:
    vertex: RationalVector
    edge_dirs: Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True)
class DelzantCertificate:
    """
    Outcome of the Delzant test. On failure names the vertex and the reason;
    det is the lattice index of the edge directions at that vertex
    (|det| of the edge matrix for full-dimensional polytopes).
    """
    is_delzant: bool
    failing_vertex: Optional[RationalVector] = None
    reason: Optional[str] = None
    det: Optional[int] = None

    def __bool__(self) -> bool:
        return self.is_delzant


def _sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> RationalVector:
    return tuple(x - y for x, y in zip(a, b))


def _dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _in_hull_of_simplex(p: RationalVector, simplex: Sequence[RationalVector]) -> bool:
    """
    Barycentric test of p against an affinely independent point set.
    """
    base = simplex[0]
    if len(simplex) == 1:
        return p == base
    columns = [_sub(s, base) for s in simplex[1:]]
    a = [[c[i] for c in columns] for i in range(len(p))]
    mu = solve_rational(a, _sub(p, base))
    if mu is None:
        return False
    return all(m >= 0 for m in mu) and sum(mu) <= 1


def _in_hull(p: RationalVector, points: Sequence[RationalVector], dim: int) -> bool:
    # Caratheodory: p in conv(points) iff p lies in some affinely independent (dim+1)-subset
    for size in range(1, min(dim + 1, len(points)) + 1):
        for subset in combinations(points, size):
            diffs = [_sub(s, subset[0]) for s in subset[1:]]
            if diffs and rational_rank(diffs) != len(diffs):
                continue
            if _in_hull_of_simplex(p, subset):
                return True
    return False


def normalize(raw_points: Sequence[Sequence]) -> Polytope:
    """
    Polytope whose vertices are the extreme points of the given points.
    """
    points = sorted({rational_vector(p) for p in raw_points})
    if not points:
        raise ValueError("A polytope needs at least one point.")
    n = len(points[0])
    if any(len(p) != n for p in points):
        raise ValueError("Points have different dimensions.")
    if n > MAX_AMBIENT_DIM:
        raise ValueError(f"Ambient dimension {n} exceeds the supported maximum of {MAX_AMBIENT_DIM}.")

    dim = rational_rank([_sub(p, points[0]) for p in points[1:]])
    vertices = [
        p for p in points
        if not _in_hull(p, [q for q in points if q != p], dim)
    ]
    return Polytope(n, tuple(vertices))


# --- Faces ---

def _span_coordinates(p: Polytope) -> List[RationalVector]:
    """
    Vertex coordinates in a basis of the affine hull's direction space.
    """
    base = p.vertices[0]
    diffs = [_sub(v, base) for v in p.vertices[1:]]
    basis: List[RationalVector] = []
    for d in diffs:
        if rational_rank(basis + [d]) > len(basis):
            basis.append(d)
    if not basis:
        return [()] * len(p.vertices)

    a = [[b[i] for b in basis] for i in range(p.ambient_dim)]
    coords = []
    for v in p.vertices:
        y = solve_rational(a, _sub(v, base))
        if y is None:
            raise ValueError("Lattice-preserving projection onto the affine hull failed.")
        coords.append(y)
    return coords


def facets(p: Polytope) -> List[FrozenSet[int]]:
    """
    Vertex-index sets of the facets, found by testing every hyperplane
    through affinely independent vertex subsets of the affine hull.
    """
    coords = _span_coordinates(p)
    d = len(coords[0])
    if d == 0:
        return []

    found: Dict[FrozenSet[int], None] = {}
    for subset in combinations(range(len(coords)), d):
        diffs = [_sub(coords[i], coords[subset[0]]) for i in subset[1:]]
        if diffs and rational_rank(diffs) != d - 1:
            continue
        normal = kernel_basis(diffs, cols=d)
        if len(normal) != 1:
            continue
        a = normal[0]
        b = _dot(a, coords[subset[0]])
        sides = [_dot(a, y) - b for y in coords]
        if all(s >= 0 for s in sides) or all(s <= 0 for s in sides):
            found[frozenset(i for i, s in enumerate(sides) if s == 0)] = None
    return list(found)


def edges(p: Polytope) -> List[Tuple[int, int]]:
    """
    Vertex index pairs spanning edges: the smallest face containing both
    vertices (intersection of the facets through them) is exactly the pair.
    """
    all_vertices = frozenset(range(len(p.vertices)))
    facet_sets = facets(p)
    result = []
    for i, j in combinations(range(len(p.vertices)), 2):
        face = all_vertices
        for f in facet_sets:
            if i in f and j in f:
                face = face & f
        if face == {i, j}:
            result.append((i, j))
    return result


def vertex_edge_data(p: Polytope) -> List[VertexEdgeData]:
    """
    Primitive integer directions of the edges leaving each vertex.
    """
    neighbours: Dict[int, List[int]] = {i: [] for i in range(len(p.vertices))}
    for i, j in edges(p):
        neighbours[i].append(j)
        neighbours[j].append(i)

    data = []
    for i, v in enumerate(p.vertices):
        dirs = sorted(primitive_vector(_sub(p.vertices[j], v)) for j in neighbours[i])
        data.append(VertexEdgeData(vertex=v, edge_dirs=tuple(dirs)))
    return data


# --- Delzant predicate ---

def is_delzant(p: Polytope) -> DelzantCertificate:
    """
    Simple, rational and smooth: at every vertex exactly dim edges meet and
    their primitive directions form a Z-basis of the lattice of the affine hull.
    """
    d = p.affine_dim
    if d == 0:
        return DelzantCertificate(True)

    for data in vertex_edge_data(p):
        if len(data.edge_dirs) != d:
            return DelzantCertificate(
                False, data.vertex,
                f"not simple: {len(data.edge_dirs)} edges meet, expected {d}",
            )

        # rational vertices always give rational edges; the primitive
        # directions are integral by construction
        if rational_rank(data.edge_dirs) != d:
            return DelzantCertificate(False, data.vertex, "edge directions are linearly dependent")

        directions = IntMatrix.from_rows(data.edge_dirs, p.ambient_dim)
        index = 1
        for x in snf(directions):
            index *= x
        # index 1 means the directions span a saturated sublattice of Z^n
        if index != 1:
            logger.debug("vertex %s fails smoothness with index %d", data.vertex, index)
            return DelzantCertificate(False, data.vertex, "not smooth: edge directions are not a lattice basis", index)

    return DelzantCertificate(True)


def equal_up_to_translation(p: Polytope, q: Polytope) -> bool:
    """
    True iff q = p + v for a rational vector v. Momentum polytopes are only
    defined up to translation; no change of lattice basis is allowed.
    """
    if p.ambient_dim != q.ambient_dim:
        raise ValueError("Polytopes live in different ambient dimensions.")
    if len(p.vertices) != len(q.vertices):
        return False
    shift = _sub(q.vertices[0], p.vertices[0])
    return all(_sub(b, a) == shift for a, b in zip(p.vertices, q.vertices))


def simplex(n: int, scale=1) -> Polytope:
    """
    scale·conv{0, e1, ..., en}, the momentum polytope of CP^n.
    """
    scale = Fraction(scale)
    points = [(Fraction(0),) * n]
    points += [tuple(scale * int(i == j) for j in range(n)) for i in range(n)]
    return normalize(points)


def interval(lo, hi) -> Polytope:
    return normalize([(Fraction(lo),), (Fraction(hi),)])
