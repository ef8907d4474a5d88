"""Geometric realizations, exact curvature and rigid motions.

Curvature is exact: every angle is an :class:`AnglePi`, a rational multiple of
pi backed by :class:`fractions.Fraction`. Coordinates are float64 numpy arrays
compared with the tolerance ``geometry.eps_coord`` from
:class:`rpsurf.settings.Settings`.

Example:
    Curvature of a dodecahedron::

        from rpsurf.generators import make_solid, SolidKind
        from rpsurf.geometry import gauss_bonnet_check, vertex_curvature

        S, R = make_solid(SolidKind.DODECAHEDRON)
        assert str(vertex_curvature(S, 0)) == "1/5 π"
        assert gauss_bonnet_check(S).equal
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import (
    DegenerateCorrespondence,
    DegenerateNormal,
    DegreeTooSmall,
    GeometryError,
    NoIsometry,
    SurfaceError,
    UnsupportedDegree,
)
from .settings import eps_coord, key_quantum
from .surface_core import SurfaceGraph, ValidationReport, euler_characteristic
from .utils import point_key, polygon_key

logger = logging.getLogger(__name__)


##################################################################################
# Exact angles
##################################################################################


@total_ordering
class AnglePi:
    """Exact rational multiple of pi, stored in lowest terms.

    Example:
        >>> str(AnglePi(3, 5) + AnglePi(2, 5))
        '1 π'
        >>> AnglePi(1, 2) * 3
        AnglePi(3, 2)
    """

    __slots__ = ("_value",)

    def __init__(self, numerator: int | Fraction = 0, denominator: int = 1):
        self._value = Fraction(numerator) / denominator

    @classmethod
    def _of(cls, value) -> "AnglePi":
        if isinstance(value, AnglePi):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        return NotImplemented

    @property
    def fraction(self) -> Fraction:
        """Coefficient of pi."""
        return self._value

    @property
    def numerator(self) -> int:
        return self._value.numerator

    @property
    def denominator(self) -> int:
        return self._value.denominator

    @property
    def radians(self) -> float:
        return float(self._value) * math.pi

    def sign(self) -> int:
        return (self._value > 0) - (self._value < 0)

    def __add__(self, other):
        other = AnglePi._of(other)
        if other is NotImplemented:
            return other
        return AnglePi(self._value + other._value)

    __radd__ = __add__

    def __sub__(self, other):
        other = AnglePi._of(other)
        if other is NotImplemented:
            return other
        return AnglePi(self._value - other._value)

    def __rsub__(self, other):
        other = AnglePi._of(other)
        if other is NotImplemented:
            return other
        return AnglePi(other._value - self._value)

    def __neg__(self):
        return AnglePi(-self._value)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return AnglePi(self._value * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return AnglePi(self._value / other)
        return NotImplemented

    def __eq__(self, other):
        other = AnglePi._of(other)
        if other is NotImplemented:
            return False
        return self._value == other._value

    def __lt__(self, other):
        other = AnglePi._of(other)
        if other is NotImplemented:
            return other
        return self._value < other._value

    def __hash__(self):
        return hash(("AnglePi", self._value))

    def __float__(self):
        return self.radians

    def __repr__(self):
        return f"AnglePi({self.numerator}, {self.denominator})"

    def __str__(self):
        if self._value == 0:
            return "0"
        if self.denominator == 1:
            return f"{self.numerator} π"
        return f"{self.numerator}/{self.denominator} π"

    def describe(self) -> str:
        """Exact form plus the decimal value in radians to 6 places."""
        return f"{self} ({self.radians:.6f})"


def interior_angle(k: int) -> AnglePi:
    """Interior angle of a regular k-gon, ``(k-2)/k`` pi."""
    if k < 3:
        raise DegreeTooSmall(f"a regular polygon needs at least 3 sides, got {k}")
    return AnglePi(k - 2, k)


##################################################################################
# Vertex types and curvature
##################################################################################


@total_ordering
class VertexType:
    """Multiset of face degrees around a vertex, e.g. ``(5^2,8)``."""

    __slots__ = ("degrees",)

    def __init__(self, degrees: Iterable[int]):
        self.degrees = tuple(sorted(degrees))

    @property
    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for d in self.degrees:
            out[d] = out.get(d, 0) + 1
        return out

    @property
    def vertex_degree(self) -> int:
        return len(self.degrees)

    def curvature(self) -> AnglePi:
        return AnglePi(2) - sum((interior_angle(k) for k in self.degrees), AnglePi(0))

    def __eq__(self, other):
        return isinstance(other, VertexType) and self.degrees == other.degrees

    def __lt__(self, other):
        return self.degrees < other.degrees

    def __hash__(self):
        return hash(self.degrees)

    def __repr__(self):
        return f"VertexType({self.degrees})"

    def __str__(self):
        parts = [f"{k}^{m}" if m > 1 else f"{k}" for k, m in self.multiplicities.items()]
        return "(" + ",".join(parts) + ")"


def vertex_type(S: SurfaceGraph, v: int) -> VertexType:
    return VertexType(S.face_degree(f) for f in S.vertex_faces(v))


def is_realizable_vertex_type(vt: VertexType) -> bool:
    """Whether regular polygons of these degrees can meet at a degree-3 vertex.

    The angle sum may not exceed 2 pi and each angle may not exceed the sum of
    the other two. Vertices of higher degree are flexible and always pass.
    """
    if vt.vertex_degree != 3:
        return True
    angles = [interior_angle(k).fraction for k in vt.degrees]
    if sum(angles) > 2:
        return False
    return all(a <= sum(angles) - a for a in angles)


def vertex_curvature(S: SurfaceGraph, v: int) -> AnglePi:
    """``2 pi`` minus the interior angles of the faces around ``v``."""
    return vertex_type(S, v).curvature()


def facial_curvature(S: SurfaceGraph, f: int) -> AnglePi:
    """Sum of ``k_v / d_v`` over the vertices of ``f``."""
    total = AnglePi(0)
    for v in S.faces[f]:
        total = total + vertex_curvature(S, v) / S.vertex_degree(v)
    return total


def pentagon_facial_curvature(degrees: Sequence[int]) -> AnglePi:
    """Closed form for a pentagon in an all-pentagon surface: ``-3 pi + pi sum 2/d_i``."""
    if len(degrees) != 5:
        raise GeometryError(f"a pentagon has five vertex degrees, got {len(degrees)}")
    return AnglePi(-3) + AnglePi(sum(Fraction(2, d) for d in degrees))


class GaussBonnet(NamedTuple):
    total: AnglePi
    target: AnglePi
    equal: bool


def gauss_bonnet_check(S: SurfaceGraph) -> GaussBonnet:
    """Compare the total vertex curvature with ``2 pi chi`` exactly."""
    total = sum((vertex_curvature(S, v) for v in range(S.n_vertices)), AnglePi(0))
    target = AnglePi(2 * euler_characteristic(S))
    return GaussBonnet(total, target, total == target)


##################################################################################
# Realizations and rigid motions
##################################################################################


class Realization:
    """Read-only vertex coordinates, one row per vertex."""

    __slots__ = ("_coords",)

    def __init__(self, coords):
        arr = np.array(coords, dtype=float).reshape(-1, 3)
        arr.setflags(write=False)
        self._coords = arr

    @property
    def coords(self) -> np.ndarray:
        return self._coords

    def __len__(self) -> int:
        return len(self._coords)

    def __getitem__(self, v) -> np.ndarray:
        return self._coords[v]

    def points(self, vertices: Iterable[int]) -> np.ndarray:
        return self._coords[list(vertices)]

    def transformed(self, motion: "RigidMotion") -> "Realization":
        return Realization(motion.apply(self._coords))

    def __repr__(self) -> str:
        return f"Realization(n={len(self)})"


@dataclass(frozen=True)
class RigidMotion:
    """``x -> rotation @ x + translation`` with an orthogonal ``rotation``."""

    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        rot = np.array(self.rotation, dtype=float).reshape(3, 3)
        tr = np.array(self.translation, dtype=float).reshape(3)
        if not np.allclose(rot.T @ rot, np.eye(3), atol=max(eps_coord(), 1e-9) * 10):
            raise GeometryError("rotation matrix is not orthogonal")
        rot.setflags(write=False)
        tr.setflags(write=False)
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "translation", tr)

    @classmethod
    def identity(cls) -> "RigidMotion":
        return cls(np.eye(3), np.zeros(3))

    @classmethod
    def from_row(cls, numbers: Sequence[float]) -> "RigidMotion":
        """From 12 numbers: row-major rotation then translation."""
        if len(numbers) != 12:
            raise GeometryError(f"a placement needs 12 numbers, got {len(numbers)}")
        return cls(np.array(numbers[:9], dtype=float).reshape(3, 3), np.array(numbers[9:], dtype=float))

    def as_row(self) -> list[float]:
        return [float(x) for x in self.rotation.reshape(9)] + [float(x) for x in self.translation]

    @property
    def determinant(self) -> float:
        return float(np.linalg.det(self.rotation))

    @property
    def is_proper(self) -> bool:
        return self.determinant > 0

    def apply(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return pts @ self.rotation.T + self.translation

    def compose(self, other: "RigidMotion") -> "RigidMotion":
        """``self`` after ``other``."""
        return RigidMotion(self.rotation @ other.rotation, self.rotation @ other.translation + self.translation)

    def inverse(self) -> "RigidMotion":
        return RigidMotion(self.rotation.T, -self.rotation.T @ self.translation)


def face_normal(points: np.ndarray) -> np.ndarray:
    """Unnormalized Newell normal of a polygon."""
    pts = np.asarray(points, dtype=float)
    nxt = np.roll(pts, -1, axis=0)
    return np.array(
        [
            np.sum((pts[:, 1] - nxt[:, 1]) * (pts[:, 2] + nxt[:, 2])),
            np.sum((pts[:, 2] - nxt[:, 2]) * (pts[:, 0] + nxt[:, 0])),
            np.sum((pts[:, 0] - nxt[:, 0]) * (pts[:, 1] + nxt[:, 1])),
        ]
    )


def unit_normal(points: np.ndarray, eps: float | None = None) -> np.ndarray:
    n = face_normal(points)
    norm = np.linalg.norm(n)
    if norm <= eps_coord(eps):
        raise DegenerateNormal("polygon has no well-defined normal")
    return n / norm


def face_center(points: np.ndarray) -> np.ndarray:
    return np.asarray(points, dtype=float).mean(axis=0)


def circumradius(k: int) -> float:
    return 1.0 / (2.0 * math.sin(math.pi / k))


def inradius(k: int) -> float:
    return 1.0 / (2.0 * math.tan(math.pi / k))


def regular_polygon_defect(points: np.ndarray) -> float:
    """Largest deviation of a vertex loop from a unit regular polygon."""
    pts = np.asarray(points, dtype=float)
    k = len(pts)
    sides = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
    center = pts.mean(axis=0)
    radii = np.linalg.norm(pts - center, axis=1)
    _, s, vt = np.linalg.svd(pts - center)
    planarity = np.abs((pts - center) @ vt[2]).max()
    return float(max(np.abs(sides - 1).max(), np.abs(radii - circumradius(k)).max(), planarity))


def faces_overlap(P: np.ndarray, Q: np.ndarray, eps: float | None = None) -> bool:
    """Whether two coplanar convex polygons share interior points.

    Polygons in different planes, or touching only along their boundary,
    do not overlap. Uses separating axes taken from the in-plane edge normals.
    """
    eps = eps_coord(eps)
    P, Q = np.asarray(P, dtype=float), np.asarray(Q, dtype=float)
    n = unit_normal(P, eps)
    if abs(abs(float(np.dot(n, unit_normal(Q, eps)))) - 1.0) > eps or abs(float(np.dot(Q[0] - P[0], n))) > eps:
        return False
    for X in (P, Q):
        for i in range(len(X)):
            axis = np.cross(X[(i + 1) % len(X)] - X[i], n)
            a, b = P @ axis, Q @ axis
            if min(a.max(), b.max()) - max(a.min(), b.min()) <= eps:
                return False
    return True


##################################################################################
# Dihedral angles
##################################################################################


def _shared_halfedge(S: SurfaceGraph, f: int, g: int) -> int:
    for h in S.face_halfedges(f):
        if S.he_face[S.he_twin[h]] == g:
            return h
    raise SurfaceError(f"faces {f} and {g} do not share an edge")


def dihedral_angle(S: SurfaceGraph, R: Realization, f: int, g: int, eps: float | None = None) -> float:
    """Angle in degrees between faces ``f`` and ``g`` measured through the solid side.

    Orientation is outward, so a convex corner gives less than 180, a flat
    edge 180 and a reflex edge more than 180.

    Raises:
        DegenerateNormal: A face has no well-defined normal.
    """
    h = _shared_halfedge(S, f, g)
    a, b = R[S.he_origin[h]], R[S.he_dest(h)]
    d = b - a
    d = d / np.linalg.norm(d)
    n_f = unit_normal(R.points(S.faces[f]), eps)
    n_g = unit_normal(R.points(S.faces[g]), eps)
    p_f = np.cross(n_f, d)
    p_g = np.cross(n_g, -d)
    angle = -math.degrees(math.atan2(float(np.dot(d, np.cross(p_f, p_g))), float(np.dot(p_f, p_g))))
    return angle % 360.0


def dihedral_table(n: int) -> tuple[float, float]:
    """Dihedral angles at a degree-3 vertex of type ``(5^2, n)``.

    Returns:
        (angle between the two pentagons, angle between a pentagon and the n-gon),
        in degrees, from the spherical law of cosines on the vertex figure.
    """
    if n not in (5, 7, 8, 9, 10):
        raise UnsupportedDegree(f"dihedral table covers n in 5, 7, 8, 9, 10; got {n}")
    alpha = math.radians(108.0)
    gamma = math.radians((n - 2) * 180.0 / n)
    cos_55 = (math.cos(gamma) - math.cos(alpha) ** 2) / math.sin(alpha) ** 2
    cos_5n = math.cos(alpha) * (1 - math.cos(gamma)) / (math.sin(alpha) * math.sin(gamma))
    angle_55 = math.degrees(math.acos(max(-1.0, min(1.0, cos_55))))
    angle_5n = math.degrees(math.acos(max(-1.0, min(1.0, cos_5n))))
    return angle_55, angle_5n


##################################################################################
# Fitting
##################################################################################


def isometry_from_correspondence(
    A, B, eps: float | None = None, allow_reflection: bool = True
) -> RigidMotion:
    """Rigid motion M with ``M(A[i]) = B[i]`` for all i (Kabsch).

    A proper rotation is returned when one fits; otherwise a reflection when
    ``allow_reflection``.

    Raises:
        DegenerateCorrespondence: Fewer than 3 points or A is collinear.
        NoIsometry: No motion fits within ``eps``.
    """
    eps = eps_coord(eps)
    A = np.asarray(A, dtype=float).reshape(-1, 3)
    B = np.asarray(B, dtype=float).reshape(-1, 3)
    if len(A) != len(B):
        raise NoIsometry(f"point lists differ in length ({len(A)} vs {len(B)})")
    if len(A) < 3:
        raise DegenerateCorrespondence("need at least three point pairs")
    ca, cb = A.mean(axis=0), B.mean(axis=0)
    A0, B0 = A - ca, B - cb
    if np.linalg.svd(A0, compute_uv=False)[1] < eps:
        raise DegenerateCorrespondence("source points are collinear")
    U, _, Vt = np.linalg.svd(A0.T @ B0)
    d = 1.0 if np.linalg.det(Vt.T @ U.T) >= 0 else -1.0
    signs = [d, -d] if allow_reflection else [d]
    residuals = []
    for s in signs:
        rot = Vt.T @ np.diag([1.0, 1.0, s]) @ U.T
        residual = float(np.linalg.norm(A0 @ rot.T - B0, axis=1).max())
        if residual <= eps:
            return RigidMotion(rot, cb - rot @ ca)
        residuals.append(residual)
    raise NoIsometry(f"no isometry fits the correspondence (residual {min(residuals):.3g})")


##################################################################################
# Validation
##################################################################################


def validate_realization(S: SurfaceGraph, R: Realization, eps: float | None = None) -> ValidationReport:
    """Check the realization axioms face by face and pair by pair.

    Reports non-unit edges, non-regular faces, dangling pairs (edge-adjacent
    faces with the same image vertex set), folded edge-adjacent faces
    (coplanar on the same side), faces sharing a vertex whose distinct
    vertices land on the same point, and coplanar faces sharing a vertex whose
    images overlap. Transversal crossings are allowed; realizations need not
    be embeddings.
    """
    eps = eps_coord(eps)
    report = ValidationReport()
    if len(R) < S.n_vertices:
        report.add("missing-vertex", range(len(R), S.n_vertices), "realization does not cover every vertex")
        return report
    q = key_quantum()

    for e in range(S.n_edges):
        u, v = S.edge_vertices(e)
        length = float(np.linalg.norm(R[u] - R[v]))
        if abs(length - 1.0) > eps:
            report.add("non-unit-edge", (e,), f"length {length:.9g}")

    for f, face in enumerate(S.faces):
        defect = regular_polygon_defect(R.points(face))
        if defect > eps:
            report.add("non-regular-face", (f,), f"defect {defect:.3g}")

    keys = [polygon_key(R.points(face), q) for face in S.faces]
    dangling: set[tuple[int, int]] = set()
    folded: set[tuple[int, int]] = set()
    for e in range(S.n_edges):
        f, g = sorted(S.edge_faces(e))
        if (f, g) in dangling:
            continue
        if keys[f] == keys[g]:
            dangling.add((f, g))
            report.add("dangling-pair", (f, g), "faces have identical images")
            continue
        try:
            angle = dihedral_angle(S, R, f, g, eps)
        except DegenerateNormal:
            continue
        if min(angle, 360.0 - angle) < 1e-4:
            folded.add((f, g))
            report.add("folded-pair", (f, g), "adjacent faces overlap beyond their shared edge")

    seen: set[tuple[int, int]] = set()
    for v in range(S.n_vertices):
        around = sorted(set(S.vertex_faces(v)))
        for i, f in enumerate(around):
            for g in around[i + 1:]:
                if (f, g) in seen or (f, g) in dangling or (f, g) in folded:
                    continue
                seen.add((f, g))
                fk = {u: point_key(R[u], q) for u in S.faces[f]}
                gk = {w: point_key(R[w], q) for w in S.faces[g]}
                clash = [(u, w) for u, ku in fk.items() for w, kw in gk.items() if u != w and ku == kw]
                if clash:
                    report.add("coincident-vertices", (f, g), f"distinct vertices {clash[0]} share a point")
                    continue
                try:
                    overlap = faces_overlap(R.points(S.faces[f]), R.points(S.faces[g]), eps)
                except DegenerateNormal:
                    continue
                if overlap:
                    report.add("overlapping-faces", (f, g), f"faces meet at vertex {v} and overlap in their plane")
    return report
