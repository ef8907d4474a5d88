"""Canonical solids, facet gluing, brick unions and named surfaces.

Solids are generated from their vertex coordinates: unit-length neighbours
give the edges and every supporting plane spanned by a vertex and two of its
neighbours gives a face, ordered counter-clockwise seen from outside.

Example:
    Building a 2x1x1 box and a compound::

        from rpsurf.generators import SolidKind, make_solid, glue, CompoundBuilder

        cube, R = make_solid(SolidKind.CUBE)
        box, box_R = glue(cube, R, 0, cube, R, 0)
        assert box.n_faces == 10

        builder = CompoundBuilder(SolidKind.OCTAGONAL_PRISM)
        builder.add(SolidKind.CUBE, face=builder.faces_of_degree(4)[0])
        S, R = builder.surface
"""

import itertools
import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AmbiguousFit,
    CollisionDetected,
    DegreeMismatch,
    GeneratorError,
    InvalidPairing,
    NoIsometry,
    RingDoesNotClose,
    SurfaceError,
)
from .geometry import (
    Realization,
    RigidMotion,
    face_center,
    isometry_from_correspondence,
    unit_normal,
)
from .labels import Labels
from .settings import Settings, eps_coord, key_quantum
from .surface_core import SurfaceGraph, build_surface, euler_characteristic, genus, orient_faces
from .utils import point_key, polygon_key, same_cyclic_order

logger = logging.getLogger(__name__)

PHI = (1 + math.sqrt(5)) / 2
SQRT2 = math.sqrt(2)


class SolidKind(str, Enum):
    """Canonical convex solids with unit edges."""

    CUBE = "cube"
    DODECAHEDRON = "dodecahedron"
    OCTAGONAL_PRISM = "octagonal-prism"
    HEXAGONAL_PRISM = "hexagonal-prism"
    TRUNCATED_OCTAHEDRON = "truncated-octahedron"
    TRUNCATED_CUBOCTAHEDRON = "truncated-cuboctahedron"

    def __str__(self) -> str:
        return self.value


BRICK_KINDS = (SolidKind.DODECAHEDRON, SolidKind.CUBE, SolidKind.OCTAGONAL_PRISM)


def _polygon_ring(k: int, circumradius: float, phase: float) -> list[tuple[float, float]]:
    return [
        (circumradius * math.cos(phase + 2 * math.pi * i / k), circumradius * math.sin(phase + 2 * math.pi * i / k))
        for i in range(k)
    ]


def _solid_points(kind: SolidKind) -> np.ndarray:
    if kind == SolidKind.CUBE:
        return np.array(list(itertools.product((0.0, 1.0), repeat=3)))
    if kind == SolidKind.DODECAHEDRON:
        pts = [p for p in itertools.product((-1.0, 1.0), repeat=3)]
        for a, b in itertools.product((-1.0, 1.0), repeat=2):
            pts += [(0.0, a / PHI, b * PHI), (a / PHI, b * PHI, 0.0), (a * PHI, 0.0, b / PHI)]
        return np.array(pts) * (PHI / 2)
    if kind in (SolidKind.OCTAGONAL_PRISM, SolidKind.HEXAGONAL_PRISM):
        k = 8 if kind == SolidKind.OCTAGONAL_PRISM else 6
        phase = math.pi / k if k == 8 else 0.0
        ring = _polygon_ring(k, 1 / (2 * math.sin(math.pi / k)), phase)
        return np.array([(x, y, z) for z in (-0.5, 0.5) for x, y in ring])
    if kind == SolidKind.TRUNCATED_OCTAHEDRON:
        pts = set()
        for perm in itertools.permutations((0.0, 1.0, 2.0)):
            for signs in itertools.product((-1.0, 1.0), repeat=3):
                pts.add(tuple(s * c for s, c in zip(signs, perm)))
        return np.array(sorted(pts)) / SQRT2
    if kind == SolidKind.TRUNCATED_CUBOCTAHEDRON:
        pts = set()
        for perm in itertools.permutations((1.0, 1 + SQRT2, 1 + 2 * SQRT2)):
            for signs in itertools.product((-1.0, 1.0), repeat=3):
                pts.add(tuple(s * c for s, c in zip(signs, perm)))
        return np.array(sorted(pts)) / 2
    raise GeneratorError(f"unknown solid kind {kind!r}")


def convex_faces(points: np.ndarray, tol: float = 1e-7) -> list[tuple[int, ...]]:
    """Faces of a convex unit-edge polyhedron, counter-clockwise seen from outside."""
    pts = np.asarray(points, dtype=float)
    centroid = pts.mean(axis=0)
    dist = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    neighbors = [np.flatnonzero(np.abs(dist[v] - 1.0) < 1e-6) for v in range(len(pts))]
    found: dict[frozenset, tuple[int, ...]] = {}
    for v, nbrs in enumerate(neighbors):
        for a, b in itertools.combinations(nbrs, 2):
            n = np.cross(pts[a] - pts[v], pts[b] - pts[v])
            if np.linalg.norm(n) < tol:
                continue
            n = n / np.linalg.norm(n)
            if np.dot(n, pts[v] - centroid) < 0:
                n = -n
            offsets = (pts - pts[v]) @ n
            if offsets.max() > tol:
                continue
            members = frozenset(np.flatnonzero(np.abs(offsets) < tol).tolist())
            if members in found:
                continue
            idx = sorted(members)
            center = pts[idx].mean(axis=0)
            u = pts[idx[0]] - center
            u = u / np.linalg.norm(u)
            w = np.cross(n, u)
            order = sorted(idx, key=lambda i: math.atan2(np.dot(pts[i] - center, w), np.dot(pts[i] - center, u)))
            start = order.index(min(order))
            found[members] = tuple(order[start:] + order[:start])
    return sorted(found.values())


@lru_cache(maxsize=None)
def _canonical(kind: SolidKind) -> tuple[tuple[tuple[int, ...], ...], np.ndarray]:
    pts = _solid_points(SolidKind(kind))
    faces = tuple(convex_faces(pts))
    pts.setflags(write=False)
    return faces, pts


def make_solid(kind: SolidKind | str) -> tuple[SurfaceGraph, Realization]:
    """Canonical unit-edge solid.

    The cube occupies {0,1}^3; the other solids are centred at the origin
    with prism axes along z.
    """
    faces, pts = _canonical(SolidKind(kind))
    return build_surface(faces, len(pts)), Realization(pts)


##################################################################################
# Bricks
##################################################################################


@dataclass(frozen=True)
class Brick:
    """A canonical solid placed by a rigid motion."""

    kind: SolidKind
    placement: RigidMotion

    def __post_init__(self):
        kind = SolidKind(self.kind)
        if kind not in BRICK_KINDS:
            raise GeneratorError(f"{kind} is not a brick kind")
        object.__setattr__(self, "kind", kind)

    @property
    def canonical_faces(self) -> tuple[tuple[int, ...], ...]:
        return _canonical(self.kind)[0]

    def vertices(self) -> np.ndarray:
        return self.placement.apply(_canonical(self.kind)[1])

    def facets(self) -> list[np.ndarray]:
        """Placed facet polygons, outward counter-clockwise."""
        verts = self.vertices()
        return [verts[list(face)] for face in self.canonical_faces]

    def center(self) -> np.ndarray:
        return self.vertices().mean(axis=0)


def place_brick(kind: SolidKind | str, face_points: np.ndarray, eps: float | None = None) -> list[RigidMotion]:
    """Placements of a brick lying behind a realized face.

    The brick's facet coincides with the face with the same outward
    orientation, so the brick sits on the face's inner side. Placements that
    give the same solid are returned once.
    """
    kind = SolidKind(kind)
    faces, pts = _canonical(kind)
    target = np.asarray(face_points, dtype=float)
    k = len(target)
    n_target = unit_normal(target)
    c0 = pts.mean(axis=0)
    out: list[RigidMotion] = []
    seen: set[frozenset] = set()
    q = key_quantum()
    for face in faces:
        if len(face) != k:
            continue
        src = pts[list(face)]
        n_src = unit_normal(src)
        depth = float(np.dot(face_center(src) - c0, n_src))
        for s in range(k):
            rolled = np.roll(target, -s, axis=0)
            A = np.vstack([src, c0])
            B = np.vstack([rolled, face_center(target) - depth * n_target])
            try:
                motion = isometry_from_correspondence(A, B, eps, allow_reflection=False)
            except NoIsometry:
                continue
            key = polygon_key(motion.apply(pts), q)
            if key not in seen:
                seen.add(key)
                out.append(motion)
    return out


@dataclass
class FacetCancellation:
    """Result of cancelling coincident facets over a set of bricks."""

    survivors: list[tuple[int, int, np.ndarray]]
    gluings: list[tuple[int, int, int, int]]
    problems: list[str]


def cancel_facets(bricks: Sequence[Brick]) -> FacetCancellation:
    """Cancel coincident facet pairs of opposite orientation.

    Same-orientation coincidences and facets covered more than twice are
    reported as problems and kept out of the survivors.
    """
    q = key_quantum()
    groups: dict[frozenset, list[tuple[int, int, np.ndarray]]] = {}
    for b, brick in enumerate(bricks):
        for i, pts in enumerate(brick.facets()):
            groups.setdefault(polygon_key(pts, q), []).append((b, i, pts))
    survivors, gluings, problems = [], [], []
    for members in groups.values():
        if len(members) == 1:
            survivors.append(members[0])
        elif len(members) == 2:
            (b1, i1, p1), (b2, i2, p2) = members
            k1 = [point_key(p, q) for p in p1]
            k2 = [point_key(p, q) for p in p2[::-1]]
            if same_cyclic_order(k1, k2):
                gluings.append((b1, i1, b2, i2))
            else:
                problems.append(f"bricks {b1} and {b2} share facet {i1}/{i2} with equal orientation")
        else:
            problems.append(f"facet covered {len(members)} times by bricks {[m[0] for m in members]}")
    survivors.sort(key=lambda item: (item[0], item[1]))
    gluings.sort()
    return FacetCancellation(survivors, gluings, problems)


def polygons_to_surface(polygons: Iterable[np.ndarray]) -> tuple[SurfaceGraph, Realization]:
    """Merge coincident vertices of oriented polygons and build the surface."""
    q = key_quantum()
    index: dict[tuple, int] = {}
    coords: list[np.ndarray] = []
    faces = []
    for pts in polygons:
        face = []
        for p in pts:
            key = point_key(p, q)
            if key not in index:
                index[key] = len(coords)
                coords.append(np.asarray(p, dtype=float))
            face.append(index[key])
        faces.append(tuple(face))
    return build_surface(faces, len(coords)), Realization(coords)


def brick_union(bricks: Sequence[Brick]) -> tuple[SurfaceGraph, Realization]:
    """Boundary surface of a union of bricks glued along common facets."""
    result = cancel_facets(bricks)
    if result.problems:
        raise GeneratorError("; ".join(result.problems))
    return polygons_to_surface(pts for _, _, pts in result.survivors)


def polycube(cells: Iterable[Sequence[int]]) -> tuple[SurfaceGraph, Realization]:
    """Union of unit cubes at integer cell positions."""
    bricks = [Brick(SolidKind.CUBE, RigidMotion(np.eye(3), np.array(c, dtype=float))) for c in cells]
    return brick_union(bricks)


##################################################################################
# Gluing
##################################################################################


def _bbox(pts: np.ndarray, pad: float) -> tuple[np.ndarray, np.ndarray]:
    return pts.min(axis=0) - pad, pts.max(axis=0) + pad


def _inside_convex(p: np.ndarray, poly: np.ndarray, normal: np.ndarray, margin: float) -> bool:
    for i in range(len(poly)):
        a, b = poly[i], poly[(i + 1) % len(poly)]
        if np.dot(np.cross(b - a, p - a), normal) <= margin:
            return False
    return True


def _segment_hits_polygon(a: np.ndarray, b: np.ndarray, poly: np.ndarray, eps: float) -> bool:
    n = unit_normal(poly)
    c = poly[0]
    da, db = np.dot(a - c, n), np.dot(b - c, n)
    if da > eps and db > eps or da < -eps and db < -eps:
        return False
    if abs(da) <= eps and abs(db) <= eps:
        return False
    if abs(da) <= eps or abs(db) <= eps:
        touch = a if abs(da) <= eps else b
        return _inside_convex(touch, poly, n, eps)
    p = a + (b - a) * (da / (da - db))
    return _inside_convex(p, poly, n, eps)


def polygons_collide(P: np.ndarray, Q: np.ndarray, eps: float) -> bool:
    """Whether two convex polygons meet beyond shared boundary points."""
    lo1, hi1 = _bbox(P, eps)
    lo2, hi2 = _bbox(Q, eps)
    if np.any(hi1 < lo2) or np.any(hi2 < lo1):
        return False
    for X, Y in ((P, Q), (Q, P)):
        for i in range(len(X)):
            if _segment_hits_polygon(X[i], X[(i + 1) % len(X)], Y, eps):
                return True
    nP, nQ = unit_normal(P), unit_normal(Q)
    if abs(abs(np.dot(nP, nQ)) - 1) < eps and abs(np.dot(Q[0] - P[0], nP)) < eps:
        if _inside_convex(P.mean(axis=0), Q, nQ, eps) or _inside_convex(Q.mean(axis=0), P, nP, eps):
            return True
    return False


def _glue_core(P, RP, f_p, Q, RQ, f_q, shift, check_collisions, eps):
    """Glue for one cyclic alignment; returns (S, R, motion)."""
    p_loop = P.faces[f_p]
    q_loop = Q.faces[f_q]
    k = len(p_loop)
    targets = [p_loop[(shift - j) % k] for j in range(k)]
    motion = isometry_from_correspondence(RQ.points(q_loop), RP.points(targets), eps, allow_reflection=False)
    moved = motion.apply(RQ.coords)

    n_p = P.n_vertices
    on_face = set(q_loop)
    free = [v for v in range(Q.n_vertices) if v not in on_face]
    remap = {q: p for q, p in zip(q_loop, targets)}
    remap.update({v: n_p + i for i, v in enumerate(free)})

    if check_collisions:
        q = key_quantum()
        p_keys = {point_key(RP[v], q) for v in range(n_p)}
        for v in free:
            if point_key(moved[v], q) in p_keys:
                raise CollisionDetected(f"vertex {v} of the new part lands on an existing vertex")
        p_polys = [RP.points(face) for g, face in enumerate(P.faces) if g != f_p]
        for g, face in enumerate(Q.faces):
            if g == f_q:
                continue
            poly = moved[list(face)]
            for other in p_polys:
                if polygons_collide(poly, other, eps):
                    raise CollisionDetected(f"face {g} of the new part intersects an existing face")

    faces = [face for g, face in enumerate(P.faces) if g != f_p]
    faces += [tuple(remap[v] for v in face) for g, face in enumerate(Q.faces) if g != f_q]
    coords = np.vstack([RP.coords, moved[free]]) if free else np.array(RP.coords)
    return build_surface(faces, n_p + len(free)), Realization(coords), motion


def glue(
    P: SurfaceGraph,
    RP: Realization,
    f_p: int,
    Q: SurfaceGraph,
    RQ: Realization,
    f_q: int,
    shift: int | None = 0,
    check_collisions: bool = True,
    eps: float | None = None,
) -> tuple[SurfaceGraph, Realization]:
    """Glue ``Q`` onto ``P`` along faces ``f_p`` and ``f_q``.

    ``Q`` is moved so that vertex j of ``f_q`` lands on vertex
    ``(shift - j) mod k`` of ``f_p``; both faces are removed and their
    boundaries identified. The output keeps ``P``'s faces (without ``f_p``)
    first, then ``Q``'s. With ``shift=None`` every alignment is tried and the
    single collision-free one is used.

    Raises:
        DegreeMismatch: The faces have different degrees.
        CollisionDetected: The moved part intersects ``P``.
        AmbiguousFit: Several alignments are collision-free (``shift=None``).
    """
    return _glue(P, RP, f_p, Q, RQ, f_q, shift, check_collisions, eps)[:2]


def _glue(P, RP, f_p, Q, RQ, f_q, shift, check_collisions, eps):
    eps = eps_coord(eps)
    k = P.face_degree(f_p)
    if Q.face_degree(f_q) != k:
        raise DegreeMismatch(f"cannot glue a degree-{Q.face_degree(f_q)} face onto a degree-{k} face")
    if shift is not None:
        return _glue_core(P, RP, f_p, Q, RQ, f_q, shift % k, check_collisions, eps)
    fits = []
    for s in range(k):
        try:
            fits.append((s, _glue_core(P, RP, f_p, Q, RQ, f_q, s, check_collisions, eps)))
        except (CollisionDetected, SurfaceError) as e:
            logger.debug("Alignment %d rejected: %s", s, e)
    if not fits:
        raise CollisionDetected("every alignment collides")
    if len(fits) > 1:
        raise AmbiguousFit(f"{len(fits)} alignments fit: {[s for s, _ in fits]}; pass an explicit shift")
    return fits[0][1]


class CompoundBuilder:
    """Facet-glued tree of bricks that remembers every placed brick.

    Args:
        kind: Kind of the first brick, placed canonically.

    Example:
        ::

            builder = CompoundBuilder(SolidKind.DODECAHEDRON)
            builder.add(SolidKind.DODECAHEDRON, face=0)
            S, R = builder.surface         # 22 faces
            builder.bricks                  # two placed dodecahedra
    """

    def __init__(self, kind: SolidKind | str):
        kind = SolidKind(kind)
        self._S, self._R = make_solid(kind)
        self._bricks = [Brick(kind, RigidMotion.identity())]
        self._owner = [0] * self._S.n_faces

    @property
    def surface(self) -> tuple[SurfaceGraph, Realization]:
        return self._S, self._R

    @property
    def bricks(self) -> list[Brick]:
        return list(self._bricks)

    def face_owner(self, f: int) -> int:
        """Index of the brick whose facet face ``f`` is."""
        return self._owner[f]

    def faces_of_degree(self, k: int) -> list[int]:
        return [f for f in range(self._S.n_faces) if self._S.face_degree(f) == k]

    def add(
        self,
        kind: SolidKind | str,
        face: int,
        brick_face: int | None = None,
        shift: int = 0,
        check_collisions: bool = True,
    ) -> int:
        """Glue a new brick onto surface face ``face``; returns the brick index."""
        kind = SolidKind(kind)
        Q, RQ = make_solid(kind)
        k = self._S.face_degree(face)
        if brick_face is None:
            matching = [g for g in range(Q.n_faces) if Q.face_degree(g) == k]
            if not matching:
                raise DegreeMismatch(f"{kind} has no face of degree {k}")
            brick_face = matching[0]
        S, R, motion = _glue(self._S, self._R, face, Q, RQ, brick_face, shift, check_collisions, None)
        index = len(self._bricks)
        self._owner = [o for g, o in enumerate(self._owner) if g != face] + [index] * (Q.n_faces - 1)
        self._S, self._R = S, R
        self._bricks.append(Brick(kind, motion))
        logger.debug("Added %s as brick %d on face %d", kind, index, face)
        return index


def random_compound(
    kinds: Sequence[SolidKind | str],
    seed: int | None = None,
    max_attempts: int = 200,
) -> CompoundBuilder:
    """Random collision-free tree compound with one brick per entry of ``kinds``."""
    rng = np.random.default_rng(seed)
    builder = CompoundBuilder(kinds[0])
    for kind in kinds[1:]:
        kind = SolidKind(kind)
        faces, _ = _canonical(kind)
        degrees = {len(face) for face in faces}
        for _ in range(max_attempts):
            S, _ = builder.surface
            candidates = [f for f in range(S.n_faces) if S.face_degree(f) in degrees]
            if not candidates:
                raise GeneratorError(f"no face to attach a {kind} to")
            face = int(rng.choice(candidates))
            k = S.face_degree(face)
            brick_faces = [g for g, c in enumerate(faces) if len(c) == k]
            try:
                builder.add(kind, face, int(rng.choice(brick_faces)), int(rng.integers(k)))
                break
            except (CollisionDetected, SurfaceError) as e:
                logger.debug("Attachment rejected: %s", e)
        else:
            raise GeneratorError(f"could not attach a {kind} after {max_attempts} attempts")
    return builder


##################################################################################
# Named surfaces
##################################################################################


def box() -> tuple[SurfaceGraph, Realization]:
    """2x1x1 box, two cubes glued along a face."""
    return polycube([(0, 0, 0), (1, 0, 0)])


def slab() -> tuple[SurfaceGraph, Realization]:
    """2x2x1 slab of four cubes."""
    return polycube([(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)])


def great_dodecahedron() -> tuple[SurfaceGraph, Realization]:
    """Genus-4 surface of twelve pentagons, one per icosahedron vertex.

    Each face is the pentagon spanned by the neighbours of a vertex; the
    realization self-intersects.
    """
    pts = []
    for a, b in itertools.product((-1.0, 1.0), repeat=2):
        pts += [(0.0, a, b * PHI), (a, b * PHI, 0.0), (b * PHI, 0.0, a)]
    pts = np.array(pts) / 2
    dist = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    faces = []
    for v in range(len(pts)):
        nbrs = np.flatnonzero(np.abs(dist[v] - 1.0) < 1e-6).tolist()
        axis = pts[v] / np.linalg.norm(pts[v])
        center = pts[nbrs].mean(axis=0)
        u = pts[nbrs[0]] - center
        w = np.cross(axis, u)
        faces.append(
            tuple(sorted(nbrs, key=lambda i: math.atan2(np.dot(pts[i] - center, w), np.dot(pts[i] - center, u))))
        )
    return build_surface(orient_faces(faces), len(pts)), Realization(pts)


class _BudgetExhausted(Exception):
    pass


def _face_reflections() -> list[RigidMotion]:
    faces, pts = _canonical(SolidKind.DODECAHEDRON)
    out = []
    for face in faces:
        n = unit_normal(pts[list(face)])
        offset = float(np.dot(pts[face[0]], n))
        out.append(RigidMotion(np.eye(3) - 2 * np.outer(n, n), 2 * offset * n))
    return out


def dodecahedral_ring(n: int, budget: int | None = None) -> list[Brick]:
    """Search a closed ring of ``n`` dodecahedra glued face to face.

    Rings are words of face reflections starting from the canonical
    dodecahedron. The search is depth-first, never undoes the previous step,
    keeps non-consecutive centres at least one face-to-face distance apart
    and stops after ``budget`` nodes. Lengths listed in
    ``generators.torus_known_lengths`` (8 and 10) get
    ``generators.torus_search_budget``; any other length is only tried with
    ``generators.torus_trial_budget`` nodes.

    Raises:
        RingDoesNotClose: No ring was found within the budget.
    """
    settings = Settings()
    max_n = int(settings.get(Labels.TORUS_MAX_N, default=12))
    if n < 3 or n > max_n:
        raise RingDoesNotClose(f"ring length must be between 3 and {max_n}, got {n}")
    if budget is None:
        known = [int(k) for k in settings.get(Labels.TORUS_KNOWN_LENGTHS, default=[8, 10])]
        if n in known:
            budget = int(settings.get(Labels.TORUS_SEARCH_BUDGET, default=200000))
        else:
            budget = int(settings.get(Labels.TORUS_TRIAL_BUDGET, default=20000))
            logger.info("Ring length %d is not known to close; trying %d nodes", n, budget)
    eps = eps_coord()
    q = key_quantum()
    _, pts = _canonical(SolidKind.DODECAHEDRON)
    reflections = _face_reflections()
    step = float(np.linalg.norm(reflections[0].translation))
    home = polygon_key(pts, q)
    visited = 0

    def closes(motion: RigidMotion) -> bool:
        return np.linalg.norm(motion.translation) < eps and polygon_key(motion.apply(pts), q) == home

    def search(word: list[int], motions: list[RigidMotion], centers: list[np.ndarray]) -> list[RigidMotion] | None:
        nonlocal visited
        visited += 1
        if visited > budget:
            raise _BudgetExhausted
        k = len(word)
        for i in range(len(reflections)):
            if word and i == word[-1] or k == 0 and i != 0:
                continue
            motion = motions[-1].compose(reflections[i])
            c = motion.translation
            if k + 1 == n:
                if closes(motion):
                    return motions
                continue
            if np.linalg.norm(c) > (n - k - 1) * step + eps:
                continue
            if any(np.linalg.norm(c - other) < step - eps for other in centers[:-1]):
                continue
            found = search(word + [i], motions + [motion], centers + [c])
            if found is not None:
                return found
        return None

    try:
        motions = search([], [RigidMotion.identity()], [np.zeros(3)])
    except _BudgetExhausted:
        motions = None
        logger.info("Ring search for n=%d stopped after %d nodes", n, budget)
    if motions is None:
        raise RingDoesNotClose(f"no closed ring of {n} dodecahedra found ({min(visited, budget)} nodes searched)")
    # the canonical dodecahedron is centrally symmetric, so -I turns a reflected placement proper
    flip = RigidMotion(-np.eye(3), np.zeros(3))
    return [Brick(SolidKind.DODECAHEDRON, m if m.is_proper else m.compose(flip)) for m in motions]


def dodecahedral_torus(n: int, budget: int | None = None) -> tuple[SurfaceGraph, Realization]:
    """Genus-1 ring of ``n`` face-glued dodecahedra.

    Raises:
        RingDoesNotClose: No embedded ring of this length was found.
    """
    bricks = dodecahedral_ring(n, budget)
    try:
        S, R = brick_union(bricks)
    except (GeneratorError, SurfaceError) as e:
        raise RingDoesNotClose(f"ring of {n} dodecahedra closes but does not bound a surface: {e}")
    if genus(S) != 1:
        raise RingDoesNotClose(f"ring of {n} dodecahedra bounds a genus-{genus(S)} surface")
    return S, R


##################################################################################
# High-genus counterexamples
##################################################################################


@dataclass(frozen=True)
class CounterexampleKind:
    """Node solid, hypercube dimension, the degree of the faces joined by tubes
    and, per hypercube axis, the length of the tube between facing holes."""

    solid: SolidKind
    dimension: int
    hole_degree: int
    gaps: tuple[int, ...]


COUNTEREXAMPLES = {
    "to4": CounterexampleKind(SolidKind.TRUNCATED_OCTAHEDRON, 4, 6, (3, 3, 3, 7)),
    "tco4": CounterexampleKind(SolidKind.TRUNCATED_CUBOCTAHEDRON, 4, 6, (3, 3, 3, 9)),
    "tco3": CounterexampleKind(SolidKind.TRUNCATED_CUBOCTAHEDRON, 3, 8, (3, 3, 3)),
}

# hole direction per hypercube axis; each node uses the face along +d and -d
_HOLE_DIRECTIONS = {
    3: [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
    4: [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)],
}

Pairing = list[tuple[int, int, int, int]]


def _counterexample_kind(kind: str) -> CounterexampleKind:
    try:
        return COUNTEREXAMPLES[str(kind).lower()]
    except KeyError:
        raise GeneratorError(f"unknown counterexample {kind!r}; choose from {sorted(COUNTEREXAMPLES)}")


def _hypercube_nodes(dimension: int) -> list[tuple[int, ...]]:
    return list(itertools.product((-1, 1), repeat=dimension))


def _node_offsets(layout: CounterexampleKind) -> np.ndarray:
    """Node centres; neighbours along axis d sit on the line of that axis' holes.

    Facing holes of neighbours along axis d are ``gaps[d]`` apart.
    """
    faces, pts = _canonical(layout.solid)
    steps = []
    for d, direction in enumerate(_HOLE_DIRECTIONS[layout.dimension]):
        u = np.asarray(direction, dtype=float) / np.linalg.norm(direction)
        plus = _face_along(layout.solid, direction, layout.hole_degree)
        depth = float(np.dot(face_center(pts[list(faces[plus])]), u))
        steps.append((layout.gaps[d] / 2 + depth) * u)
    nodes = np.array(_hypercube_nodes(layout.dimension), dtype=float)
    return nodes @ np.array(steps)


def _face_along(solid: SolidKind, direction: Sequence[float], degree: int) -> int:
    faces, pts = _canonical(solid)
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    for f, face in enumerate(faces):
        if len(face) == degree and np.dot(unit_normal(pts[list(face)]), d) > 1 - 1e-9:
            return f
    raise GeneratorError(f"{solid} has no degree-{degree} face along {tuple(direction)}")


def default_pairing(kind: str) -> Pairing:
    """Two tubes per hypercube edge, one per opposite face pair along that edge's axis.

    Entries are ``(node_a, face_a, node_b, face_b)`` with faces indexed in
    the canonical solid. The first tube joins the facing holes; the second
    leaves the outer hole of one node and runs back through both nodes to the
    outer hole of the other.
    """
    layout = _counterexample_kind(kind)
    nodes = _hypercube_nodes(layout.dimension)
    index = {node: i for i, node in enumerate(nodes)}
    pairing: Pairing = []
    for d, direction in enumerate(_HOLE_DIRECTIONS[layout.dimension]):
        plus = _face_along(layout.solid, direction, layout.hole_degree)
        minus = _face_along(layout.solid, [-x for x in direction], layout.hole_degree)
        for node in nodes:
            if node[d] != -1:
                continue
            other = index[node[:d] + (1,) + node[d + 1:]]
            pairing.append((index[node], plus, other, minus))
            pairing.append((index[node], minus, other, plus))
    return pairing


def _check_pairing(layout: CounterexampleKind, pairing: Pairing) -> None:
    faces, _ = _canonical(layout.solid)
    n_nodes = 2 ** layout.dimension
    holes = {(i, f) for i in range(n_nodes) for f, face in enumerate(faces) if len(face) == layout.hole_degree}
    used: set[tuple[int, int]] = set()
    for entry in pairing:
        if len(entry) != 4:
            raise InvalidPairing(f"pairing entry {entry} needs four numbers")
        for hole in ((entry[0], entry[1]), (entry[2], entry[3])):
            if hole not in holes:
                raise InvalidPairing(f"{hole} is not a degree-{layout.hole_degree} face of a node")
            if hole in used:
                raise InvalidPairing(f"{hole} is used by more than one tube")
            used.add(hole)
    missing = sorted(holes - used)
    if missing:
        raise InvalidPairing(f"{len(missing)} hole(s) left unmatched, first {missing[0]}")


def _tube_rings(coords: list[np.ndarray], a: list[int], b: list[int], eps: float) -> tuple[list[list[int]], bool]:
    """Vertex rings of a tube from hole ``a`` to hole ``b``, and whether every ring is one unit apart.

    When ``b`` is ``a`` translated along its normal the tube is a right
    prism cut into unit rings, with one shorter ring last if the length is
    not whole. Otherwise the holes are joined directly by one ring of quads.
    """
    k = len(a)
    A = np.array([coords[v] for v in a])
    B = np.array([coords[v] for v in b])
    shift = face_center(B) - face_center(A)
    length = float(np.linalg.norm(shift))
    straight = length > eps and np.linalg.norm(np.cross(shift, unit_normal(A))) <= eps
    for c in range(k):
        opposite = [b[(c - t) % k] for t in range(k)]
        if straight and np.allclose(B[[(c - t) % k for t in range(k)]], A + shift, atol=eps):
            break
    else:
        c = min(range(k), key=lambda c: sum(np.linalg.norm(A[t] - B[(c - t) % k]) for t in range(k)))
        return [a, [b[(c - t) % k] for t in range(k)]], False
    whole = round(length)
    unit = abs(length - whole) <= eps
    inner = whole - 1 if unit else int(math.floor(length))
    direction = shift / length
    rings = [a]
    for j in range(1, inner + 1):
        ring = []
        for t in range(k):
            ring.append(len(coords))
            coords.append(A[t] + j * direction)
        rings.append(ring)
    rings.append(opposite)
    return rings, unit


def counterexample(kind: str, pairing: Pairing | None = None) -> tuple[SurfaceGraph, Realization]:
    """Hypercube of truncated solids joined by prism tubes.

    ``to4`` and ``tco4`` put a solid at each of the 16 vertices of a 4-cube
    and join hexagonal holes; ``tco3`` uses the 8 vertices of a 3-cube and
    octagonal holes. Each tube is a prism without its caps. Holes on a
    common axis are joined by a straight right prism of unit squares; the
    tube running back through its nodes ends in one ring of shorter
    rectangles, since the two tubes of an edge differ in length by four
    times the depth of a hole. Custom pairings of holes on different axes
    get a single ring of quads. The two tubes of an edge share their axis,
    so the realization self-intersects.

    Raises:
        InvalidPairing: Holes are unmatched or reused, or the surface does
            not close with the expected Euler characteristic.
    """
    layout = _counterexample_kind(kind)
    pairing = default_pairing(kind) if pairing is None else [tuple(int(x) for x in entry) for entry in pairing]
    _check_pairing(layout, pairing)
    eps = eps_coord()

    faces, pts = _canonical(layout.solid)
    nv = len(pts)
    offsets = _node_offsets(layout)
    coords = [p for offset in offsets for p in pts + offset]
    k = layout.hole_degree

    out_faces = [
        tuple(i * nv + v for v in face)
        for i in range(len(offsets))
        for face in faces
        if len(face) != k
    ]
    short = 0
    for node_a, face_a, node_b, face_b in pairing:
        a = [node_a * nv + v for v in faces[face_a]]
        b = [node_b * nv + v for v in faces[face_b]]
        rings, unit = _tube_rings(coords, a, b, eps)
        short += not unit
        for lo, hi in zip(rings, rings[1:]):
            out_faces.extend((lo[t], lo[(t + 1) % k], hi[(t + 1) % k], hi[t]) for t in range(k))

    try:
        S = build_surface(out_faces, len(coords))
    except SurfaceError as e:
        raise InvalidPairing(f"tubes do not close the surface: {e}")
    removed = sum(1 for face in faces if len(face) == k)
    expected = len(offsets) * (2 - removed)
    chi = euler_characteristic(S)
    if chi != expected:
        raise InvalidPairing(f"Euler characteristic {chi} differs from the expected {expected}")
    if short:
        logger.warning("%s: %d of %d tubes end in a ring that is not unit squares", kind, short, len(pairing))
    return S, Realization(np.array(coords))
