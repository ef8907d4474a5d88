"""Rewriting operations on realized surfaces.

Every operation returns a fresh ``(SurfaceGraph, Realization, SurgeryRecord)``
and leaves its input untouched. Most of them replace a disk of faces by a
different set of polygons sharing its boundary; :func:`swap_cap` is the
primitive doing that. New polygons are matched to boundary vertices by
coordinates and oriented from the boundary; points off the boundary always
get fresh vertices.

Example:
    Flipping and cleaning a box corner::

        from rpsurf.generators import box
        from rpsurf.surgery import cube_flip, remove_dangling_pairs

        S, R = box()
        v = next(v for v in range(S.n_vertices) if S.vertex_degree(v) == 3)
        f, g, h = S.vertex_faces(v)
        S2, R2, record = cube_flip(S, R, f, g, h)
        S3, R3, count = remove_dangling_pairs(S2, R2)
        assert S3.n_faces == 6 and count == 2
"""

import itertools
import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .bands import Band, Bigon, BigonKind, bigon_sides, check_interior_structure
from .errors import (
    BandHasOctagon,
    BoundaryMismatch,
    LemmaViolation,
    NoBridgingFace,
    NoIsometry,
    NonParallelTransport,
    NonSeparating,
    NotCubeCorner,
    NotPrismHalf,
    NotPrismStructured,
    OverReduction,
    RetryLimitExceeded,
    SingleBrick,
    SurfaceError,
    SurgeryError,
    WrongKind,
)
from .generators import Brick, SolidKind, place_brick
from .geometry import Realization, RigidMotion, isometry_from_correspondence
from .labels import Labels
from .settings import Settings, eps_coord, key_quantum
from .surface_core import Cycle, SurfaceGraph, build_surface, genus, region_boundaries, region_boundary
from .utils import point_key, polygon_key, same_cyclic_order

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Hemisphere:
    """A surface with one boundary cycle.

    ``faces`` index into ``realization``; ``boundary`` is traversed in the
    direction the hemisphere's own faces traverse it.
    """

    faces: tuple[tuple[int, ...], ...]
    boundary: tuple[int, ...]
    realization: Realization
    source_faces: tuple[int, ...] = ()

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def vertices(self) -> list[int]:
        return sorted({v for face in self.faces for v in face})


@dataclass(frozen=True)
class SurgeryRecord:
    """What one operation removed or changed.

    ``faces_before``/``faces_after`` count faces around the operation itself;
    dangling pairs cleaned afterwards are counted in ``dangling_removed``.
    """

    kind: str
    faces_before: int
    faces_after: int
    brick: Brick | None = None
    cycle: tuple[int, ...] = ()
    motion: RigidMotion | None = None
    removed_faces: tuple[int, ...] = ()
    dangling_removed: int = 0
    notes: dict = field(default_factory=dict)

    @property
    def face_delta(self) -> int:
        return self.faces_after - self.faces_before


##################################################################################
# Face-list helpers
##################################################################################


def _max_retries(n_faces: int) -> int:
    limit = Settings().get(Labels.MAX_CUT_RETRIES)
    return n_faces if limit is None else int(limit)


def _opposite(a: Sequence, b: Sequence) -> bool:
    return same_cyclic_order(list(a), list(b)[::-1])


def _cancel_dangling(
    faces: list[tuple[int, ...]], coords: np.ndarray, limit: int | None = None
) -> tuple[list[tuple[int, ...]], int]:
    """Repeatedly delete edge-adjacent face pairs with identical images.

    Coincident vertices of each removed pair are merged (the second face's
    vertex into the first's) so that the faces around the pair close up.

    Raises:
        RetryLimitExceeded: More than ``limit`` pairs were removed.
    """
    q = key_quantum()
    faces = [tuple(face) for face in faces]
    count = 0
    while True:
        keys = [[point_key(coords[v], q) for v in face] for face in faces]
        by_edge: dict[tuple[int, int], list[int]] = defaultdict(list)
        for i, face in enumerate(faces):
            for j, u in enumerate(face):
                v = face[(j + 1) % len(face)]
                by_edge[(min(u, v), max(u, v))].append(i)
        pair = None
        for edge in sorted(by_edge):
            for a, b in itertools.combinations(by_edge[edge], 2):
                if set(keys[a]) == set(keys[b]) and _opposite(keys[a], keys[b]):
                    pair = (a, b)
                    break
            if pair:
                break
        if pair is None:
            return faces, count
        a, b = pair
        by_key = dict(zip(keys[a], faces[a]))
        merge = {w: by_key[k] for w, k in zip(faces[b], keys[b]) if by_key[k] != w}
        faces = [tuple(merge.get(v, v) for v in face) for i, face in enumerate(faces) if i not in pair]
        count += 1
        logger.debug("Removed dangling pair, %d merge(s)", len(merge))
        if limit is not None and count > limit:
            raise RetryLimitExceeded(f"dangling cleanup exceeded {limit} pairs")


def _compact(faces: list[tuple[int, ...]], coords: np.ndarray) -> tuple[SurfaceGraph, Realization]:
    if not faces:
        raise OverReduction("no faces left")
    used = sorted({v for face in faces for v in face})
    index = {v: i for i, v in enumerate(used)}
    S = build_surface([tuple(index[v] for v in face) for face in faces], len(used))
    return S, Realization(np.asarray(coords)[used])


def find_dangling_pairs(S: SurfaceGraph, R: Realization) -> list[tuple[int, int]]:
    """Edge-adjacent face pairs whose images have the same vertex set."""
    q = key_quantum()
    keys = [polygon_key(R.points(face), q) for face in S.faces]
    pairs = set()
    for e in range(S.n_edges):
        f, g = sorted(S.edge_faces(e))
        if keys[f] == keys[g]:
            pairs.add((f, g))
    return sorted(pairs)


def remove_dangling_pairs(S: SurfaceGraph, R: Realization) -> tuple[SurfaceGraph, Realization, int]:
    """Delete dangling face pairs until none remain.

    Returns the input objects unchanged with count 0 when there is nothing
    to remove.

    Raises:
        OverReduction: Cleanup removed every face.
    """
    if not find_dangling_pairs(S, R):
        return S, R, 0
    faces, count = _cancel_dangling(list(S.faces), R.coords, _max_retries(S.n_faces))
    S2, R2 = _compact(faces, R.coords)
    logger.info("Removed %d dangling pair(s): %d -> %d faces", count, S.n_faces, S2.n_faces)
    return S2, R2, count


def _orient_new_faces(new_faces: list[list[int]], boundary: set[tuple[int, int]]) -> list[tuple[int, ...]]:
    """Orient new faces so that they traverse boundary edges like the removed region."""
    n = len(new_faces)
    orient: list[int | None] = [None] * n

    def directed(face):
        return {(u, face[(i + 1) % len(face)]) for i, u in enumerate(face)}

    queue = deque()
    for i, face in enumerate(new_faces):
        d = directed(face)
        if d & boundary:
            orient[i] = 1
        elif {(v, u) for u, v in d} & boundary:
            orient[i] = -1
        if orient[i] is not None:
            queue.append(i)
    while queue:
        i = queue.popleft()
        di = directed(new_faces[i][:: orient[i]])
        for j in range(n):
            if orient[j] is not None:
                continue
            dj = directed(new_faces[j])
            if dj & di:
                orient[j] = -1
            elif {(v, u) for u, v in dj} & di:
                orient[j] = 1
            else:
                continue
            queue.append(j)
    if any(o is None for o in orient):
        raise BoundaryMismatch("a new face is not connected to the boundary")
    return [tuple(face[:: orient[i]]) for i, face in enumerate(new_faces)]


def swap_cap(
    S: SurfaceGraph,
    R: Realization,
    faces: Iterable[int],
    polygons: Sequence[np.ndarray],
    cleanup: bool = True,
) -> tuple[SurfaceGraph, Realization, int]:
    """Replace a region of faces by new polygons with the same boundary.

    Args:
        faces: Surface faces forming a region with at least one boundary
            cycle (a disk, or an annulus when opening a ring).
        polygons: Replacement polygons as point arrays, in any orientation.
        cleanup: Remove dangling pairs at face-list level before building;
            required when the new faces close up against existing ones.

    Returns:
        (SurfaceGraph, Realization, int): The new surface and the number of
        dangling pairs removed.

    Raises:
        BoundaryMismatch: The polygons do not cover the region's boundary.
    """
    region = set(faces)
    cycles = region_boundaries(S, region)
    loop = [v for cycle in cycles for v in cycle.loop]
    q = key_quantum()
    at_boundary = {point_key(R[v], q): v for v in loop}
    if len(at_boundary) != len(set(loop)):
        raise BoundaryMismatch("distinct boundary vertices share a point")
    coords = [np.asarray(p) for p in R.coords]
    fresh: dict[tuple, int] = {}
    new_faces = []
    for poly in polygons:
        face = []
        for p in np.asarray(poly, dtype=float):
            key = point_key(p, q)
            if key in at_boundary:
                face.append(at_boundary[key])
            else:
                if key not in fresh:
                    fresh[key] = len(coords)
                    coords.append(p)
                face.append(fresh[key])
        new_faces.append(face)
    directed = {pair for cycle in cycles for pair in cycle.directed_pairs()}
    oriented = _orient_new_faces(new_faces, directed)
    covered = {(u, face[(i + 1) % len(face)]) for face in oriented for i, u in enumerate(face)}
    if not directed <= covered:
        raise BoundaryMismatch(f"{len(directed - covered)} boundary edge(s) not covered by the new faces")

    out = [face for g, face in enumerate(S.faces) if g not in region] + oriented
    coords = np.vstack(coords)
    count = 0
    if cleanup:
        out, count = _cancel_dangling(out, coords, _max_retries(S.n_faces))
    S2, R2 = _compact(out, coords)
    return S2, R2, count


def remove_brick(
    S: SurfaceGraph, R: Realization, brick: Brick, kind: str | None = None
) -> tuple[SurfaceGraph, Realization, SurgeryRecord]:
    """Remove every surface face lying on a brick facet and add its other facets.

    Raises:
        SingleBrick: Every face of the surface lies on the brick.
        SurgeryError: No face lies on the brick, or those that do cannot be replaced.
    """
    q = key_quantum()
    facets = brick.facets()
    facet_keys = [polygon_key(p, q) for p in facets]
    face_keys = [polygon_key(R.points(face), q) for face in S.faces]
    on_brick = [f for f in range(S.n_faces) if face_keys[f] in facet_keys]
    if not on_brick:
        raise SurgeryError(f"no face lies on the {brick.kind}")
    if len(on_brick) == S.n_faces:
        raise SingleBrick(f"the surface is a single {brick.kind}")
    used = {face_keys[f] for f in on_brick}
    others = [p for p, k in zip(facets, facet_keys) if k not in used]
    try:
        S2, R2, count = swap_cap(S, R, on_brick, others)
    except SurfaceError as e:
        raise SurgeryError(f"faces on the {brick.kind} cannot be replaced: {e}")
    record = SurgeryRecord(
        kind or f"{brick.kind}-removal",
        faces_before=S.n_faces,
        faces_after=S.n_faces - len(on_brick) + len(others),
        brick=brick,
        cycle=region_boundaries(S, on_brick)[0].loop,
        motion=brick.placement,
        removed_faces=tuple(on_brick),
        dangling_removed=count,
    )
    logger.debug("Removed %s: %d faces replaced by %d", brick.kind, len(on_brick), len(others))
    return S2, R2, record


##################################################################################
# Cutting and polyhedral surgery
##################################################################################


def cut_along_cycle(S: SurfaceGraph, R: Realization, C: Cycle) -> tuple[Hemisphere, Hemisphere]:
    """Split the surface along a simple vertex cycle.

    The first hemisphere holds the faces on the left of ``C`` (those that
    traverse it in its own direction).

    Raises:
        NonSeparating: The cycle does not disconnect the surface.
    """
    if not C.is_simple:
        raise SurfaceError("cut cycle is not simple")
    cut = set(C.edges)
    seeds = ([], [])
    for u, v in C.directed_pairs():
        h = S.halfedge(u, v)
        seeds[0].append(S.he_face[h])
        seeds[1].append(S.he_face[S.he_twin[h]])
    sides = []
    for start in seeds:
        seen = set(start)
        stack = list(start)
        while stack:
            f = stack.pop()
            for h in S.face_halfedges(f):
                if S.he_edge[h] in cut:
                    continue
                g = S.he_face[S.he_twin[h]]
                if g not in seen:
                    seen.add(g)
                    stack.append(g)
        sides.append(sorted(seen))
    if set(sides[0]) & set(sides[1]):
        raise NonSeparating(f"cycle of length {len(C)} does not separate the surface")
    loop = C.loop
    return (
        Hemisphere(tuple(S.faces[f] for f in sides[0]), loop, R, tuple(sides[0])),
        Hemisphere(tuple(S.faces[f] for f in sides[1]), tuple(reversed(loop)), R, tuple(sides[1])),
    )


def _alignments(H1: Hemisphere, H2: Hemisphere) -> list[list[tuple[int, int]]]:
    k = len(H1.boundary)
    return [[(H1.boundary[i], H2.boundary[(s - i) % k]) for i in range(k)] for s in range(k)]


def polyhedral_surgery(
    H1: Hemisphere,
    H2: Hemisphere,
    correspondence: Sequence[tuple[int, int]] | None = None,
    eps: float | None = None,
) -> tuple[SurfaceGraph, Realization, SurgeryRecord]:
    """Glue ``H1`` onto ``H2`` along their boundaries.

    ``correspondence`` pairs boundary vertices ``(v of H1, w of H2)`` in
    ``H1``'s boundary order; when omitted, the first cyclic alignment with a
    fitting rigid motion is used. ``H1`` is moved by that motion; ``H2``
    keeps its realization. Dangling pairs are counted, not removed.

    Raises:
        BoundaryMismatch: Boundary lengths differ or the pairing does not
            reverse orientation.
        NoIsometry: No rigid motion maps ``H1``'s boundary onto ``H2``'s.
    """
    k = len(H1.boundary)
    if k != len(H2.boundary):
        raise BoundaryMismatch(f"boundary lengths differ ({k} vs {len(H2.boundary)})")
    if correspondence is None:
        candidates = _alignments(H1, H2)
    else:
        pairs = [(int(v), int(w)) for v, w in correspondence]
        if [v for v, _ in pairs] != list(H1.boundary) or not same_cyclic_order(
            [w for _, w in pairs][::-1], list(H2.boundary)
        ):
            raise BoundaryMismatch("correspondence must follow H1's boundary and reverse H2's")
        candidates = [pairs]

    motion, pairs = None, None
    for candidate in candidates:
        A = H1.realization.points(v for v, _ in candidate)
        B = H2.realization.points(w for _, w in candidate)
        try:
            motion = isometry_from_correspondence(A, B, eps, allow_reflection=False)
            pairs = candidate
            break
        except NoIsometry:
            continue
    if motion is None:
        raise NoIsometry("no rigid motion maps one boundary onto the other")

    h2_vertices = H2.vertices()
    index = {v: i for i, v in enumerate(h2_vertices)}
    coords = [H2.realization[v] for v in h2_vertices]
    glued = dict(pairs)
    remap = {v: index[w] for v, w in glued.items()}
    for v in H1.vertices():
        if v not in remap:
            remap[v] = len(coords)
            coords.append(motion.apply(H1.realization[v]))
    faces = [tuple(index[v] for v in face) for face in H2.faces]
    faces += [tuple(remap[v] for v in face) for face in H1.faces]
    S = build_surface(faces, len(coords))
    R = Realization(coords)
    dangling = find_dangling_pairs(S, R)
    record = SurgeryRecord(
        Labels.POLYHEDRAL,
        faces_before=H1.n_faces + H2.n_faces,
        faces_after=S.n_faces,
        cycle=H1.boundary,
        motion=motion,
        notes={"dangling_pairs": dangling},
    )
    return S, R, record


##################################################################################
# Band surgery
##################################################################################


def band_surgery(
    S: SurfaceGraph, R: Realization, band: Band, eps: float | None = None
) -> tuple[SurfaceGraph, Realization, SurgeryRecord]:
    """Cut out a band of squares and close the gap by translating one side.

    The smaller side moves (the left one on ties) by the crossed-edge vector
    so that its boundary lands on the other side's boundary. Dangling pairs
    are then removed.

    Raises:
        BandHasOctagon: A band face is not a square.
        NonParallelTransport: Crossed edges disagree on the translation.
        OverReduction: Nothing is left after cleanup.
    """
    eps = eps_coord(eps)
    if any(S.face_degree(f) != 4 for f in band.faces):
        raise BandHasOctagon("band surgery needs a band of squares")
    right, left = bigon_sides(S, band)
    if right & left:
        raise NonSeparating("band does not separate the surface")
    move_right = len(right) < len(left)
    moving, staying = (right, left) if move_right else (left, right)
    band_faces = set(band.faces)

    # side edges of each square: right one after the entry edge, left one before it
    rims: tuple[set[int], set[int]] = (set(), set())
    for i, f in enumerate(band.faces):
        entry, _ = band.entry_exit(i)
        edges = S.face_edges(f)
        a = edges.index(entry)
        rims[0].update(S.edge_vertices(edges[(a + 1) % 4]))
        rims[1].update(S.edge_vertices(edges[(a + 3) % 4]))
    leaving = rims[0] if move_right else rims[1]

    identify: dict[int, int] = {}
    shift = None
    for e in band.edges:
        u, v = S.edge_vertices(e)
        m, s = (u, v) if u in leaving else (v, u)
        w = R[s] - R[m]
        if shift is None:
            shift = w
        elif np.linalg.norm(w - shift) > eps:
            raise NonParallelTransport(f"crossed edge {e} disagrees with the band translation")
        identify[m] = s
    faces = [S.faces[f] for f in sorted(staying)]
    faces += [tuple(identify.get(v, v) for v in S.faces[f]) for f in sorted(moving)]
    coords = np.array(R.coords)
    moved = sorted({v for f in moving for v in S.faces[f]} - set(identify))
    coords[moved] = coords[moved] + shift
    if not faces:
        raise OverReduction("removing the band leaves no faces")
    try:
        faces, count = _cancel_dangling(faces, coords, _max_retries(S.n_faces))
        S2, R2 = _compact(faces, coords)
    except SurfaceError as e:
        raise OverReduction(f"band surgery degenerates: {e}")
    if genus(S2) != genus(S):
        raise LemmaViolation(f"band surgery changed the genus from {genus(S)} to {genus(S2)}", band.faces)
    record = SurgeryRecord(
        Labels.BAND,
        faces_before=S.n_faces,
        faces_after=S.n_faces - len(band_faces),
        motion=RigidMotion(np.eye(3), shift),
        removed_faces=band.faces,
        dangling_removed=count,
    )
    logger.debug("Band surgery: %d -> %d faces (%d dangling pairs)", S.n_faces, S2.n_faces, count)
    return S2, R2, record


##################################################################################
# Removal surgeries on bigons
##################################################################################


def _lies_inside(S: SurfaceGraph, R: Realization, f: int, brick: Brick) -> bool:
    """Whether the brick is on the inner side of face ``f``."""
    q = key_quantum()
    keys = [point_key(p, q) for p in R.points(S.faces[f])]
    return any(same_cyclic_order(keys, [point_key(p, q) for p in facet]) for facet in brick.facets())


def brick_through(
    kind: SolidKind, S: SurfaceGraph, R: Realization, anchor: int, required: Iterable[int], outside: bool = True
) -> Brick | None:
    """A brick behind face ``anchor`` (or in front, if ``outside``) whose facets include ``required``."""
    q = key_quantum()
    need = {polygon_key(R.points(S.faces[f]), q) for f in required}
    pts = R.points(S.faces[anchor])
    sides = (pts, pts[::-1]) if outside else (pts,)
    for points in sides:
        for motion in place_brick(kind, points):
            brick = Brick(kind, motion)
            if need <= {polygon_key(p, q) for p in brick.facets()}:
                return brick
    return None


def _is_single(S: SurfaceGraph, profile: dict[int, int]) -> bool:
    return S.degree_histogram() == profile


def octagon_removal_surgery(
    S: SurfaceGraph, R: Realization, bigon: Bigon, eps: float | None = None
) -> tuple[SurfaceGraph, Realization, SurgeryRecord]:
    """Replace a minimal octagon bigon's prism part by the rest of the prism.

    Raises:
        WrongKind: The bigon is not an octagon bigon.
        SingleBrick: The surface is a bare octagonal prism.
        NotPrismStructured: The interior is not part of an octagonal prism.
    """
    if bigon.kind != BigonKind.OCTAGON:
        raise WrongKind(f"octagon removal needs an octagon bigon, got {bigon.kind}")
    if _is_single(S, {4: 8, 8: 2}):
        raise SingleBrick("the surface is a single octagonal prism")
    try:
        check_interior_structure(S, R, bigon, eps)
    except LemmaViolation as e:
        raise NotPrismStructured(str(e))
    brick = brick_through(SolidKind.OCTAGONAL_PRISM, S, R, bigon.turning[0], bigon.interior, outside=False)
    if brick is None:
        raise NotPrismStructured("bigon interior does not lie on an octagonal prism")
    S2, R2, record = remove_brick(S, R, brick, Labels.OCTAGON_REMOVAL)
    octagons = S.degree_histogram().get(8, 0) - S2.degree_histogram().get(8, 0)
    if octagons < 2:
        raise NotPrismStructured(f"removal took away {octagons} octagon(s) instead of two")
    return S2, R2, record


def bridging_faces(S: SurfaceGraph, bigon: Bigon) -> list[int]:
    """Interior faces other than the turning points adjacent to both of them."""
    x, y = bigon.turning
    return [
        f
        for f in sorted(bigon.interior - {x, y})
        if x in S.face_neighbors(f) and y in S.face_neighbors(f)
    ]


def brick_removal_surgery(
    S: SurfaceGraph, R: Realization, bigon: Bigon, eps: float | None = None
) -> tuple[SurfaceGraph, Realization, SurgeryRecord]:
    """Remove the cube or prism spanned by a square bigon's bridging face.

    A square bridge gives a cube, an octagonal bridge an octagonal prism.
    Bridges are tried in index order; a removal must lower the face count.

    Raises:
        SingleBrick: The surface is a bare cube.
        NoBridgingFace: No bridge spans a removable brick.
    """
    if bigon.kind != BigonKind.SQUARE:
        raise WrongKind(f"brick removal needs a square bigon, got {bigon.kind}")
    if _is_single(S, {4: 6}):
        raise SingleBrick("the surface is a single cube")
    x, y = bigon.turning
    for g in bridging_faces(S, bigon):
        kind = SolidKind.CUBE if S.face_degree(g) == 4 else SolidKind.OCTAGONAL_PRISM
        brick = brick_through(kind, S, R, g, (x, g, y), outside=False)
        if brick is None:
            continue
        label = Labels.CUBE_REMOVAL if kind == SolidKind.CUBE else Labels.PRISM_REMOVAL
        try:
            S2, R2, record = remove_brick(S, R, brick, label)
        except (SurgeryError, SurfaceError) as e:
            logger.debug("Bridge %d rejected: %s", g, e)
            continue
        if record.face_delta < 0:
            return S2, R2, record
    raise NoBridgingFace(f"no bridging face of bigon {bigon.turning} spans a removable brick")


##################################################################################
# Flips
##################################################################################


def _flip(S, R, faces: Sequence[int], brick: Brick, kind: str):
    q = key_quantum()
    keys = {polygon_key(R.points(S.faces[f]), q) for f in faces}
    others = [p for p in brick.facets() if polygon_key(p, q) not in keys]
    S2, R2, _ = swap_cap(S, R, faces, others, cleanup=False)
    record = SurgeryRecord(
        kind,
        faces_before=S.n_faces,
        faces_after=S2.n_faces,
        brick=brick,
        cycle=region_boundary(S, faces).loop,
        motion=brick.placement,
        removed_faces=tuple(faces),
        notes={"inside": _lies_inside(S, R, faces[0], brick)},
    )
    return S2, R2, record


def cube_flip(
    S: SurfaceGraph, R: Realization, f: int, g: int, h: int
) -> tuple[SurfaceGraph, Realization, SurgeryRecord]:
    """Replace three squares at a cube corner by the cube's other three faces.

    The cube may lie on either side of the surface, so flipping the new
    corner restores the original. Dangling pairs are left in place; the
    record's ``notes["inside"]`` tells whether the cube was inside the surface.

    Raises:
        NotCubeCorner: The faces are not three squares of a unit cube meeting
            at a degree-3 vertex.
    """
    faces = (f, g, h)
    if len(set(faces)) != 3 or any(S.face_degree(x) != 4 for x in faces):
        raise NotCubeCorner("a cube corner is three distinct squares")
    common = set(S.faces[f]) & set(S.faces[g]) & set(S.faces[h])
    if len(common) != 1 or S.vertex_degree(next(iter(common))) != 3:
        raise NotCubeCorner(f"faces {faces} do not meet at a degree-3 vertex")
    brick = brick_through(SolidKind.CUBE, S, R, f, faces)
    if brick is None:
        raise NotCubeCorner(f"faces {faces} do not lie on a unit cube")
    return _flip(S, R, faces, brick, Labels.CUBE_FLIP)


def prism_flip(
    S: SurfaceGraph, R: Realization, faces: Sequence[int]
) -> tuple[SurfaceGraph, Realization, SurgeryRecord]:
    """Replace half of an octagonal prism by the other half.

    A half is one octagon with four consecutive lateral squares.

    Raises:
        NotPrismHalf: The five faces are not such a half.
    """
    faces = tuple(faces)
    degrees = sorted(S.face_degree(x) for x in faces)
    if len(set(faces)) != 5 or degrees != [4, 4, 4, 4, 8]:
        raise NotPrismHalf("a prism half is one octagon and four squares")
    octagon = next(x for x in faces if S.face_degree(x) == 8)
    squares = [x for x in faces if x != octagon]
    if any(octagon not in S.face_neighbors(x) for x in squares):
        raise NotPrismHalf("every square of a prism half touches its octagon")
    strip = {x: {y for y in squares if y in S.face_neighbors(x)} for x in squares}
    ends = [x for x, nbrs in strip.items() if len(nbrs) == 1]
    if len(ends) != 2 or any(len(n) > 2 for n in strip.values()):
        raise NotPrismHalf("the squares of a prism half are consecutive")
    brick = brick_through(SolidKind.OCTAGONAL_PRISM, S, R, octagon, faces)
    if brick is None:
        raise NotPrismHalf(f"faces {faces} do not lie on a unit octagonal prism")
    return _flip(S, R, faces, brick, Labels.PRISM_FLIP)
