"""Brick decompositions, their certificates and the (5,7,8,9,10) curvature audit.

The drivers peel bricks off a surface one at a time until a single brick is
left. The bricks, in reverse removal order, form a :class:`Certificate`; it is
only returned once :func:`verify_certificate` has rebuilt the boundary of the
brick union and matched it against the input.

Example:
    Decomposing a slab of four cubes::

        from rpsurf.generators import slab
        from rpsurf.decompose import decompose, verify_certificate

        S, R = slab()
        cert = decompose(S, R)
        assert len(cert.bricks) == 4
        assert verify_certificate(cert, S, R).ok
"""

import itertools
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterator, Sequence

import numpy as np

from .bands import Bigon, BigonKind, enumerate_bigons
from .errors import (
    DecompositionError,
    FlipStuck,
    GenusOutOfRange,
    NoReducibleRegion,
    NotPentagonal,
    NotSquareOct,
    SurfaceError,
    SurgeryError,
    UnsupportedDegrees,
    VerificationFailed,
)
from .generators import Brick, SolidKind, cancel_facets, polygons_to_surface
from .geometry import (
    AnglePi,
    Realization,
    VertexType,
    facial_curvature,
    is_realizable_vertex_type,
    validate_realization,
    vertex_type,
)
from .labels import Labels
from .settings import Settings, eps_coord, key_quantum
from .surface_core import (
    SurfaceGraph,
    ValidationReport,
    face_generations,
    genus,
    is_isomorphic,
    region_boundary,
)
from .surgery import (
    SurgeryRecord,
    brick_removal_surgery,
    brick_through,
    cube_flip,
    octagon_removal_surgery,
    prism_flip,
    remove_brick,
    remove_dangling_pairs,
    swap_cap,
)
from .utils import point_key, polygon_key, same_cyclic_order

__all__ = [
    "AuditReport",
    "Brick",
    "Certificate",
    "Family",
    "VerificationReport",
    "curvature_audit_5n",
    "decompose",
    "decompose_pent",
    "decompose_square_oct",
    "verify_certificate",
]

logger = logging.getLogger(__name__)

AUDIT_DEGREES = frozenset({5, 7, 8, 9, 10})


class Family(str, Enum):
    PENT = "pent"
    SQUARE_OCT = "square-oct"
    AUTO = "auto"

    def __str__(self) -> str:
        return self.value


@dataclass
class Certificate:
    """Bricks whose union has the decomposed surface as boundary.

    ``provenance`` lists the surgeries in the order they were applied;
    ``gluings`` holds ``(brick, facet, brick, facet)`` for every cancelled
    facet pair.
    """

    bricks: list[Brick]
    provenance: list[SurgeryRecord] = field(default_factory=list)
    gluings: list[tuple[int, int, int, int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.bricks)

    def kinds(self) -> dict[str, int]:
        return dict(sorted(Counter(str(b.kind) for b in self.bricks).items()))


@dataclass
class VerificationReport:
    """Outcome of rebuilding a brick union and matching it to a surface."""

    ok: bool
    survivors: int
    cancelled: int
    gluings: list[tuple[int, int, int, int]] = field(default_factory=list)
    witness: str = ""

    def __bool__(self) -> bool:
        return self.ok


##################################################################################
# Verification
##################################################################################


def _aligned_deviation(face_pts: np.ndarray, facet: np.ndarray, q: float) -> float:
    """Largest distance between matched points of a face and a coinciding facet."""
    first = point_key(face_pts[0], q)
    start = next(i for i, p in enumerate(facet) if point_key(p, q) == first)
    rolled = np.roll(facet, -start, axis=0)
    return float(np.max(np.linalg.norm(face_pts - rolled, axis=1)))


def _match_facets(
    survivors: Sequence[tuple[int, int, np.ndarray]], S: SurfaceGraph, R: Realization, reverse: bool, eps: float
) -> str:
    """Match surviving facets to faces one to one; return the first mismatch or ''."""
    q = key_quantum()
    pending: dict[frozenset, list[int]] = defaultdict(list)
    for f, face in enumerate(S.faces):
        pending[polygon_key(R.points(face), q)].append(f)
    extra = []
    for b, i, pts in survivors:
        pts = pts[::-1] if reverse else pts
        keys = [point_key(p, q) for p in pts]
        candidates = pending.get(polygon_key(pts, q), [])
        f = next(
            (g for g in candidates if same_cyclic_order([point_key(p, q) for p in R.points(S.faces[g])], keys)),
            None,
        )
        if f is None:
            extra.append((b, i))
            continue
        candidates.remove(f)
        deviation = _aligned_deviation(R.points(S.faces[f]), pts, q)
        if deviation > eps:
            return f"deviation: face {f} is {deviation:.3g} away from facet {i} of brick {b}"
    if extra:
        b, i = extra[0]
        return f"extra-face: facet {i} of brick {b} matches no face ({len(extra)} unmatched)"
    missing = sorted(f for faces in pending.values() for f in faces)
    if missing:
        return f"missing-face: face {missing[0]} is not a surviving facet ({len(missing)} unmatched)"
    return ""


def verify_certificate(
    cert: Certificate, S: SurfaceGraph, R: Realization, eps: float | None = None
) -> VerificationReport:
    """Check that the boundary of the certificate's brick union is the surface.

    Facets of all bricks are collected and coincident pairs of opposite
    orientation cancelled. The survivors must match the faces one to one,
    point by point within ``eps``, with the same orientation (or all with the
    reverse one). When no two vertices of the surface share a point the
    rebuilt boundary must also be isomorphic to the surface.

    Never raises; failures are reported with the first mismatch as witness.
    """
    eps = eps_coord(eps)
    result = cancel_facets(cert.bricks)
    survivors = result.survivors
    report = VerificationReport(False, len(survivors), len(result.gluings), list(result.gluings))
    if not cert.bricks:
        report.witness = "certificate has no bricks"
        return report
    if result.problems:
        report.witness = result.problems[0]
        return report
    witness = _match_facets(survivors, S, R, False, eps)
    if witness:
        if not _match_facets(survivors, S, R, True, eps):
            logger.info("Certificate matches the surface with reversed orientation")
        else:
            report.witness = witness
            return report
    q = key_quantum()
    if len({point_key(p, q) for p in R.coords}) == S.n_vertices:
        try:
            U, _ = polygons_to_surface(pts for _, _, pts in survivors)
        except SurfaceError as e:
            report.witness = f"adjacency: brick union boundary is not a surface ({e})"
            return report
        if is_isomorphic(U, S) is None:
            report.witness = "adjacency: brick union boundary is not isomorphic to the surface"
            return report
    report.ok = True
    return report


def _certify(records: list[SurgeryRecord], S: SurfaceGraph, R: Realization, eps: float | None) -> Certificate:
    bricks = [r.brick for r in reversed(records) if r.brick is not None]
    cert = Certificate(bricks, records)
    report = verify_certificate(cert, S, R, eps)
    if not report.ok:
        raise VerificationFailed(f"certificate of {len(bricks)} bricks rejected: {report.witness}", report)
    cert.gluings = report.gluings
    logger.info("Decomposed %d faces into %s", S.n_faces, cert.kinds())
    return cert


def _max_iterations() -> int:
    return int(Settings().get(Labels.MAX_ITERATIONS, default=10000))


def _base_case(kind: SolidKind, S: SurfaceGraph, R: Realization) -> SurgeryRecord | None:
    brick = brick_through(kind, S, R, 0, range(S.n_faces), outside=False)
    if brick is None:
        return None
    return SurgeryRecord(Labels.BASE_CASE, S.n_faces, 0, brick=brick, motion=brick.placement)


##################################################################################
# Pentagonal surfaces
##################################################################################


def _seven_face_cap(S: SurfaceGraph, R: Realization, f: int, g0: int):
    """Swap the dodecahedral cap around ``f`` for the rest of its dodecahedron."""
    q = key_quantum()
    first = face_generations(S, f, 1)
    brick = brick_through(SolidKind.DODECAHEDRON, S, R, f, [f, *first], outside=False)
    if brick is None:
        return None
    facet_keys = {polygon_key(p, q) for p in brick.facets()}
    second = [
        h
        for h in sorted(face_generations(S, f, 2))
        if len(set(S.face_neighbors(h)) & first) >= 2 and polygon_key(R.points(S.faces[h]), q) in facet_keys
    ]
    if not second:
        return None
    cap = [f, *sorted(first), second[0]]
    cap_keys = {polygon_key(R.points(S.faces[x]), q) for x in cap}
    others = [p for p in brick.facets() if polygon_key(p, q) not in cap_keys]
    try:
        S2, R2, count = swap_cap(S, R, cap, others)
    except (SurgeryError, SurfaceError) as e:
        logger.debug("Cap around face %d rejected: %s", f, e)
        return None
    if genus(S2) != g0:
        logger.debug("Cap around face %d changes the genus", f)
        return None
    report = validate_realization(S2, R2)
    if not report.ok:
        logger.debug("Cap around face %d leaves %s", f, sorted(report.kinds()))
        return None
    record = SurgeryRecord(
        Labels.DODECAHEDRON_REMOVAL,
        faces_before=S.n_faces,
        faces_after=S.n_faces - len(cap) + len(others),
        brick=brick,
        cycle=region_boundary(S, cap).loop,
        motion=brick.placement,
        removed_faces=tuple(cap),
        dangling_removed=count,
    )
    return S2, R2, record


def _pent_cap_step(S: SurfaceGraph, R: Realization):
    positive = {f for f in range(S.n_faces) if facial_curvature(S, f).sign() > 0}
    g0 = genus(S)
    for f in sorted(positive):
        if not face_generations(S, f, 1) & positive:
            continue
        step = _seven_face_cap(S, R, f, g0)
        if step is not None:
            return step
    return None


def _ring_pattern(S: SurfaceGraph, f: int) -> bool:
    """Vertex degrees (3,3,3,4,4) around ``f`` with the two degree-4 vertices adjacent."""
    degrees = [S.vertex_degree(v) for v in S.faces[f]]
    if sorted(degrees) != [3, 3, 3, 4, 4]:
        return False
    i, j = (k for k, d in enumerate(degrees) if d == 4)
    return (j - i) % 5 in (1, 4)


def _ring_opening_step(S: SurfaceGraph, R: Realization):
    """Remove a dodecahedron whose removal lowers the genus by one."""
    g0 = genus(S)
    order = sorted(range(S.n_faces), key=lambda f: (not _ring_pattern(S, f), f))
    tried: set[frozenset] = set()
    q = key_quantum()
    for f in order:
        brick = brick_through(SolidKind.DODECAHEDRON, S, R, f, [f], outside=False)
        if brick is None:
            continue
        key = polygon_key(brick.vertices(), q)
        if key in tried:
            continue
        tried.add(key)
        try:
            S2, R2, record = remove_brick(S, R, brick, Labels.RING_OPENING)
        except (SurgeryError, SurfaceError) as e:
            logger.debug("Ring opening at face %d rejected: %s", f, e)
            continue
        if genus(S2) != g0 - 1:
            continue
        report = validate_realization(S2, R2)
        if not report.ok:
            logger.debug("Ring opening at face %d leaves %s", f, sorted(report.kinds()))
            continue
        return S2, R2, record
    return None


def decompose_pent(S: SurfaceGraph, R: Realization, eps: float | None = None) -> Certificate:
    """Decompose an all-pentagon surface of genus 0 or 1 into dodecahedra.

    Each step swaps a seven-face dodecahedral cap (a positive-curvature face
    with a positive neighbour, its first generation and one second-generation
    face) for the five remaining facets of that dodecahedron. On a torus with
    no such cap a dodecahedron is removed from the ring instead.

    Raises:
        NotPentagonal: A face is not a pentagon.
        GenusOutOfRange: Genus other than 0 or 1.
        NoReducibleRegion: No cap and no ring brick can be removed.
        VerificationFailed: The certificate does not rebuild the surface.
    """
    if S.face_degrees() != {5}:
        raise NotPentagonal(f"face degrees {sorted(S.face_degrees())} are not all 5")
    g = genus(S)
    if g not in (0, 1):
        raise GenusOutOfRange(f"pentagonal decomposition needs genus 0 or 1, got {g}")
    S0, R0 = S, R
    records: list[SurgeryRecord] = []
    for _ in range(_max_iterations()):
        if S.n_faces == 12 and genus(S) == 0:
            base = _base_case(SolidKind.DODECAHEDRON, S, R)
            if base is None:
                raise NoReducibleRegion("twelve pentagons that do not bound a dodecahedron")
            records.append(base)
            break
        step = _pent_cap_step(S, R)
        if step is None and genus(S) == 1:
            step = _ring_opening_step(S, R)
        if step is None:
            raise NoReducibleRegion(f"no removable dodecahedron on {S.n_faces} faces")
        S, R, record = step
        logger.info("%s: %d -> %d faces", record.kind, record.faces_before, S.n_faces)
        records.append(record)
    else:
        raise NoReducibleRegion(f"no base case after {_max_iterations()} iterations")
    return _certify(records, S0, R0, eps)


##################################################################################
# Square and octagon surfaces
##################################################################################


def _flips_at(S: SurfaceGraph, bigon: Bigon, f: int) -> Iterator[Callable]:
    """Cube and prism flips around turning point ``f`` inside the bigon."""
    near = [g for g in S.face_neighbors(f) if g in bigon.interior and g != f]
    for g, h in itertools.combinations(sorted(set(near)), 2):
        trio = (f, g, h)
        octagons = [x for x in trio if S.face_degree(x) == 8]
        if not octagons:
            yield lambda S, R, trio=trio: cube_flip(S, R, *trio)
            continue
        if len(octagons) > 1:
            continue
        o = octagons[0]
        ring = S.face_neighbors(o)
        for start in range(len(ring)):
            window = [ring[(start + k) % len(ring)] for k in range(4)]
            if set(trio) - {o} <= set(window):
                yield lambda S, R, half=(o, *window): prism_flip(S, R, half)


def _square_oct_step(S: SurfaceGraph, R: Realization, eps: float | None):
    bigons = [b for b in enumerate_bigons(S, R, eps=eps) if b.kind != BigonKind.MIXED]
    for bigon in bigons:
        surgery = octagon_removal_surgery if bigon.kind == BigonKind.OCTAGON else brick_removal_surgery
        try:
            return surgery(S, R, bigon, eps)
        except (SurgeryError, SurfaceError) as e:
            logger.debug("%s bigon at %s: %s", bigon.kind, bigon.turning, e)
    for bigon in bigons:
        for f in bigon.turning:
            for flip in _flips_at(S, bigon, f):
                try:
                    S2, R2, record = flip(S, R)
                except (SurgeryError, SurfaceError) as e:
                    logger.debug("Flip at %d rejected: %s", f, e)
                    continue
                if not record.notes.get("inside"):
                    continue
                try:
                    S3, R3, count = remove_dangling_pairs(S2, R2)
                except (SurgeryError, SurfaceError) as e:
                    logger.debug("Cleanup after flip at %d failed: %s", f, e)
                    continue
                return S3, R3, replace(record, dangling_removed=count)
    raise FlipStuck(f"no removal or inward flip applies on {S.n_faces} faces ({len(bigons)} bigons)")


def decompose_square_oct(S: SurfaceGraph, R: Realization, eps: float | None = None) -> Certificate:
    """Decompose a genus-0 surface of squares and octagons into cubes and prisms.

    Octagon bigons lose their prism; square bigons lose the brick spanned by a
    bridging face. Where no bigon allows a removal, a cube or prism flip
    at a turning point swaps a brick lying inside the surface out of it.

    Raises:
        NotSquareOct: A face is neither a square nor an octagon.
        GenusOutOfRange: Genus other than 0.
        FlipStuck: Neither a removal nor an inward flip applies.
        VerificationFailed: The certificate does not rebuild the surface.
    """
    if not S.face_degrees() <= {4, 8}:
        raise NotSquareOct(f"face degrees {sorted(S.face_degrees())} are not within (4, 8)")
    g = genus(S)
    if g != 0:
        raise GenusOutOfRange(f"square/octagon decomposition needs genus 0, got {g}")
    S0, R0 = S, R
    records: list[SurgeryRecord] = []
    bases = {((4, 6),): SolidKind.CUBE, ((4, 8), (8, 2)): SolidKind.OCTAGONAL_PRISM}
    for _ in range(_max_iterations()):
        kind = bases.get(tuple(sorted(S.degree_histogram().items())))
        base = _base_case(kind, S, R) if kind else None
        if base is not None:
            records.append(base)
            break
        S, R, record = _square_oct_step(S, R, eps)
        logger.info("%s: %d -> %d faces", record.kind, record.faces_before, S.n_faces)
        records.append(record)
    else:
        raise FlipStuck(f"no base case after {_max_iterations()} iterations")
    return _certify(records, S0, R0, eps)


def decompose(
    S: SurfaceGraph, R: Realization, family: Family | str = Family.AUTO, eps: float | None = None
) -> Certificate:
    """Run the driver for ``family``; ``auto`` picks it from the face degrees."""
    family = Family(family)
    if family == Family.AUTO:
        degrees = S.face_degrees()
        if degrees == {5}:
            family = Family.PENT
        elif degrees <= {4, 8}:
            family = Family.SQUARE_OCT
        else:
            raise DecompositionError(f"no decomposition for face degrees {sorted(degrees)}")
    if family == Family.PENT:
        return decompose_pent(S, R, eps)
    return decompose_square_oct(S, R, eps)


##################################################################################
# Curvature audit
##################################################################################


def regional_bound(n: int) -> AnglePi:
    """Most curvature a positive n-gon and its first generation can carry."""
    return AnglePi(Fraction(13, 3) - Fraction(19 * n, 30))


def pentagon_regional_bound(n: int) -> AnglePi:
    """Same for a positive pentagon with an n-gon in its second generation."""
    return AnglePi(Fraction(5 - 2 * n, 3 * n))


def _sign_label(value: AnglePi) -> str:
    return {1: Labels.POSITIVE, 0: Labels.ZERO, -1: Labels.NEGATIVE}[value.sign()]


@dataclass(frozen=True)
class FaceAudit:
    face: int
    degree: int
    curvature: AnglePi
    sign: str
    profile: tuple[VertexType, ...]


@dataclass(frozen=True)
class RegionalSum:
    """Curvature of a positive face plus its first generation."""

    face: int
    degree: int
    first_generation: tuple[int, ...]
    total: AnglePi
    bound: AnglePi | None

    @property
    def exceeds(self) -> bool:
        return self.bound is not None and self.total > self.bound


@dataclass
class AuditReport:
    """Per-face curvature classification with lemma checks and regional sums."""

    genus: int
    faces: list[FaceAudit]
    regions: list[RegionalSum]
    violations: ValidationReport
    high_degree_faces: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return self.violations.ok

    @property
    def genus_zero_contradiction(self) -> bool | None:
        """True when a genus-0 surface has a face of degree 7 or more.

        None for other genera, about which no claim is made.
        """
        if self.genus != 0:
            return None
        return bool(self.high_degree_faces)

    def counts(self) -> dict[str, int]:
        counts = Counter(fa.sign for fa in self.faces)
        return {label: counts.get(label, 0) for label in (Labels.POSITIVE, Labels.ZERO, Labels.NEGATIVE)}


def curvature_audit_5n(S: SurfaceGraph) -> AuditReport:
    """Exact curvature audit of a surface with faces of degree 5, 7, 8, 9 and 10.

    Every face is classified by the sign of its facial curvature. Vertex
    types that regular polygons cannot realize are violations, as are
    positive n-gons (n >= 7) with a vertex other than ``(5^2,n)`` and
    regions whose curvature exceeds the most a realizable configuration
    allows. Only the graph is used.

    Raises:
        UnsupportedDegrees: A face of degree 6 or of degree 11 or more.
    """
    unsupported = sorted(S.face_degrees() - AUDIT_DEGREES)
    if unsupported:
        raise UnsupportedDegrees(f"audit covers degrees {sorted(AUDIT_DEGREES)}, found {unsupported}")
    curvature = [facial_curvature(S, f) for f in range(S.n_faces)]
    faces = [
        FaceAudit(
            f,
            S.face_degree(f),
            curvature[f],
            _sign_label(curvature[f]),
            tuple(vertex_type(S, v) for v in S.faces[f]),
        )
        for f in range(S.n_faces)
    ]
    violations = ValidationReport()
    for v in range(S.n_vertices):
        vt = vertex_type(S, v)
        if not is_realizable_vertex_type(vt):
            violations.add("unrealizable-vertex", (v,), str(vt))

    regions = []
    for fa in faces:
        if fa.sign != Labels.POSITIVE:
            continue
        f, n = fa.face, fa.degree
        if n >= 7:
            expected = VertexType((5, 5, n))
            bad = [v for v, vt in zip(S.faces[f], fa.profile) if vt != expected]
            if bad:
                violations.add("positive-face-vertex", (f, *bad), f"vertices of a positive {n}-gon must be {expected}")
            bound = regional_bound(n)
        else:
            high = [S.face_degree(h) for h in face_generations(S, f, 2) if S.face_degree(h) >= 7]
            bound = pentagon_regional_bound(min(high)) if high else None
        first = face_generations(S, f, 1)
        total = sum((curvature[g] for g in first), curvature[f])
        region = RegionalSum(f, n, tuple(sorted(first)), total, bound)
        if region.exceeds:
            violations.add("regional-sum", (f,), f"{total} exceeds {bound}")
        regions.append(region)

    report = AuditReport(
        genus(S),
        faces,
        regions,
        violations,
        tuple(f for f in range(S.n_faces) if S.face_degree(f) >= 7),
    )
    if report.genus_zero_contradiction:
        logger.warning(
            "Genus-0 surface with %d face(s) of degree >= 7 cannot be realized", len(report.high_degree_faces)
        )
    return report
