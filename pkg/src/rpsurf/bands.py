"""Bands, turning points and bigons on realized (4,8)-surfaces.

A band starts at an edge and a face and keeps leaving each face through the
edge opposite the one it entered by. On a realized surface the crossed edges
are parallel translates of one another. Two bands that cross twice bound a
bigon: a dual cycle with exactly two turning points.

Example:
    Minimal bigon of an octagonal prism::

        from rpsurf.generators import SolidKind, make_solid
        from rpsurf.bands import all_bands, find_minimal_bigon

        S, R = make_solid(SolidKind.OCTAGONAL_PRISM)
        assert len(all_bands(S, R)) == 5
        bigon = find_minimal_bigon(S, R)
        assert bigon.kind == "octagon"
"""

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import networkx as nx
import numpy as np

from .errors import (
    BandError,
    LemmaViolation,
    MixedBigon,
    NoBigon,
    NonParallelTransport,
    NotClosed,
    SelfCrossingBand,
)
from .geometry import Realization
from .labels import Labels
from .settings import Settings, eps_coord
from .surface_core import SurfaceGraph, dual_graph

logger = logging.getLogger(__name__)

SQRT_HALF = 1 / math.sqrt(2)


class BigonKind(str, Enum):
    SQUARE = "square"
    OCTAGON = "octagon"
    MIXED = "mixed"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class DualCycle:
    """Closed walk in the dual graph.

    ``edges[i]`` is the primal edge crossed from ``faces[i]`` into
    ``faces[(i + 1) % len(faces)]``.
    """

    faces: tuple[int, ...]
    edges: tuple[int, ...]

    def __post_init__(self):
        if len(self.faces) != len(self.edges) or not self.faces:
            raise BandError("a dual cycle needs one crossed edge per face")

    @classmethod
    def from_faces(cls, S: SurfaceGraph, faces: Sequence[int]) -> "DualCycle":
        """Cycle through ``faces`` crossing the lowest-index shared edge each time."""
        faces = tuple(faces)
        edges = []
        for i, f in enumerate(faces):
            g = faces[(i + 1) % len(faces)]
            shared = sorted(set(S.face_edges(f)) & set(S.face_edges(g)))
            if not shared:
                raise BandError(f"faces {f} and {g} are not adjacent")
            edges.append(shared[0])
        return cls(faces, tuple(edges))

    def __len__(self) -> int:
        return len(self.faces)

    @property
    def is_simple(self) -> bool:
        return len(set(self.faces)) == len(self.faces)

    def entry_exit(self, i: int) -> tuple[int, int]:
        """Edges by which the walk enters and leaves its i-th face."""
        return self.edges[i - 1], self.edges[i]

    def canonical(self) -> tuple[int, ...]:
        """Least rotation or reversal of the face sequence."""
        seqs = []
        for seq in (self.faces, self.faces[::-1]):
            seqs += [seq[i:] + seq[:i] for i in range(len(seq))]
        return min(seqs)


@dataclass(frozen=True)
class Band(DualCycle):
    """Dual cycle without turning points; ``direction`` is the unit vector of its seed edge."""

    direction: tuple[float, float, float] = field(default=(0.0, 0.0, 0.0), compare=False)

    @property
    def crossed_edges(self) -> frozenset[int]:
        return frozenset(self.edges)


def _edge_vector(S: SurfaceGraph, R: Realization, e: int) -> np.ndarray:
    u, v = S.edge_vertices(e)
    d = R[v] - R[u]
    return d / np.linalg.norm(d)


def _parallel(a: np.ndarray, b: np.ndarray, eps: float) -> bool:
    return abs(abs(float(np.dot(a, b))) - 1.0) <= eps


def _opposite_edge(S: SurfaceGraph, f: int, e: int) -> int:
    edges = S.face_edges(f)
    k = len(edges)
    if k % 2:
        raise BandError(f"face {f} has odd degree {k} and no opposite edges")
    return edges[(edges.index(e) + k // 2) % k]


def trace_band(S: SurfaceGraph, R: Realization, e: int, f: int, eps: float | None = None) -> Band:
    """The band entering face ``f`` through edge ``e``.

    Raises:
        NotClosed: The walk does not return to its start.
        NonParallelTransport: A crossed edge is not parallel to the seed edge.
        SelfCrossingBand: The band passes through some face twice.
    """
    eps = eps_coord(eps)
    if f not in S.edge_faces(e):
        raise BandError(f"face {f} is not incident to edge {e}")
    direction = _edge_vector(S, R, e)
    faces, edges = [], []
    face, entry = f, e
    for _ in range(S.n_halfedges + 1):
        exit_edge = _opposite_edge(S, face, entry)
        if not _parallel(_edge_vector(S, R, exit_edge), direction, eps):
            raise NonParallelTransport(f"edge {exit_edge} of face {face} is not parallel to edge {e}")
        faces.append(face)
        edges.append(exit_edge)
        a, b = S.edge_faces(exit_edge)
        face, entry = (b if a == face else a), exit_edge
        if (face, entry) == (f, e):
            band = Band(tuple(faces), tuple(edges), tuple(float(x) for x in direction))
            if not band.is_simple:
                twice = Counter(faces).most_common(1)[0][0]
                raise SelfCrossingBand(f"band from edge {e} visits face {twice} twice")
            return band
    raise NotClosed(f"band from edge {e} on face {f} does not close")


def all_bands(S: SurfaceGraph, R: Realization, eps: float | None = None) -> list[Band]:
    """Every band of the surface; each edge is crossed by exactly one of them."""
    covered: set[int] = set()
    bands = []
    for e in range(S.n_edges):
        if e in covered:
            continue
        band = trace_band(S, R, e, S.edge_faces(e)[0], eps)
        covered.update(band.edges)
        bands.append(band)
    bands.sort(key=lambda b: b.canonical())
    logger.debug("Found %d bands over %d edges", len(bands), S.n_edges)
    return bands


def turning_points(
    S: SurfaceGraph, R: Realization, cycle: DualCycle | Sequence[int], eps: float | None = None
) -> list[int]:
    """Faces where the cycle enters and leaves through non-parallel edges."""
    eps = eps_coord(eps)
    if not isinstance(cycle, DualCycle):
        cycle = DualCycle.from_faces(S, cycle)
    out = []
    for i, f in enumerate(cycle.faces):
        a, b = cycle.entry_exit(i)
        if not _parallel(_edge_vector(S, R, a), _edge_vector(S, R, b), eps):
            out.append(f)
    return out


def count_turning_points(S: SurfaceGraph, R: Realization, cycle, eps: float | None = None) -> int:
    return len(turning_points(S, R, cycle, eps))


def bigon_sides(S: SurfaceGraph, cycle: DualCycle) -> tuple[frozenset[int], frozenset[int]]:
    """Faces off the cycle on its right and on its left.

    Each side is grown from the faces across the edges a cycle face has
    between its entry and exit edge. On a sphere the sides are disjoint.
    """
    on_cycle = set(cycle.faces)
    seeds: tuple[set[int], set[int]] = (set(), set())
    for i, f in enumerate(cycle.faces):
        entry, exit_edge = cycle.entry_exit(i)
        edges = S.face_edges(f)
        k = len(edges)
        a, b = edges.index(entry), edges.index(exit_edge)
        right = {edges[(a + j) % k] for j in range(1, (b - a) % k)}
        for e in edges:
            if e in (entry, exit_edge):
                continue
            g, h = S.edge_faces(e)
            other = h if g == f else g
            if other not in on_cycle:
                seeds[0 if e in right else 1].add(other)
    sides = []
    for start in seeds:
        seen = set(start)
        stack = list(start)
        while stack:
            g = stack.pop()
            for h in S.face_neighbors(g):
                if h not in on_cycle and h not in seen:
                    seen.add(h)
                    stack.append(h)
        sides.append(frozenset(seen))
    return sides[0], sides[1]


@dataclass(frozen=True)
class Bigon:
    """A band bigon together with the disk chosen as its interior.

    ``interior`` is the cycle's faces plus ``strict_interior``, the faces
    on the chosen side.
    """

    cycle: DualCycle
    turning: tuple[int, int]
    arcs: tuple[tuple[int, ...], tuple[int, ...]]
    bands: tuple[Band, Band]
    strict_interior: frozenset[int]
    kind: BigonKind

    @property
    def interior(self) -> frozenset[int]:
        return frozenset(self.cycle.faces) | self.strict_interior

    def sort_key(self) -> tuple[int, int]:
        return len(self.interior), min(self.interior)


def _arcs(band: Band, i: int, j: int) -> list[tuple[list[int], list[int]]]:
    """Forward and backward arcs of a band from position i to j as (faces, edges)."""
    n = len(band.faces)
    fwd_faces = [band.faces[(i + t) % n] for t in range((j - i) % n + 1)]
    fwd_edges = [band.edges[(i + t) % n] for t in range((j - i) % n)]
    bwd_faces = [band.faces[(i - t) % n] for t in range((i - j) % n + 1)]
    bwd_edges = [band.edges[(i - t - 1) % n] for t in range((i - j) % n)]
    return [(fwd_faces, fwd_edges), (bwd_faces, bwd_edges)]


def _kind(S: SurfaceGraph, x: int, y: int) -> BigonKind:
    dx, dy = S.face_degree(x), S.face_degree(y)
    if dx != dy:
        return BigonKind.MIXED
    return BigonKind.OCTAGON if dx == 8 else BigonKind.SQUARE


def _pair_bigons(S, R, b1: Band, b2: Band, restrict: bool, eps: float) -> list[Bigon]:
    pos1 = {f: i for i, f in enumerate(b1.faces)}
    pos2 = {f: i for i, f in enumerate(b2.faces)}
    crossing = sorted(set(pos1) & set(pos2))
    out = []
    for x, y in itertools.permutations(crossing, 2):
        for faces1, edges1 in _arcs(b1, pos1[x], pos1[y]):
            for faces2, edges2 in _arcs(b2, pos2[y], pos2[x]):
                inner1, inner2 = faces1[1:-1], faces2[1:-1]
                if set(inner1) & set(inner2):
                    continue
                if restrict and (set(inner1) & set(crossing) or set(inner2) & set(crossing)):
                    continue
                cycle = DualCycle(tuple(faces1 + inner2), tuple(edges1 + edges2))
                if not cycle.is_simple or len(cycle) < 3:
                    continue
                if sorted(turning_points(S, R, cycle, eps)) != sorted((x, y)):
                    continue
                right, left = bigon_sides(S, cycle)
                if right & left:
                    logger.debug("Cycle %s does not separate", cycle.faces)
                    continue
                for side in (right, left):
                    out.append(Bigon(cycle, (x, y), (tuple(faces1), tuple(faces2)), (b1, b2), side, _kind(S, x, y)))
    return out


def enumerate_bigons(
    S: SurfaceGraph, R: Realization, exhaustive: bool = False, eps: float | None = None
) -> list[Bigon]:
    """Every bigon candidate with each of its two disks, smallest interior first.

    Unless ``exhaustive``, band arcs may not pass another crossing of the
    two bands; surfaces with at most ``bands.exhaustive_face_limit`` faces are
    always searched exhaustively.
    """
    eps = eps_coord(eps)
    settings = Settings()
    restrict = bool(settings.get(Labels.RESTRICT_CANDIDATES, default=True))
    limit = int(settings.get(Labels.EXHAUSTIVE_FACE_LIMIT, default=30))
    if exhaustive or S.n_faces <= limit:
        restrict = False
    bands = all_bands(S, R, eps)
    seen = set()
    out = []
    for b1, b2 in itertools.combinations(bands, 2):
        for bigon in _pair_bigons(S, R, b1, b2, restrict, eps):
            key = (bigon.cycle.canonical(), bigon.strict_interior)
            if key not in seen:
                seen.add(key)
                out.append(bigon)
    out.sort(key=Bigon.sort_key)
    return out


def is_minimal(bigon: Bigon, candidates: Sequence[Bigon]) -> bool:
    """Whether no other candidate's interior lies inside the bigon's strict interior."""
    return not any(
        other.interior <= bigon.strict_interior for other in candidates if other is not bigon
    )


def find_minimal_bigon(S: SurfaceGraph, R: Realization, eps: float | None = None) -> Bigon:
    """The bigon with the smallest interior, ties broken by least face index.

    Raises:
        NoBigon: Fewer than two bands, or no two bands cross twice.
        MixedBigon: The minimal bigon has a square and an octagon as turning points.
    """
    candidates = enumerate_bigons(S, R, eps=eps)
    if not candidates:
        raise NoBigon(f"no band bigon on a surface with {S.n_faces} faces")
    bigon = candidates[0]
    if not is_minimal(bigon, candidates):
        raise LemmaViolation("smallest bigon contains another bigon", bigon.strict_interior)
    if bigon.kind == BigonKind.MIXED:
        raise MixedBigon(f"minimal bigon has turning points {bigon.turning} of different degrees")
    logger.debug("Minimal %s bigon at %s, interior %d faces", bigon.kind, bigon.turning, len(bigon.interior))
    return bigon


def find_monogons(
    S: SurfaceGraph, R: Realization, max_length: int | None = None, eps: float | None = None
) -> list[tuple[int, ...]]:
    """Simple dual cycles with exactly one turning point (exhaustive search)."""
    G = nx.Graph(dual_graph(S))
    out = []
    for faces in nx.simple_cycles(G, length_bound=max_length):
        if len(faces) < 3:
            continue
        if count_turning_points(S, R, DualCycle.from_faces(S, faces), eps) == 1:
            out.append(tuple(faces))
    return out


##################################################################################
# Interior structure
##################################################################################


# edge lines allowed inside a minimal square bigon, in the (h, v, h x v) frame
_SQUARE_BIGON_LINES = np.array(
    [
        (1, 0, 0),
        (0, 1, 0),
        (0, 0, 1),
        (SQRT_HALF, SQRT_HALF, 0),
        (SQRT_HALF, -SQRT_HALF, 0),
        (SQRT_HALF, 0, SQRT_HALF),
        (SQRT_HALF, 0, -SQRT_HALF),
        (0, SQRT_HALF, SQRT_HALF),
        (0, SQRT_HALF, -SQRT_HALF),
    ]
)


@dataclass
class StructureReport:
    """Outcome of :func:`check_interior_structure`.

    ``octagons`` maps each boundary octagon to the frame directions of the
    three other bands through it, in cyclic order.
    """

    kind: BigonKind
    prism_structured: bool = False
    directions: list[tuple[float, float, float]] = field(default_factory=list)
    octagons: dict[int, list[tuple[float, float, float]]] = field(default_factory=dict)


def _normalize_line(v: np.ndarray) -> tuple[float, float, float]:
    for x in v:
        if abs(x) > 1e-9:
            v = v if x > 0 else -v
            break
    return tuple(round(float(x), 9) + 0.0 for x in v)


def band_frame(bigon: Bigon) -> np.ndarray:
    """Rows h, v, h x v built from the two band directions."""
    h = np.asarray(bigon.bands[0].direction, dtype=float)
    v = np.asarray(bigon.bands[1].direction, dtype=float)
    v = v - np.dot(v, h) * h
    v = v / np.linalg.norm(v)
    return np.vstack([h, v, np.cross(h, v)])


def check_interior_structure(
    S: SurfaceGraph, R: Realization, bigon: Bigon, eps: float | None = None
) -> StructureReport:
    """Check the structure a minimal bigon on a sphere must have.

    Octagon bigons must be part of an octagonal prism: every interior face
    other than the turning points is a square touching both octagons.
    Square bigons may only have interior edges along the allowed lines of
    the band frame; boundary octagons are reported with their three other
    band directions.

    Raises:
        LemmaViolation: The interior does not have the required structure.
    """
    eps = eps_coord(eps)
    report = StructureReport(bigon.kind)
    x, y = bigon.turning
    if bigon.kind == BigonKind.OCTAGON:
        for f in sorted(bigon.interior - {x, y}):
            if S.face_degree(f) != 4:
                raise LemmaViolation(f"face {f} inside an octagon bigon has degree {S.face_degree(f)}", f)
            nbrs = set(S.face_neighbors(f))
            if x not in nbrs or y not in nbrs:
                raise LemmaViolation(f"square {f} does not touch both turning octagons", f)
        report.prism_structured = True
        return report
    if bigon.kind == BigonKind.MIXED:
        raise MixedBigon(f"bigon has turning points {bigon.turning} of different degrees")

    frame = band_frame(bigon)
    seen = set()
    for f in sorted(bigon.interior):
        for e in S.face_edges(f):
            local = frame @ _edge_vector(S, R, e)
            if not np.any(np.abs(np.abs(_SQUARE_BIGON_LINES @ local) - 1.0) <= max(eps, 1e-6)):
                raise LemmaViolation(f"edge {e} of face {f} has direction {np.round(local, 6)}", (f, e))
            line = _normalize_line(local)
            if line not in seen:
                seen.add(line)
                report.directions.append(line)
    report.directions.sort()

    for i, f in enumerate(bigon.cycle.faces):
        if S.face_degree(f) != 8 or f in (x, y):
            continue
        entry, _ = bigon.cycle.entry_exit(i)
        edges = S.face_edges(f)
        start = edges.index(entry)
        report.octagons[f] = [_normalize_line(frame @ _edge_vector(S, R, edges[(start + j) % 8])) for j in (1, 2, 3)]
    return report
