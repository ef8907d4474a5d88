"""Combinatorial surface graphs.

A :class:`SurfaceGraph` is a closed, oriented, connected half-edge structure
built from a list of cyclic vertex lists (one per face). Halfedges are numbered
face by face in input order: halfedge ``face_he[f] + i`` runs from the i-th to
the (i+1)-th vertex of face ``f``. Edges are numbered by the first halfedge that
mentions them. Every tie in this package is broken by the smallest index.

Example:
    Building a cube::

        from rpsurf.surface_core import build_surface, euler_characteristic

        cube = build_surface([
            (0, 3, 2, 1), (4, 5, 6, 7), (0, 1, 5, 4),
            (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7),
        ])
        assert (cube.n_vertices, cube.n_edges, cube.n_faces) == (8, 12, 6)
        assert euler_characteristic(cube) == 2
"""

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx

from .errors import (
    DegenerateVertex,
    DisconnectedSurface,
    NonManifold,
    NonOrientable,
    OddEulerCharacteristic,
    OpenEdge,
    OverusedEdge,
    SurfaceError,
)

logger = logging.getLogger(__name__)

DualGraph = nx.MultiGraph


@dataclass(frozen=True)
class Violation:
    """One entry of a validation report."""

    kind: str
    items: tuple
    detail: str = ""

    def __str__(self) -> str:
        text = f"{self.kind} {self.items}"
        return f"{text}: {self.detail}" if self.detail else text


@dataclass
class ValidationReport:
    """List of violations; an empty report means the check passed."""

    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, items: Iterable, detail: str = "") -> None:
        self.violations.append(Violation(kind, tuple(items), detail))

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def extend(self, other: "ValidationReport") -> "ValidationReport":
        self.violations.extend(other.violations)
        return self

    def __len__(self) -> int:
        return len(self.violations)


class SurfaceGraph:
    """Immutable closed oriented surface graph.

    Use :func:`build_surface` to construct one; the constructor assumes its
    arguments were validated.

    Attributes:
        faces (tuple[tuple[int, ...], ...]): Cyclic vertex list per face.
        he_origin, he_twin, he_next, he_face, he_edge (tuple[int, ...]):
            Per-halfedge origin vertex, twin, next halfedge in the face loop,
            incident face and undirected edge index.
        face_he (tuple[int, ...]): First halfedge of each face.
        vertex_he (tuple[int, ...]): One outgoing halfedge per vertex.
        edge_he (tuple[int, ...]): Lower-index halfedge of each edge.
    """

    def __init__(self, faces, he_origin, he_twin, he_next, he_face, he_edge, face_he, vertex_he, edge_he):
        self.faces = faces
        self.he_origin = he_origin
        self.he_twin = he_twin
        self.he_next = he_next
        self.he_face = he_face
        self.he_edge = he_edge
        self.face_he = face_he
        self.vertex_he = vertex_he
        self.edge_he = edge_he
        self._directed = {(he_origin[h], he_origin[he_next[h]]): h for h in range(len(he_origin))}

    def __repr__(self) -> str:
        return f"SurfaceGraph(V={self.n_vertices}, E={self.n_edges}, F={self.n_faces})"

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_he)

    @property
    def n_edges(self) -> int:
        return len(self.edge_he)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_halfedges(self) -> int:
        return len(self.he_origin)

    def he_dest(self, h: int) -> int:
        return self.he_origin[self.he_next[h]]

    def halfedge(self, u: int, v: int) -> int | None:
        """Halfedge running from ``u`` to ``v``, or None."""
        return self._directed.get((u, v))

    def edge_index(self, u: int, v: int) -> int | None:
        h = self._directed.get((u, v))
        return None if h is None else self.he_edge[h]

    def edge_vertices(self, e: int) -> tuple[int, int]:
        h = self.edge_he[e]
        return self.he_origin[h], self.he_dest(h)

    def edge_faces(self, e: int) -> tuple[int, int]:
        h = self.edge_he[e]
        return self.he_face[h], self.he_face[self.he_twin[h]]

    def face_degree(self, f: int) -> int:
        return len(self.faces[f])

    def face_halfedges(self, f: int) -> list[int]:
        start = self.face_he[f]
        return list(range(start, start + len(self.faces[f])))

    def face_edges(self, f: int) -> list[int]:
        return [self.he_edge[h] for h in self.face_halfedges(f)]

    def face_neighbors(self, f: int) -> list[int]:
        """Faces across each edge of ``f``, in boundary order."""
        return [self.he_face[self.he_twin[h]] for h in self.face_halfedges(f)]

    def vertex_halfedges(self, v: int) -> list[int]:
        """Outgoing halfedges of ``v`` in rotation order."""
        start = self.vertex_he[v]
        out = [start]
        h = self.he_next[self.he_twin[start]]
        while h != start:
            out.append(h)
            h = self.he_next[self.he_twin[h]]
        return out

    def vertex_degree(self, v: int) -> int:
        return len(self.vertex_halfedges(v))

    def vertex_faces(self, v: int) -> list[int]:
        """Faces around ``v`` in rotation order."""
        return [self.he_face[h] for h in self.vertex_halfedges(v)]

    def vertex_neighbors(self, v: int) -> list[int]:
        return [self.he_dest(h) for h in self.vertex_halfedges(v)]

    def degree_histogram(self) -> dict[int, int]:
        hist: dict[int, int] = defaultdict(int)
        for face in self.faces:
            hist[len(face)] += 1
        return dict(sorted(hist.items()))

    def face_degrees(self) -> set[int]:
        return {len(face) for face in self.faces}


##################################################################################
# Construction
##################################################################################


def build_surface(face_cycles: Sequence[Sequence[int]], n_vertices: int | None = None) -> SurfaceGraph:
    """Build and validate a closed oriented surface graph.

    Args:
        face_cycles: One cyclic vertex list per face. Vertex indices must be
            dense, ``0 .. n_vertices-1``.
        n_vertices: Vertex count; defaults to one more than the largest index.

    Returns:
        SurfaceGraph: The validated surface.

    Raises:
        OpenEdge: An edge is used by only one face.
        OverusedEdge: An edge is used by more than two faces.
        NonOrientable: An edge is traversed twice in the same direction.
        NonManifold: A vertex link is not a single cycle, a vertex is unused,
            or a face repeats an edge.
        DegenerateVertex: A vertex has degree below three.
        DisconnectedSurface: The faces form more than one component.
    """
    faces = tuple(tuple(int(v) for v in cycle) for cycle in face_cycles)
    if not faces:
        raise SurfaceError("surface has no faces")
    for f, face in enumerate(faces):
        if len(face) < 3:
            raise SurfaceError(f"face {f} has fewer than three vertices")
        for i, v in enumerate(face):
            if v < 0:
                raise SurfaceError(f"face {f} uses negative vertex index {v}")
            if v == face[(i + 1) % len(face)]:
                raise NonManifold(f"face {f} has a loop edge at vertex {v}")
    if n_vertices is None:
        n_vertices = 1 + max(max(face) for face in faces)

    he_origin: list[int] = []
    he_face: list[int] = []
    he_next: list[int] = []
    face_he: list[int] = []
    for f, face in enumerate(faces):
        start = len(he_origin)
        face_he.append(start)
        k = len(face)
        for i, v in enumerate(face):
            he_origin.append(v)
            he_face.append(f)
            he_next.append(start + (i + 1) % k)

    uses: dict[tuple[int, int], list[int]] = defaultdict(list)
    for h, u in enumerate(he_origin):
        v = he_origin[he_next[h]]
        uses[(min(u, v), max(u, v))].append(h)

    for pair, hs in uses.items():
        if len(hs) == 1:
            raise OpenEdge(f"edge {pair} is used by only one face (face {he_face[hs[0]]})")
        if len(hs) > 2:
            raise OverusedEdge(f"edge {pair} is used by {len(hs)} faces")
    he_twin = [-1] * len(he_origin)
    for pair, (h1, h2) in uses.items():
        if he_origin[h1] == he_origin[h2]:
            raise NonOrientable(
                f"edge {pair} is traversed in the same direction by faces {he_face[h1]} and {he_face[h2]}"
            )
        if he_face[h1] == he_face[h2]:
            raise NonManifold(f"face {he_face[h1]} uses edge {pair} twice")
        he_twin[h1], he_twin[h2] = h2, h1

    he_edge = [-1] * len(he_origin)
    edge_he: list[int] = []
    for h in range(len(he_origin)):
        if he_edge[h] < 0:
            he_edge[h] = he_edge[he_twin[h]] = len(edge_he)
            edge_he.append(h)

    outgoing: list[list[int]] = [[] for _ in range(n_vertices)]
    for h, u in enumerate(he_origin):
        if u >= n_vertices:
            raise SurfaceError(f"vertex index {u} out of range for {n_vertices} vertices")
        outgoing[u].append(h)
    vertex_he = []
    for v, hs in enumerate(outgoing):
        if not hs:
            raise NonManifold(f"vertex {v} is not used by any face")
        start = min(hs)
        orbit = 1
        h = he_next[he_twin[start]]
        while h != start:
            orbit += 1
            h = he_next[he_twin[h]]
        if orbit != len(hs):
            raise NonManifold(f"vertex {v} has {len(hs)} incident edges in more than one fan")
        if len(hs) < 3:
            raise DegenerateVertex(f"vertex {v} has degree {len(hs)}")
        vertex_he.append(start)

    graph = nx.Graph()
    graph.add_nodes_from(range(len(faces)))
    graph.add_edges_from((he_face[h], he_face[he_twin[h]]) for h in edge_he)
    if not nx.is_connected(graph):
        raise DisconnectedSurface(
            f"faces form {nx.number_connected_components(graph)} connected components"
        )

    surface = SurfaceGraph(
        faces,
        tuple(he_origin),
        tuple(he_twin),
        tuple(he_next),
        tuple(he_face),
        tuple(he_edge),
        tuple(face_he),
        tuple(vertex_he),
        tuple(edge_he),
    )
    logger.debug("Built %r", surface)
    return surface


def orient_faces(face_cycles: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Reverse faces as needed so that every shared edge is traversed oppositely.

    The first face of each connected component keeps its orientation.

    Raises:
        NonOrientable: No coherent orientation exists.
    """
    faces = [tuple(c) for c in face_cycles]
    by_edge: dict[frozenset, list[int]] = defaultdict(list)
    for f, face in enumerate(faces):
        for i, u in enumerate(face):
            by_edge[frozenset((u, face[(i + 1) % len(face)]))].append(f)

    def directed(face):
        return {(u, face[(i + 1) % len(face)]) for i, u in enumerate(face)}

    done = [False] * len(faces)
    for seed in range(len(faces)):
        if done[seed]:
            continue
        done[seed] = True
        queue = deque([seed])
        while queue:
            f = queue.popleft()
            fdir = directed(faces[f])
            for u, v in sorted(fdir):
                for g in by_edge[frozenset((u, v))]:
                    if g == f:
                        continue
                    agrees = (u, v) not in directed(faces[g])
                    if done[g]:
                        if not agrees:
                            raise NonOrientable(f"faces {f} and {g} cannot be oriented coherently")
                        continue
                    if not agrees:
                        faces[g] = tuple(reversed(faces[g]))
                    done[g] = True
                    queue.append(g)
    return faces


##################################################################################
# Invariants
##################################################################################


def euler_characteristic(S: SurfaceGraph) -> int:
    return S.n_vertices - S.n_edges + S.n_faces


def genus(S: SurfaceGraph) -> int:
    """Genus of a connected orientable surface, ``(2 - chi) / 2``."""
    chi = euler_characteristic(S)
    if chi % 2:
        raise OddEulerCharacteristic(f"Euler characteristic {chi} is odd")
    return (2 - chi) // 2


def validate_proper(S: SurfaceGraph) -> ValidationReport:
    """Report face pairs whose closures meet in more than a vertex or an edge.

    Also reports faces that visit a vertex twice (closure not a disk).
    """
    report = ValidationReport()
    vertex_sets = [set(face) for face in S.faces]
    edge_sets = [set(S.face_edges(f)) for f in range(S.n_faces)]
    for f, face in enumerate(S.faces):
        if len(vertex_sets[f]) != len(face):
            report.add("non-regular-face", (f,), "face visits a vertex more than once")

    pairs: set[tuple[int, int]] = set()
    for v in range(S.n_vertices):
        around = sorted(set(S.vertex_faces(v)))
        for i, f in enumerate(around):
            for g in around[i + 1:]:
                pairs.add((f, g))
    for f, g in sorted(pairs):
        shared_v = vertex_sets[f] & vertex_sets[g]
        shared_e = edge_sets[f] & edge_sets[g]
        if not shared_e and len(shared_v) <= 1:
            continue
        if len(shared_e) == 1 and len(shared_v) == 2:
            continue
        report.add(
            "improper-pair",
            (f, g),
            f"share {len(shared_e)} edge(s) and {len(shared_v)} vertices",
        )
    return report


def face_generations(S: SurfaceGraph, f: int, k: int) -> set[int]:
    """First (k=1) or second (k=2) generation faces around ``f``.

    The first generation shares an edge with ``f``; the second generation
    shares an edge with a first-generation face and is neither ``f`` nor in
    the first generation.
    """
    if k not in (1, 2):
        raise ValueError(f"generation must be 1 or 2, got {k}")
    first = set(S.face_neighbors(f)) - {f}
    if k == 1:
        return first
    second = set()
    for g in first:
        second.update(S.face_neighbors(g))
    return second - first - {f}


def dual_graph(S: SurfaceGraph) -> DualGraph:
    """Dual multigraph: one node per face, one arc per edge keyed by the edge index."""
    G = nx.MultiGraph()
    for f in range(S.n_faces):
        G.add_node(f, degree=S.face_degree(f))
    for e in range(S.n_edges):
        f, g = S.edge_faces(e)
        G.add_edge(f, g, key=e, edge=e)
    return G


##################################################################################
# Cycles
##################################################################################


@dataclass(frozen=True)
class Cycle:
    """Closed walk of alternating vertices and edges.

    ``vertices`` is closed (first equals last) and ``edges[i]`` joins
    ``vertices[i]`` and ``vertices[i+1]``.
    """

    vertices: tuple[int, ...]
    edges: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) != len(self.edges) + 1:
            raise SurfaceError("cycle needs one more vertex entry than edges")
        if self.vertices[0] != self.vertices[-1]:
            raise SurfaceError("cycle is not closed")
        if len(set(self.edges)) != len(self.edges):
            raise SurfaceError("cycle repeats an edge")

    @classmethod
    def from_vertices(cls, S: SurfaceGraph, vertices: Sequence[int]) -> "Cycle":
        """Build a cycle from a vertex loop (closing vertex optional)."""
        vs = list(vertices)
        if vs[0] != vs[-1]:
            vs.append(vs[0])
        edges = []
        for u, v in zip(vs, vs[1:]):
            e = S.edge_index(u, v)
            if e is None:
                raise SurfaceError(f"vertices {u} and {v} are not adjacent")
            edges.append(e)
        return cls(tuple(vs), tuple(edges))

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def loop(self) -> tuple[int, ...]:
        """Vertices without the repeated closing vertex."""
        return self.vertices[:-1]

    @property
    def is_simple(self) -> bool:
        return len(set(self.loop)) == len(self.loop)

    def directed_pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.vertices, self.vertices[1:]))

    def reversed(self) -> "Cycle":
        return Cycle(tuple(reversed(self.vertices)), tuple(reversed(self.edges)))


def region_boundaries(S: SurfaceGraph, faces: Iterable[int]) -> list[Cycle]:
    """Boundary cycles of a face region, each traversed as its faces traverse it.

    Cycles are ordered by their least halfedge.

    Raises:
        SurfaceError: The region is empty or closed.
    """
    region = set(faces)
    boundary = [
        h for f in sorted(region) for h in S.face_halfedges(f) if S.he_face[S.he_twin[h]] not in region
    ]
    if not boundary:
        raise SurfaceError("region has no boundary")
    remaining = set(boundary)
    cycles = []
    for start in boundary:
        if start not in remaining:
            continue
        loop = [start]
        remaining.discard(start)
        h = start
        while True:
            cand = S.he_next[h]
            while S.he_face[S.he_twin[cand]] in region:
                cand = S.he_next[S.he_twin[cand]]
            if cand == start:
                break
            loop.append(cand)
            remaining.discard(cand)
            h = cand
        vertices = tuple(S.he_origin[h] for h in loop) + (S.he_origin[loop[0]],)
        cycles.append(Cycle(vertices, tuple(S.he_edge[h] for h in loop)))
    return cycles


def region_boundary(S: SurfaceGraph, faces: Iterable[int]) -> Cycle:
    """The single boundary cycle of a face region, traversed as its faces traverse it.

    Raises:
        SurfaceError: The region is empty, closed, or has several boundary cycles.
    """
    cycles = region_boundaries(S, faces)
    if len(cycles) > 1:
        raise SurfaceError(f"region has {len(cycles)} boundary cycles")
    return cycles[0]


##################################################################################
# Isomorphism
##################################################################################


@dataclass(frozen=True)
class Correspondence:
    """Incidence-preserving bijection from a first surface onto a second.

    When ``reflected`` is true the second surface matched only with reversed
    orientation; ``halfedges`` then refers to the reversed face list.
    """

    vertices: dict[int, int]
    faces: dict[int, int]
    halfedges: dict[int, int]
    reflected: bool = False


def _incidence_digraph(S: SurfaceGraph) -> nx.DiGraph:
    G = nx.DiGraph()
    for h in range(S.n_halfedges):
        G.add_node(("h", h), kind="h")
    for v in range(S.n_vertices):
        G.add_node(("v", v), kind="v")
    for f in range(S.n_faces):
        G.add_node(("f", f), kind="f")
    for e in range(S.n_edges):
        G.add_node(("e", e), kind="e")
    for h in range(S.n_halfedges):
        G.add_edge(("h", h), ("h", S.he_next[h]))
        G.add_edge(("h", h), ("e", S.he_edge[h]))
        G.add_edge(("h", h), ("v", S.he_origin[h]))
        G.add_edge(("h", h), ("f", S.he_face[h]))
    return G


def _match(S1: SurfaceGraph, S2: SurfaceGraph) -> dict | None:
    return nx.vf2pp_isomorphism(_incidence_digraph(S1), _incidence_digraph(S2), node_label="kind")


def is_isomorphic(S1: SurfaceGraph, S2: SurfaceGraph, allow_reflection: bool = True) -> Correspondence | None:
    """Find an incidence-preserving bijection between two surfaces.

    Orientation-preserving matches are tried first; with ``allow_reflection``
    the second surface is also tried with every face reversed.

    Returns:
        Correspondence | None: The bijection, or None when the surfaces differ.
    """
    if (S1.n_vertices, S1.n_edges, S1.n_faces) != (S2.n_vertices, S2.n_edges, S2.n_faces):
        return None
    if S1.degree_histogram() != S2.degree_histogram():
        return None
    if sorted(S1.vertex_degree(v) for v in range(S1.n_vertices)) != sorted(
        S2.vertex_degree(v) for v in range(S2.n_vertices)
    ):
        return None
    candidates = [(S2, False)]
    if allow_reflection:
        candidates.append((build_surface([tuple(reversed(face)) for face in S2.faces], S2.n_vertices), True))
    for target, reflected in candidates:
        mapping = _match(S1, target)
        if mapping is None:
            continue
        by_kind: dict[str, dict[int, int]] = {"h": {}, "v": {}, "f": {}, "e": {}}
        for (kind, i), (_, j) in mapping.items():
            by_kind[kind][i] = j
        return Correspondence(by_kind["v"], by_kind["f"], by_kind["h"], reflected)
    return None
