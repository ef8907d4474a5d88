import numpy as np
import pytest

from rpsurf.errors import (
    AmbiguousFit,
    DegreeMismatch,
    GeneratorError,
    InvalidPairing,
    RingDoesNotClose,
)
from rpsurf.generators import (
    BRICK_KINDS,
    Brick,
    CompoundBuilder,
    SolidKind,
    brick_union,
    cancel_facets,
    counterexample,
    default_pairing,
    dodecahedral_ring,
    dodecahedral_torus,
    glue,
    great_dodecahedron,
    make_solid,
    place_brick,
    polycube,
    random_compound,
)
from rpsurf.geometry import RigidMotion, face_center, unit_normal, validate_realization
from rpsurf.io_formats import load_pairing
from rpsurf.labels import Labels
from rpsurf.settings import Settings
from rpsurf.surface_core import genus, is_isomorphic, validate_proper
from rpsurf.utils import polygon_key


SOLIDS = {
    SolidKind.CUBE: ((8, 12, 6), {4: 6}),
    SolidKind.DODECAHEDRON: ((20, 30, 12), {5: 12}),
    SolidKind.OCTAGONAL_PRISM: ((16, 24, 10), {4: 8, 8: 2}),
    SolidKind.HEXAGONAL_PRISM: ((12, 18, 8), {4: 6, 6: 2}),
    SolidKind.TRUNCATED_OCTAHEDRON: ((24, 36, 14), {4: 6, 6: 8}),
    SolidKind.TRUNCATED_CUBOCTAHEDRON: ((48, 72, 26), {4: 12, 6: 8, 8: 6}),
}


def translated_cube(x: float, y: float = 0.0, z: float = 0.0) -> Brick:
    return Brick(SolidKind.CUBE, RigidMotion(np.eye(3), (x, y, z)))


class TestMakeSolid:
    """Canonical unit-edge solids."""

    @pytest.mark.parametrize("kind", list(SOLIDS))
    def test_counts(self, kind):
        S, _ = make_solid(kind)
        counts, histogram = SOLIDS[kind]
        assert (S.n_vertices, S.n_edges, S.n_faces) == counts
        assert S.degree_histogram() == histogram
        assert genus(S) == 0

    @pytest.mark.parametrize("kind", list(SOLIDS))
    def test_realization_is_valid(self, kind):
        S, R = make_solid(kind)
        assert validate_realization(S, R).ok
        assert validate_proper(S).ok

    @pytest.mark.parametrize("kind", list(SOLIDS))
    def test_faces_point_outward(self, kind):
        S, R = make_solid(kind)
        centroid = R.coords.mean(axis=0)
        for face in S.faces:
            pts = R.points(face)
            assert np.dot(unit_normal(pts), face_center(pts) - centroid) > 0

    def test_accepts_strings(self):
        S, _ = make_solid("octagonal-prism")
        assert S.n_faces == 10

    def test_cube_position(self):
        _, R = make_solid(SolidKind.CUBE)
        assert R.coords.min() == 0.0
        assert R.coords.max() == 1.0


class TestBricks:
    def test_only_three_kinds(self):
        assert len(BRICK_KINDS) == 3
        with pytest.raises(GeneratorError):
            Brick(SolidKind.TRUNCATED_OCTAHEDRON, RigidMotion.identity())

    def test_facets_follow_placement(self):
        brick = translated_cube(2)
        assert len(brick.facets()) == 6
        assert np.allclose(brick.center(), (2.5, 0.5, 0.5))

    def test_place_behind_face(self, cube):
        """A cube behind a face of the unit cube is the unit cube itself."""
        S, R = cube
        placements = place_brick(SolidKind.CUBE, R.points(S.faces[0]))
        assert len(placements) == 1
        placed = Brick(SolidKind.CUBE, placements[0])
        assert polygon_key(placed.vertices(), 1e-5) == polygon_key(R.coords, 1e-5)

    def test_place_prism_on_square(self, prism):
        S, R = prism
        square = next(f for f in range(S.n_faces) if S.face_degree(f) == 4)
        placements = place_brick(SolidKind.OCTAGONAL_PRISM, R.points(S.faces[square]))
        home = polygon_key(R.coords, 1e-5)
        assert any(polygon_key(Brick(SolidKind.OCTAGONAL_PRISM, m).vertices(), 1e-5) == home for m in placements)
        assert all(m.is_proper for m in placements)

    def test_no_placement_for_wrong_degree(self, dodecahedron):
        S, R = dodecahedron
        assert place_brick(SolidKind.CUBE, R.points(S.faces[0])) == []


class TestFacetCancellation:
    """Coincident facets of opposite orientation cancel."""

    def test_two_cubes(self):
        result = cancel_facets([translated_cube(0), translated_cube(1)])
        assert len(result.survivors) == 10
        assert len(result.gluings) == 1
        assert result.problems == []

    def test_same_cube_twice(self):
        result = cancel_facets([translated_cube(0), translated_cube(0)])
        assert len(result.problems) == 6
        assert result.survivors == []

    def test_brick_union_matches_polycube(self, two_cubes):
        S, _ = brick_union([translated_cube(0), translated_cube(1)])
        assert is_isomorphic(S, two_cubes[0]) is not None

    def test_brick_union_rejects_overlap(self):
        with pytest.raises(GeneratorError):
            brick_union([translated_cube(0), translated_cube(0)])


class TestPolycubes:
    def test_box(self, two_cubes):
        S, R = two_cubes
        assert (S.n_vertices, S.n_edges, S.n_faces) == (12, 20, 10)
        assert validate_realization(S, R).ok

    def test_slab(self, four_cubes):
        S, R = four_cubes
        assert (S.n_vertices, S.n_edges, S.n_faces) == (18, 32, 16)
        assert validate_realization(S, R).ok

    def test_tromino(self):
        S, _ = polycube([(0, 0, 0), (1, 0, 0), (0, 1, 0)])
        assert S.n_faces == 14
        assert genus(S) == 0


class TestGlue:
    """Facet-to-facet gluing."""

    def test_cube_on_cube(self, cube, two_cubes):
        S, R = cube
        glued, realization = glue(S, R, 1, S, R, 0, shift=0)
        assert glued.n_faces == 10
        assert is_isomorphic(glued, two_cubes[0]) is not None
        assert validate_realization(glued, realization).ok

    def test_every_alignment_fits_a_cube(self, cube):
        S, R = cube
        with pytest.raises(AmbiguousFit):
            glue(S, R, 1, S, R, 0, shift=None)

    def test_degree_mismatch(self, cube, prism):
        S, R = cube
        P, RP = prism
        octagon = next(f for f in range(P.n_faces) if P.face_degree(f) == 8)
        with pytest.raises(DegreeMismatch):
            glue(P, RP, octagon, S, R, 0)

    def test_builder(self, two_dodecahedra):
        S, R = two_dodecahedra.surface
        assert S.n_faces == 22
        assert len(two_dodecahedra.bricks) == 2
        assert [two_dodecahedra.face_owner(f) for f in range(S.n_faces)] == [0] * 11 + [1] * 11
        assert validate_realization(S, R).ok
        assert is_isomorphic(S, brick_union(two_dodecahedra.bricks)[0]) is not None

    def test_builder_wrong_degree(self):
        builder = CompoundBuilder(SolidKind.CUBE)
        with pytest.raises(DegreeMismatch):
            builder.add(SolidKind.DODECAHEDRON, face=0)

    def test_random_compound(self):
        builder = random_compound([SolidKind.CUBE] * 3, seed=3)
        S, R = builder.surface
        assert len(builder.bricks) == 3
        assert genus(S) == 0
        assert S.n_faces == 14


class TestNamedSurfaces:
    def test_great_dodecahedron(self):
        S, _ = great_dodecahedron()
        assert (S.n_vertices, S.n_edges, S.n_faces) == (12, 30, 12)
        assert S.degree_histogram() == {5: 12}
        assert genus(S) == 4

    def test_ring_needs_three(self):
        with pytest.raises(RingDoesNotClose):
            dodecahedral_ring(2)

    def test_no_ring_of_three(self):
        with pytest.raises(RingDoesNotClose):
            dodecahedral_ring(3)

    def test_unknown_length_gets_a_small_budget(self):
        Settings().set(Labels.TORUS_TRIAL_BUDGET, 50)
        with pytest.raises(RingDoesNotClose, match="50 nodes searched"):
            dodecahedral_ring(9)

    def test_torus_of_eight(self):
        S, _ = dodecahedral_torus(8)
        assert S.n_faces == 8 * 12 - 2 * 8
        assert S.degree_histogram() == {5: 80}
        assert genus(S) == 1


class TestCounterexamples:
    """Hypercubes of truncated solids joined by tubes."""

    def test_tco3(self):
        S, _ = counterexample("tco3")
        assert genus(S) == 17
        assert S.face_degrees() == {4, 6}

    def test_to4(self):
        S, _ = counterexample("to4")
        assert genus(S) == 49
        assert S.face_degrees() == {4}

    def test_tco4(self):
        S, _ = counterexample("tco4")
        assert genus(S) == 49
        assert S.face_degrees() == {4, 8}

    def test_facing_tubes_are_unit_squares(self):
        S, R = counterexample("tco3")
        report = validate_realization(S, R)
        assert report.kinds() <= {"non-unit-edge", "non-regular-face"}
        # one ring of eight short rectangles on each of the twelve tubes running back through their nodes
        irregular = [v for v in report.violations if v.kind == "non-regular-face"]
        assert len(irregular) == 12 * 8
        assert all(S.face_degree(v.items[0]) == 4 for v in irregular)

    def test_default_pairing_size(self):
        assert len(default_pairing("tco3")) == 24
        assert len(default_pairing("tco4")) == 64

    def test_unknown_kind(self):
        with pytest.raises(GeneratorError):
            counterexample("cube3")

    def test_bad_pairing(self, fixtures_dir):
        pairing = load_pairing((fixtures_dir / "pairing_bad.yaml").read_text())
        with pytest.raises(InvalidPairing):
            counterexample("tco3", pairing)

    def test_incomplete_pairing(self):
        with pytest.raises(InvalidPairing):
            counterexample("tco3", default_pairing("tco3")[:-1])
