import numpy as np
import pytest

from rpsurf.bands import BigonKind, all_bands, enumerate_bigons, find_minimal_bigon
from rpsurf.errors import (
    BoundaryMismatch,
    NonSeparating,
    NotCubeCorner,
    NotPrismHalf,
    OverReduction,
    SingleBrick,
    SurfaceError,
    SurgeryError,
    WrongKind,
)
from rpsurf.generators import Brick, CompoundBuilder, SolidKind, make_solid
from rpsurf.geometry import Realization, RigidMotion, validate_realization
from rpsurf.labels import Labels
from rpsurf.surface_core import Cycle, build_surface, face_generations, genus, is_isomorphic, region_boundary
from rpsurf.surgery import (
    band_surgery,
    brick_removal_surgery,
    bridging_faces,
    cube_flip,
    cut_along_cycle,
    find_dangling_pairs,
    octagon_removal_surgery,
    polyhedral_surgery,
    prism_flip,
    remove_brick,
    remove_dangling_pairs,
    swap_cap,
)


def corner(S, v=None):
    if v is None:
        v = next(v for v in range(S.n_vertices) if S.vertex_degree(v) == 3)
    return tuple(S.vertex_faces(v))


def prism_half(S):
    octagon = next(f for f in range(S.n_faces) if S.face_degree(f) == 8)
    return (octagon, *S.face_neighbors(octagon)[:4])


def cube_at(x: float) -> Brick:
    return Brick(SolidKind.CUBE, RigidMotion(np.eye(3), (x, 0, 0)))


class TestDanglingPairs:
    def test_none_on_a_solid(self, cube):
        assert find_dangling_pairs(*cube) == []

    def test_nothing_to_remove(self, cube):
        S, R = cube
        S2, R2, count = remove_dangling_pairs(S, R)
        assert count == 0
        assert S2 is S and R2 is R


class TestSwapCap:
    """Replacing a disk of faces by polygons on the same boundary."""

    def test_same_polygon(self, cube):
        S, R = cube
        S2, R2, count = swap_cap(S, R, [0], [R.points(S.faces[0])])
        assert count == 0
        assert is_isomorphic(S, S2, allow_reflection=False) is not None
        assert validate_realization(S2, R2).ok

    def test_reversed_polygon_is_reoriented(self, cube):
        S, R = cube
        S2, _, _ = swap_cap(S, R, [0], [R.points(S.faces[0])[::-1]])
        assert S2.n_faces == 6

    def test_detached_polygon(self, cube):
        S, R = cube
        with pytest.raises(BoundaryMismatch):
            swap_cap(S, R, [0], [R.points(S.faces[0]) + 5.0])

    def test_partial_cover(self, cube):
        S, R = cube
        half = R.points(S.faces[0])[:3]
        with pytest.raises(BoundaryMismatch):
            swap_cap(S, R, [0], [half])


class TestRemoveBrick:
    def test_box_to_cube(self, two_cubes):
        S, R = two_cubes
        S2, R2, record = remove_brick(S, R, cube_at(1))
        assert S2.n_faces == 6
        assert record.kind == "cube-removal"
        assert record.face_delta == -4
        assert len(record.removed_faces) == 5
        assert np.allclose(R2.coords.max(axis=0), (1, 1, 1))

    def test_custom_kind(self, two_cubes):
        S, R = two_cubes
        _, _, record = remove_brick(S, R, cube_at(0), Labels.CUBE_REMOVAL)
        assert record.kind == Labels.CUBE_REMOVAL
        assert record.brick.kind == SolidKind.CUBE
        assert np.allclose(record.motion.translation, 0)

    def test_single_brick(self, cube):
        with pytest.raises(SingleBrick):
            remove_brick(*cube, cube_at(0))

    def test_brick_elsewhere(self, two_cubes):
        with pytest.raises(SurgeryError):
            remove_brick(*two_cubes, cube_at(5))


class TestCutAndReglue:
    """Cutting along a vertex cycle and gluing the halves back."""

    def test_cut_cube(self, cube):
        S, R = cube
        H1, H2 = cut_along_cycle(S, R, Cycle.from_vertices(S, [0, 1, 2, 3]))
        assert sorted([H1.n_faces, H2.n_faces]) == [1, 5]
        assert H2.source_faces == (0,)
        assert H1.boundary == (0, 1, 2, 3)
        assert H2.boundary == (3, 2, 1, 0)

    def test_torus_meridian(self):
        faces = [(3 * i + j, 3 * ((i + 1) % 3) + j, 3 * ((i + 1) % 3) + (j + 1) % 3, 3 * i + (j + 1) % 3)
                 for i in range(3) for j in range(3)]
        S = build_surface(faces)
        R = Realization(np.zeros((9, 3)))
        with pytest.raises(NonSeparating):
            cut_along_cycle(S, R, Cycle.from_vertices(S, [0, 3, 6]))

    def test_reglue_dodecahedron_cap(self, dodecahedron):
        S, R = dodecahedron
        cap = {0} | face_generations(S, 0, 1)
        H1, H2 = cut_along_cycle(S, R, region_boundary(S, cap))
        assert H1.n_faces == H2.n_faces == 6
        S2, R2, record = polyhedral_surgery(H1, H2)
        assert record.kind == Labels.POLYHEDRAL
        assert record.notes["dangling_pairs"] == []
        assert is_isomorphic(S, S2) is not None
        assert validate_realization(S2, R2).ok

    def test_boundary_lengths_differ(self, cube, dodecahedron):
        S, R = cube
        H_cube, _ = cut_along_cycle(S, R, Cycle.from_vertices(S, [0, 1, 2, 3]))
        D, RD = dodecahedron
        _, H_dodeca = cut_along_cycle(D, RD, region_boundary(D, {0}))
        with pytest.raises(BoundaryMismatch):
            polyhedral_surgery(H_cube, H_dodeca)


class TestBandSurgery:
    def test_box_to_cube(self, two_cubes):
        S, R = two_cubes
        band = next(b for b in all_bands(S, R) if len(b) == 4)
        S2, R2, record = band_surgery(S, R, band)
        assert S2.n_faces == 6
        assert record.kind == Labels.BAND
        assert record.face_delta == -4
        assert np.allclose(np.abs(record.motion.translation), (1, 0, 0))
        assert validate_realization(S2, R2).ok

    def test_slab_to_box(self, four_cubes, two_cubes):
        S, R = four_cubes
        band = next(b for b in all_bands(S, R) if len(b) == 6)
        S2, _, _ = band_surgery(S, R, band)
        assert is_isomorphic(S2, two_cubes[0]) is not None

    def test_cube_band_leaves_nothing(self, cube):
        S, R = cube
        with pytest.raises(OverReduction):
            band_surgery(S, R, all_bands(S, R)[0])


class TestRemovalSurgeries:
    """Brick removals on minimal bigons."""

    def test_square_bigon_on_box(self, two_cubes):
        S, R = two_cubes
        bigon = find_minimal_bigon(S, R)
        assert bridging_faces(S, bigon)
        S2, R2, record = brick_removal_surgery(S, R, bigon)
        assert S2.n_faces == 6
        assert record.kind == Labels.CUBE_REMOVAL
        assert genus(S2) == 0
        assert validate_realization(S2, R2).ok

    def test_octagon_bigon_on_twin_prisms(self):
        builder = CompoundBuilder(SolidKind.OCTAGONAL_PRISM)
        builder.add(SolidKind.OCTAGONAL_PRISM, face=builder.faces_of_degree(4)[0])
        S, R = builder.surface
        for bigon in enumerate_bigons(S, R):
            if bigon.kind != BigonKind.OCTAGON:
                continue
            try:
                S2, R2, record = octagon_removal_surgery(S, R, bigon)
            except (SurgeryError, SurfaceError):
                continue
            break
        else:
            pytest.fail("no octagon bigon removes a prism")
        assert record.kind == Labels.OCTAGON_REMOVAL
        assert S2.degree_histogram() == {4: 8, 8: 2}
        assert validate_realization(S2, R2).ok

    def test_single_cube(self, cube):
        S, R = cube
        with pytest.raises(SingleBrick):
            brick_removal_surgery(S, R, find_minimal_bigon(S, R))

    def test_single_prism(self, prism):
        S, R = prism
        with pytest.raises(SingleBrick):
            octagon_removal_surgery(S, R, find_minimal_bigon(S, R))

    def test_kind_mismatch(self, cube, prism):
        with pytest.raises(WrongKind):
            octagon_removal_surgery(*cube, find_minimal_bigon(*cube))
        with pytest.raises(WrongKind):
            brick_removal_surgery(*prism, find_minimal_bigon(*prism))


class TestFlips:
    """Cube and prism flips keep dangling pairs for later cleanup."""

    def test_box_corner(self, two_cubes):
        S, R = two_cubes
        S2, R2, record = cube_flip(S, R, *corner(S))
        assert record.kind == Labels.CUBE_FLIP
        assert record.notes["inside"]
        assert S2.n_faces == 10
        assert len(find_dangling_pairs(S2, R2)) == 2
        S3, R3, count = remove_dangling_pairs(S2, R2)
        assert count == 2
        assert S3.n_faces == 6
        assert validate_realization(S3, R3).ok

    def test_slab_corner(self, four_cubes):
        S, R = four_cubes
        S2, R2, record = cube_flip(S, R, *corner(S))
        assert record.notes["inside"]
        assert len(find_dangling_pairs(S2, R2)) == 1
        S3, R3, count = remove_dangling_pairs(S2, R2)
        assert count == 1
        assert S3.n_faces == 14
        assert genus(S3) == 0
        assert validate_realization(S3, R3).ok

    def test_not_a_corner(self, cube):
        S, R = cube
        with pytest.raises(NotCubeCorner):
            cube_flip(S, R, 0, 1, 2)
        with pytest.raises(NotCubeCorner):
            cube_flip(S, R, 0, 0, 2)

    def test_prism_half(self, prism):
        S, R = prism
        S2, R2, record = prism_flip(S, R, prism_half(S))
        assert record.kind == Labels.PRISM_FLIP
        assert record.notes["inside"]
        assert S2.n_faces == 10
        assert find_dangling_pairs(S2, R2)

    def test_not_a_prism_half(self, prism):
        S, R = prism
        octagon = next(f for f in range(S.n_faces) if S.face_degree(f) == 8)
        ring = S.face_neighbors(octagon)
        with pytest.raises(NotPrismHalf):
            prism_flip(S, R, (octagon, ring[0], ring[2], ring[4], ring[6]))
        with pytest.raises(NotPrismHalf):
            prism_flip(S, R, ring[:5])

    def test_flip_on_other_kinds(self):
        S, R = make_solid(SolidKind.DODECAHEDRON)
        with pytest.raises(NotCubeCorner):
            cube_flip(S, R, *corner(S))
