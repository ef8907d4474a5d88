import logging

import numpy as np
import pytest

from rpsurf.decompose import (
    Certificate,
    Family,
    curvature_audit_5n,
    decompose,
    decompose_pent,
    decompose_square_oct,
    pentagon_regional_bound,
    regional_bound,
    verify_certificate,
)
from rpsurf.errors import (
    DecompositionError,
    GenusOutOfRange,
    NotPentagonal,
    NotSquareOct,
    UnsupportedDegrees,
)
from rpsurf.generators import (
    Brick,
    CompoundBuilder,
    SolidKind,
    counterexample,
    dodecahedral_torus,
    great_dodecahedron,
    make_solid,
    polycube,
    random_compound,
)
from rpsurf.geometry import AnglePi, Realization, RigidMotion, unit_normal
from rpsurf.labels import Labels
from rpsurf.surface_core import build_surface


def cube_at(x: float, y: float = 0.0, z: float = 0.0) -> Brick:
    return Brick(SolidKind.CUBE, RigidMotion(np.eye(3), (x, y, z)))


def barrel(n: int = 8):
    """Genus-0 graph: an n-gon cap on each end of two rings of pentagons.

    Every vertex has degree 3; the rim vertices of both n-gons have type
    (5^2,n) and all other vertices (5^3).
    """
    t = lambda i: i % n
    u = lambda i: n + i % n
    m = lambda i: 2 * n + i % n
    b = lambda i: 3 * n + i % n
    faces = [tuple(t(i) for i in range(n))]
    faces += [(t(i + 1), t(i), u(i), m(i), u(i + 1)) for i in range(n)]
    faces += [(m(i), u(i), m(i - 1), b(i - 1), b(i)) for i in range(n)]
    faces += [tuple(b(i) for i in reversed(range(n)))]
    return build_surface(faces, 4 * n)


@pytest.fixture
def prism_with_cubes():
    """Octagonal prism with cubes on two opposite lateral squares."""
    builder = CompoundBuilder(SolidKind.OCTAGONAL_PRISM)
    S, R = builder.surface
    first = builder.faces_of_degree(4)[0]
    normal = unit_normal(R.points(S.faces[first]))
    builder.add(SolidKind.CUBE, face=first)
    S, R = builder.surface
    opposite = next(
        f
        for f in builder.faces_of_degree(4)
        if builder.face_owner(f) == 0 and np.dot(unit_normal(R.points(S.faces[f])), normal) < -0.99
    )
    builder.add(SolidKind.CUBE, face=opposite)
    return builder.surface


class TestVerifyCertificate:
    """Rebuilding the brick union and matching it against the surface."""

    def test_single_cube(self, cube):
        report = verify_certificate(Certificate([cube_at(0)]), *cube)
        assert report.ok
        assert bool(report)
        assert (report.survivors, report.cancelled) == (6, 0)

    def test_two_cubes(self, two_cubes):
        report = verify_certificate(Certificate([cube_at(0), cube_at(1)]), *two_cubes)
        assert report.ok
        assert report.cancelled == 1
        assert len(report.gluings) == 1

    def test_order_does_not_matter(self, two_cubes):
        forward = verify_certificate(Certificate([cube_at(0), cube_at(1)]), *two_cubes)
        backward = verify_certificate(Certificate([cube_at(1), cube_at(0)]), *two_cubes)
        assert forward.ok == backward.ok

    def test_extra_brick(self, cube):
        report = verify_certificate(Certificate([cube_at(0), cube_at(1)]), *cube)
        assert not report.ok
        assert report.witness.startswith("extra-face")

    def test_missing_brick(self, two_cubes):
        report = verify_certificate(Certificate([cube_at(0)]), *two_cubes)
        assert not report.ok
        assert report.witness

    def test_duplicate_brick(self, cube):
        report = verify_certificate(Certificate([cube_at(0), cube_at(0)]), *cube)
        assert not report.ok
        assert "equal orientation" in report.witness

    def test_empty(self, cube):
        assert not verify_certificate(Certificate([]), *cube).ok

    def test_inward_orientation(self, cube):
        S, R = cube
        inward = build_surface([tuple(reversed(face)) for face in S.faces], S.n_vertices)
        assert verify_certificate(Certificate([cube_at(0)]), inward, R).ok

    def test_moved_surface(self, cube):
        S, R = cube
        report = verify_certificate(Certificate([cube_at(0)]), S, Realization(R.coords + 0.5))
        assert not report.ok


class TestPentagonal:
    """Dodecahedral decompositions."""

    def test_dodecahedron(self, dodecahedron):
        cert = decompose(*dodecahedron)
        assert len(cert) == 1
        assert cert.kinds() == {"dodecahedron": 1}
        assert cert.provenance[-1].kind == Labels.BASE_CASE

    def test_two_dodecahedra(self, two_dodecahedra):
        S, R = two_dodecahedra.surface
        cert = decompose_pent(S, R)
        assert len(cert) == 2
        assert cert.provenance[0].kind == Labels.DODECAHEDRON_REMOVAL
        assert verify_certificate(cert, S, R).ok
        assert cert.gluings

    def test_high_genus(self):
        S, R = great_dodecahedron()
        with pytest.raises(GenusOutOfRange):
            decompose_pent(S, R)

    def test_not_pentagonal(self, cube):
        with pytest.raises(NotPentagonal):
            decompose_pent(*cube)


class TestSquareOctagon:
    """Cube and prism decompositions."""

    @pytest.mark.parametrize(
        "cells",
        [
            [(0, 0, 0)],
            [(0, 0, 0), (1, 0, 0)],
            [(0, 0, 0), (1, 0, 0), (0, 1, 0)],
            [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 0)],
        ],
    )
    def test_polycubes(self, cells):
        S, R = polycube(cells)
        cert = decompose(S, R)
        assert len(cert) == len(cells)
        assert cert.kinds() == {"cube": len(cells)}
        assert verify_certificate(cert, S, R).ok

    def test_slab_records(self, four_cubes):
        cert = decompose(*four_cubes, family=Family.SQUARE_OCT)
        assert len(cert.provenance) == 4
        assert cert.provenance[-1].kind == Labels.BASE_CASE
        assert len(cert.gluings) == 4

    def test_prism(self, prism):
        cert = decompose(*prism)
        assert cert.kinds() == {"octagonal-prism": 1}

    def test_prism_with_cubes(self, prism_with_cubes):
        S, R = prism_with_cubes
        cert = decompose(S, R)
        assert cert.kinds() == {"cube": 2, "octagonal-prism": 1}
        assert verify_certificate(cert, S, R).ok

    def test_not_square_oct(self, dodecahedron):
        with pytest.raises(NotSquareOct):
            decompose_square_oct(*dodecahedron)

    def test_auto_rejects_other_degrees(self):
        S, R = make_solid(SolidKind.TRUNCATED_OCTAHEDRON)
        with pytest.raises(DecompositionError):
            decompose(S, R)

    def test_unknown_family(self, cube):
        with pytest.raises(ValueError):
            decompose(*cube, family="triangles")

    def test_counterexample_is_out_of_range(self):
        S, R = counterexample("to4")
        with pytest.raises(GenusOutOfRange):
            decompose_square_oct(S, R)


class TestRandomCompounds:
    """Random tree compounds decompose back into their bricks."""

    @pytest.mark.parametrize("seed,k", [(0, 3), (1, 4), (3, 9), (111, 13), (113, 15), (120, 8), (139, 13)])
    def test_dodecahedra(self, seed, k):
        S, R = random_compound([SolidKind.DODECAHEDRON] * k, seed=seed).surface
        cert = decompose_pent(S, R)
        assert len(cert) == k
        assert cert.kinds() == {"dodecahedron": k}
        assert verify_certificate(cert, S, R).ok

    @pytest.mark.parametrize("seed", range(4))
    def test_cubes(self, seed):
        S, R = random_compound([SolidKind.CUBE] * 3, seed=seed).surface
        cert = decompose_square_oct(S, R)
        assert cert.kinds() == {"cube": 3}
        assert verify_certificate(cert, S, R).ok

    def test_prism_and_cube(self):
        S, R = random_compound([SolidKind.OCTAGONAL_PRISM, SolidKind.CUBE], seed=5).surface
        cert = decompose(S, R)
        assert cert.kinds() == {"cube": 1, "octagonal-prism": 1}
        assert verify_certificate(cert, S, R).ok

    def test_dodecahedral_torus(self):
        S, R = dodecahedral_torus(8)
        cert = decompose_pent(S, R)
        assert cert.kinds() == {"dodecahedron": 8}
        assert cert.provenance[0].kind == Labels.RING_OPENING
        assert verify_certificate(cert, S, R).ok


class TestAuditBounds:
    def test_regional_bound(self):
        assert regional_bound(7) == AnglePi(-1, 10)
        assert regional_bound(8) == AnglePi(-11, 15)
        assert regional_bound(10) < regional_bound(9) < regional_bound(8)

    def test_pentagon_bound(self):
        assert pentagon_regional_bound(8) == AnglePi(-11, 24)
        assert pentagon_regional_bound(7) == AnglePi(-3, 7)


class TestCurvatureAudit:
    """Exact (5,7,8,9,10) audit."""

    def test_dodecahedron(self, dodecahedron):
        S, _ = dodecahedron
        report = curvature_audit_5n(S)
        assert report.ok
        assert report.genus == 0
        assert report.counts() == {Labels.POSITIVE: 12, Labels.ZERO: 0, Labels.NEGATIVE: 0}
        assert all(fa.curvature == AnglePi(1, 3) for fa in report.faces)
        assert all(region.bound is None for region in report.regions)
        assert report.genus_zero_contradiction is False

    def test_barrel(self, caplog):
        S = barrel(8)
        with caplog.at_level(logging.WARNING, logger="rpsurf.decompose"):
            report = curvature_audit_5n(S)
        assert report.genus == 0
        assert report.high_degree_faces == (0, 17)
        assert report.faces[0].curvature == AnglePi(2, 15)
        assert report.faces[1].curvature == AnglePi(7, 30)
        assert str(report.faces[0].profile[0]) == "(5^2,8)"
        top = next(region for region in report.regions if region.face == 0)
        assert top.total == AnglePi(2)
        assert top.bound == AnglePi(-11, 15)
        assert top.exceeds
        assert "regional-sum" in report.violations.kinds()
        assert "unrealizable-vertex" not in report.violations.kinds()
        assert report.genus_zero_contradiction is True
        assert "cannot be realized" in caplog.text

    def test_rim_vertices(self):
        """Rim vertices of the positive octagons have type (5^2,8)."""
        S = barrel(8)
        report = curvature_audit_5n(S)
        assert "positive-face-vertex" not in report.violations.kinds()

    def test_high_genus(self):
        S, _ = great_dodecahedron()
        report = curvature_audit_5n(S)
        assert report.genus == 4
        assert report.genus_zero_contradiction is None
        assert report.counts()[Labels.NEGATIVE] == 12
        assert report.regions == []

    def test_unsupported_degrees(self, cube):
        with pytest.raises(UnsupportedDegrees):
            curvature_audit_5n(cube[0])
