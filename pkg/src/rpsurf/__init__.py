"""rpsurf: regular polygon surfaces.

This package checks that a polygon surface is a proper closed surface realized
by regular unit-edge polygons, computes its curvature exactly, traces bands of
parallel edges, rewrites surfaces by surgery and decomposes them into unions of
dodecahedra, cubes and octagonal prisms with independently verified
certificates.

Example:
    Basic usage::

        from rpsurf import SolidKind, make_solid, gauss_bonnet_check, decompose

        S, R = make_solid(SolidKind.DODECAHEDRON)
        assert gauss_bonnet_check(S).equal
        cert = decompose(S, R)
        assert len(cert.bricks) == 1
"""

__version__ = "0.1.0"
__all__ = [
    "Labels",
    "Settings",
    "SurfaceGraph",
    "Realization",
    "RigidMotion",
    "AnglePi",
    "SolidKind",
    "Brick",
    "Certificate",
    "build_surface",
    "genus",
    "gauss_bonnet_check",
    "make_solid",
    "decompose",
    "verify_certificate",
    "curvature_audit_5n",
    "parse_rps",
    "serialize_rps",
    "main",
]

from .decompose import Brick, Certificate, curvature_audit_5n, decompose, verify_certificate
from .generators import SolidKind, make_solid
from .geometry import AnglePi, Realization, RigidMotion, gauss_bonnet_check
from .io_formats import parse_rps, serialize_rps
from .labels import Labels
from .settings import Settings
from .surface_core import SurfaceGraph, build_surface, genus


def main() -> None:
    """CLI entry point for the rpsurf package."""
    from .cli import main as cli_main

    raise SystemExit(cli_main())
