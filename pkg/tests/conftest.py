"""
Shared test fixtures and configuration for rpsurf tests.
"""

from pathlib import Path

import numpy as np
import pytest
from dotenv import load_dotenv

from rpsurf.generators import CompoundBuilder, SolidKind, box, make_solid, slab
from rpsurf.geometry import Realization
from rpsurf.settings import Settings
from rpsurf.surface_core import build_surface

# Load environment variables from a .env file for tests
load_dotenv(dotenv_path=Path(__file__).parent / ".env.test")

FIXTURES = Path(__file__).parent / "fixtures"

CUBE_FACES = [(0, 3, 2, 1), (4, 5, 6, 7), (0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7)]
CUBE_POINTS = [
    (0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
    (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1),
]


@pytest.fixture(autouse=True)
def fresh_settings():
    """Every test starts and ends with settings read from the packaged defaults."""
    Settings(home=None)
    yield
    Settings(home=None)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


@pytest.fixture
def cube():
    """Unit cube on {0,1}^3 with hand-numbered faces; faces 2..5 are lateral."""
    return build_surface(CUBE_FACES, 8), Realization(np.array(CUBE_POINTS, dtype=float))


@pytest.fixture
def dodecahedron():
    return make_solid(SolidKind.DODECAHEDRON)


@pytest.fixture
def prism():
    return make_solid(SolidKind.OCTAGONAL_PRISM)


@pytest.fixture
def two_cubes():
    return box()


@pytest.fixture
def four_cubes():
    return slab()


@pytest.fixture
def two_dodecahedra():
    builder = CompoundBuilder(SolidKind.DODECAHEDRON)
    builder.add(SolidKind.DODECAHEDRON, face=0)
    return builder
