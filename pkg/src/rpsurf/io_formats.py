"""Text formats: RPS v1 surfaces, OFF import, OBJ export, certificates and pairings.

RPS v1 is line oriented::

    RPS 1
    8                       # vertex count
    0 0 0                   # one coordinate triple per line
    ...
    6                       # face count
    4 0 3 2 1               # degree, then vertex indices in cyclic order
    ...

Blank lines and ``#`` comments are ignored. Floats are written with
``io.float_digits`` significant digits (17 by default) so that a round trip
reproduces the coordinates exactly. Certificates and counterexample pairings
are YAML documents.
"""

import logging
from pathlib import Path

import numpy as np
import yaml

from .decompose import Certificate
from .errors import (
    FormatError,
    GeneratorError,
    GeometryError,
    IndexOutOfRange,
    ParseError,
    SurfaceError,
    UnsupportedOffFeature,
)
from .generators import Brick, Pairing
from .geometry import Realization, RigidMotion
from .labels import Labels
from .settings import Settings
from .surface_core import SurfaceGraph, build_surface

logger = logging.getLogger(__name__)

RPS_HEADER = "RPS 1"


def _float_digits() -> int:
    return int(Settings().get(Labels.FLOAT_DIGITS, default=17))


def _fmt(x: float, digits: int) -> str:
    text = f"{float(x):.{digits}g}"
    return "0" if text == "-0" else text


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    """Non-empty lines with comments stripped, as (1-based line number, tokens)."""
    out = []
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if line:
            out.append((number, line.split()))
    return out


def _int(token: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"expected an integer, got {token!r}", line)


def _float(token: str, line: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"expected a number, got {token!r}", line)


def _build(
    faces: list[tuple[int, ...]], coords: list[list[float]], lines: list[int]
) -> tuple[SurfaceGraph, Realization]:
    n = len(coords)
    for face, line in zip(faces, lines):
        for v in face:
            if not 0 <= v < n:
                raise IndexOutOfRange(f"face references vertex {v} of {n}", line)
    try:
        S = build_surface(faces, n)
    except SurfaceError as e:
        raise ParseError(f"faces do not form a surface: {e}")
    return S, Realization(np.array(coords, dtype=float).reshape(n, 3))


##################################################################################
# RPS v1
##################################################################################


def parse_rps(text: str) -> tuple[SurfaceGraph, Realization]:
    """Parse an RPS v1 document.

    Raises:
        ParseError: Malformed header, counts or rows.
        IndexOutOfRange: A face references a missing vertex.
    """
    lines = _content_lines(text)
    if not lines or " ".join(lines[0][1]) != RPS_HEADER:
        raise ParseError(f"missing header {RPS_HEADER!r}", lines[0][0] if lines else 1)
    rows = iter(lines[1:])

    def take(what: str) -> tuple[int, list[str]]:
        try:
            return next(rows)
        except StopIteration:
            raise ParseError(f"unexpected end of file, expected {what}")

    line, tokens = take("vertex count")
    nv = _int(tokens[0], line)
    coords = []
    for _ in range(nv):
        line, tokens = take("a vertex")
        if len(tokens) != 3:
            raise ParseError(f"a vertex has three coordinates, got {len(tokens)}", line)
        coords.append([_float(t, line) for t in tokens])
    line, tokens = take("face count")
    nf = _int(tokens[0], line)
    faces, face_lines = [], []
    for _ in range(nf):
        line, tokens = take("a face")
        k = _int(tokens[0], line)
        if k != len(tokens) - 1:
            raise ParseError(f"face declares {k} vertices but lists {len(tokens) - 1}", line)
        faces.append(tuple(_int(t, line) for t in tokens[1:]))
        face_lines.append(line)
    extra = next(rows, None)
    if extra is not None:
        raise ParseError("trailing content after the last face", extra[0])
    return _build(faces, coords, face_lines)


def serialize_rps(S: SurfaceGraph, R: Realization, digits: int | None = None) -> str:
    """Write an RPS v1 document; ``digits`` defaults to ``io.float_digits``."""
    digits = digits or _float_digits()
    out = [RPS_HEADER, str(S.n_vertices)]
    out += [" ".join(_fmt(x, digits) for x in p) for p in R.coords]
    out.append(str(S.n_faces))
    out += [" ".join(str(x) for x in (len(face), *face)) for face in S.faces]
    return "\n".join(out) + "\n"


##################################################################################
# OFF and OBJ
##################################################################################


def import_off(text: str) -> tuple[SurfaceGraph, Realization]:
    """Read an OFF (or COFF) polygon mesh; colour columns are ignored.

    Raises:
        UnsupportedOffFeature: Normals, texture coordinates, homogeneous or
            higher-dimensional variants, or a binary file.
        ParseError: Malformed counts or rows.
    """
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty OFF file", 1)
    line, tokens = lines[0]
    header = tokens[0]
    if header not in ("OFF", "COFF"):
        if header.endswith("OFF"):
            raise UnsupportedOffFeature(f"OFF variant {header!r} is not supported")
        raise ParseError("missing OFF header", line)
    if len(tokens) > 1 and tokens[1].upper() == "BINARY":
        raise UnsupportedOffFeature("binary OFF is not supported")
    rest = lines[1:]
    if len(tokens) > 1:
        rest = [(line, tokens[1:])] + rest
    if not rest:
        raise ParseError("missing OFF counts", line)
    line, tokens = rest[0]
    if len(tokens) < 2:
        raise ParseError("OFF counts need vertex and face numbers", line)
    nv, nf = _int(tokens[0], line), _int(tokens[1], line)
    if len(rest) < 1 + nv + nf:
        raise ParseError(f"OFF declares {nv} vertices and {nf} faces, file is shorter")
    coords = []
    for line, tokens in rest[1 : 1 + nv]:
        if len(tokens) < 3:
            raise ParseError("a vertex has at least three coordinates", line)
        coords.append([_float(t, line) for t in tokens[:3]])
    faces, face_lines = [], []
    for line, tokens in rest[1 + nv : 1 + nv + nf]:
        k = _int(tokens[0], line)
        if len(tokens) < k + 1:
            raise ParseError(f"face declares {k} vertices but lists {len(tokens) - 1}", line)
        if len(tokens) > k + 1:
            logger.debug("Ignoring colour payload on line %d", line)
        faces.append(tuple(_int(t, line) for t in tokens[1 : k + 1]))
        face_lines.append(line)
    return _build(faces, coords, face_lines)


def export_obj(S: SurfaceGraph, R: Realization, digits: int | None = None) -> str:
    """Wavefront OBJ with one ``f`` line per polygon and 1-based indices."""
    digits = digits or _float_digits()
    out = ["v " + " ".join(_fmt(x, digits) for x in p) for p in R.coords]
    out += ["f " + " ".join(str(v + 1) for v in face) for face in S.faces]
    return "\n".join(out) + "\n"


def read_surface(path: Path | str) -> tuple[SurfaceGraph, Realization]:
    """Load a ``.rps`` or ``.off`` file."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Surface file '{path}' not found")
    text = path.read_text()
    if path.suffix.lower() == ".off":
        return import_off(text)
    return parse_rps(text)


##################################################################################
# Certificates and pairings
##################################################################################


def _load_mapping(text: str, what: str) -> dict:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ParseError(f"failed to parse {what}: {e}")
    if not isinstance(data, dict):
        raise ParseError(f"{what} is not a mapping")
    return data


def dump_certificate(cert: Certificate) -> str:
    """YAML text of a certificate: bricks with placements, then gluings."""
    bricks = []
    for brick in cert.bricks:
        row = brick.placement.as_row()
        bricks.append(
            {
                Labels.KIND: str(brick.kind),
                Labels.ROTATION: [float(x) for x in row[:9]],
                Labels.TRANSLATION: [float(x) for x in row[9:]],
            }
        )
    data = {
        Labels.BRICKS: bricks,
        Labels.GLUINGS: [[int(x) for x in g] for g in cert.gluings],
    }
    return yaml.safe_dump(data, sort_keys=False, default_flow_style=None)


def load_certificate(text: str) -> Certificate:
    """Parse certificate YAML; placements must be orthogonal within tolerance.

    Raises:
        ParseError: Malformed document, unknown brick kind or bad placement.
    """
    data = _load_mapping(text, "certificate")
    entries = data.get(Labels.BRICKS)
    if not isinstance(entries, list):
        raise ParseError(f"certificate needs a '{Labels.BRICKS}' list")
    bricks = []
    for i, entry in enumerate(entries):
        kind = entry.get(Labels.KIND) if isinstance(entry, dict) else None
        if kind not in Labels.brick_kinds():
            raise ParseError(f"brick {i}: kind {kind!r} is not one of {Labels.brick_kinds()}")
        try:
            numbers = list(entry[Labels.ROTATION]) + list(entry[Labels.TRANSLATION])
            bricks.append(Brick(kind, RigidMotion.from_row([float(x) for x in numbers])))
        except (KeyError, TypeError, ValueError, GeometryError, GeneratorError) as e:
            raise ParseError(f"brick {i}: bad placement ({e})")
    gluings = []
    for g in data.get(Labels.GLUINGS) or []:
        if not isinstance(g, list) or len(g) != 4:
            raise ParseError(f"gluing {g!r} needs four integers")
        gluings.append(tuple(int(x) for x in g))
    return Certificate(bricks, gluings=gluings)


def load_pairing(text: str) -> Pairing:
    """Tube pairing ``pairs: [[node_a, face_a, node_b, face_b], ...]``."""
    data = _load_mapping(text, "pairing")
    pairs = data.get(Labels.PAIRS)
    if not isinstance(pairs, list):
        raise FormatError(f"pairing needs a '{Labels.PAIRS}' list")
    out = []
    for entry in pairs:
        if not isinstance(entry, list) or len(entry) != 4:
            raise ParseError(f"pairing entry {entry!r} needs four integers")
        out.append(tuple(int(x) for x in entry))
    return out
