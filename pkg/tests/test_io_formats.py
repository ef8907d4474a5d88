import numpy as np
import pytest
import yaml

from rpsurf.decompose import Certificate, decompose, verify_certificate
from rpsurf.errors import FormatError, IndexOutOfRange, ParseError, UnsupportedOffFeature
from rpsurf.geometry import Realization
from rpsurf.io_formats import (
    dump_certificate,
    export_obj,
    import_off,
    load_certificate,
    load_pairing,
    parse_rps,
    read_surface,
    serialize_rps,
)
from rpsurf.labels import Labels
from rpsurf.settings import Settings
from rpsurf.surface_core import is_isomorphic


class TestRps:
    """RPS v1 reading and writing."""

    def test_serialize_cube(self, cube, fixtures_dir):
        assert serialize_rps(*cube) == (fixtures_dir / "cube.rps").read_text()

    def test_parse_cube(self, cube, fixtures_dir):
        S, R = parse_rps((fixtures_dir / "cube.rps").read_text())
        assert S.faces == cube[0].faces
        assert np.array_equal(R.coords, cube[1].coords)

    def test_comments_and_blank_lines(self, fixtures_dir):
        S, _ = parse_rps((fixtures_dir / "cube_commented.rps").read_text())
        assert (S.n_vertices, S.n_edges, S.n_faces) == (8, 12, 6)

    def test_exact_floats(self, dodecahedron):
        S, R = dodecahedron
        _, R2 = parse_rps(serialize_rps(S, R))
        assert np.array_equal(R.coords, R2.coords)

    def test_float_digits_setting(self, cube):
        S, R = cube
        Settings().set(Labels.FLOAT_DIGITS, 4)
        text = serialize_rps(S, Realization(R.coords / 3))
        assert "0.3333" in text
        assert "0.33333" not in text

    def test_bad_index(self, fixtures_dir):
        with pytest.raises(IndexOutOfRange) as e:
            parse_rps((fixtures_dir / "bad_index.rps").read_text())
        assert e.value.line == 15
        assert "line 15" in str(e.value)

    def test_missing_header(self):
        with pytest.raises(ParseError) as e:
            parse_rps("8\n0 0 0\n")
        assert e.value.line == 1

    @pytest.mark.parametrize(
        "text",
        [
            "RPS 1\n1\n0 0\n",
            "RPS 1\n1\n0 0 x\n",
            "RPS 1\n3\n0 0 0\n1 0 0\n0 1 0\n",
            "RPS 1\n3\n0 0 0\n1 0 0\n0 1 0\n1\n4 0 1 2\n",
            "RPS 1\n3\n0 0 0\n1 0 0\n0 1 0\n1\n3 0 1 2\n",
        ],
    )
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            parse_rps(text)

    def test_trailing_content(self, fixtures_dir):
        text = (fixtures_dir / "cube.rps").read_text() + "4 0 1 2 3\n"
        with pytest.raises(ParseError) as e:
            parse_rps(text)
        assert e.value.line == 18


class TestOffObj:
    def test_off(self, cube, fixtures_dir):
        S, R = import_off((fixtures_dir / "cube.off").read_text())
        assert is_isomorphic(S, cube[0]) is not None
        assert np.array_equal(R.coords, cube[1].coords)

    def test_coff(self, cube, fixtures_dir):
        S, R = import_off((fixtures_dir / "cube_colored.off").read_text())
        assert S.faces == cube[0].faces
        assert R.coords.shape == (8, 3)

    @pytest.mark.parametrize("header", ["NOFF", "STOFF", "4OFF", "nOFF", "OFF BINARY"])
    def test_unsupported(self, header):
        with pytest.raises(UnsupportedOffFeature):
            import_off(f"{header}\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n")

    def test_short_file(self):
        with pytest.raises(ParseError):
            import_off("OFF\n8 6 12\n0 0 0\n")

    def test_obj(self, cube):
        lines = export_obj(*cube).splitlines()
        assert lines[0] == "v 0 0 0"
        assert sum(line.startswith("v ") for line in lines) == 8
        assert "f 1 4 3 2" in lines
        assert all(min(int(x) for x in line.split()[1:]) >= 1 for line in lines if line.startswith("f "))


class TestReadSurface:
    def test_by_suffix(self, fixtures_dir):
        rps, _ = read_surface(fixtures_dir / "cube.rps")
        off, _ = read_surface(str(fixtures_dir / "cube.off"))
        assert rps.faces == off.faces

    def test_missing(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            read_surface(tmp_path / "nothing.rps")


class TestCertificates:
    """YAML certificates."""

    def test_dump_and_verify(self, four_cubes):
        S, R = four_cubes
        cert = decompose(S, R)
        loaded = load_certificate(dump_certificate(cert))
        assert len(loaded) == 4
        assert loaded.gluings == cert.gluings
        assert verify_certificate(loaded, S, R).ok

    def test_layout(self, cube):
        data = yaml.safe_load(dump_certificate(decompose(*cube)))
        assert list(data) == [Labels.BRICKS, Labels.GLUINGS]
        brick = data[Labels.BRICKS][0]
        assert brick[Labels.KIND] == "cube"
        assert len(brick[Labels.ROTATION]) == 9
        assert len(brick[Labels.TRANSLATION]) == 3

    def test_unknown_kind(self):
        text = "bricks:\n  - {kind: tetrahedron, rotation: [1,0,0,0,1,0,0,0,1], translation: [0,0,0]}\n"
        with pytest.raises(ParseError):
            load_certificate(text)

    def test_not_orthogonal(self):
        text = "bricks:\n  - {kind: cube, rotation: [2,0,0,0,1,0,0,0,1], translation: [0,0,0]}\n"
        with pytest.raises(ParseError):
            load_certificate(text)

    def test_missing_translation(self):
        with pytest.raises(ParseError):
            load_certificate("bricks:\n  - {kind: cube, rotation: [1,0,0,0,1,0,0,0,1]}\n")

    @pytest.mark.parametrize("text", ["", "- 1\n", "gluings: []\n", "bricks: [: x\n"])
    def test_malformed(self, text):
        with pytest.raises(ParseError):
            load_certificate(text)

    def test_empty_bricks(self):
        cert = load_certificate("bricks: []\n")
        assert isinstance(cert, Certificate)
        assert len(cert) == 0


class TestPairing:
    def test_load(self):
        assert load_pairing("pairs:\n  - [0, 1, 2, 3]\n") == [(0, 1, 2, 3)]

    def test_short_entry(self, fixtures_dir):
        with pytest.raises(ParseError):
            load_pairing((fixtures_dir / "pairing_short.yaml").read_text())

    def test_no_pairs(self):
        with pytest.raises(FormatError):
            load_pairing("nodes: 3\n")
