import io
import logging
import sys

import pytest

from rpsurf.cli import EXIT_DECOMPOSITION, EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from rpsurf.labels import Labels
from rpsurf.settings import Settings


@pytest.fixture(autouse=True)
def detach_cli_logging():
    """Drop the stderr handler each run installs on the package logger."""
    yield
    logger = logging.getLogger("rpsurf")
    for handler in [h for h in logger.handlers if getattr(h, "_rpsurf_cli", False)]:
        logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)


@pytest.fixture
def generated(tmp_path):
    """Write a named surface with ``rpsurf gen`` and return its path."""

    def gen(name: str, *extra: str) -> str:
        path = tmp_path / f"{name}.rps"
        assert main(["gen", name, "-o", str(path), *extra]) == EXIT_OK
        return str(path)

    return gen


def lines(capsys) -> list[str]:
    return capsys.readouterr().out.splitlines()


class TestInspection:
    """Commands that only read a surface."""

    def test_info(self, generated, capsys):
        path = generated("dodecahedron")
        capsys.readouterr()
        assert main(["info", path]) == EXIT_OK
        out = lines(capsys)
        assert "vertices: 20" in out
        assert "genus: 0" in out
        assert "degrees: 5:12" in out
        assert "gauss_bonnet: pass (total 4 π, expected 4 π)" in out

    def test_validate(self, fixtures_dir, capsys):
        assert main(["validate", str(fixtures_dir / "cube.rps")]) == EXIT_OK
        assert lines(capsys)[:2] == ["proper: ok", "realization: ok"]

    def test_validate_improper(self, generated, capsys):
        path = generated("great-dodecahedron")
        capsys.readouterr()
        assert main(["validate", path]) == EXIT_FAILED
        assert "proper: ok" not in lines(capsys)

    def test_curvature_per_vertex(self, fixtures_dir, capsys):
        assert main(["curvature", "--per-vertex", str(fixtures_dir / "cube.rps")]) == EXIT_OK
        out = lines(capsys)
        assert out[0] == "vertex 0: 1/2 π (1.570796)"
        assert len(out) == 9
        assert out[-1].startswith("total: 4 π")

    def test_curvature_per_face(self, fixtures_dir, capsys):
        assert main(["curvature", str(fixtures_dir / "cube.off")]) == EXIT_OK
        assert lines(capsys)[0] == "face 0: 2/3 π (2.094395)"

    def test_bands(self, generated, capsys):
        path = generated("box")
        capsys.readouterr()
        assert main(["bands", path]) == EXIT_OK
        assert lines(capsys)[0] == "bands: 4"

    def test_audit(self, generated, capsys):
        path = generated("dodecahedron")
        capsys.readouterr()
        assert main(["audit", path]) == EXIT_OK
        out = lines(capsys)
        assert "positive: 12 zero: 0 negative: 0" in out
        assert out[-1] == "genus_zero_contradiction: no"

    def test_audit_wrong_degrees(self, fixtures_dir):
        assert main(["audit", str(fixtures_dir / "cube.rps")]) == EXIT_FAILED

    def test_stdin(self, fixtures_dir, monkeypatch, capsys):
        monkeypatch.setattr(sys, "stdin", io.StringIO((fixtures_dir / "cube.off").read_text()))
        assert main(["info", "-"]) == EXIT_OK
        assert "faces: 6" in lines(capsys)


class TestDecomposition:
    def test_decompose_and_verify(self, generated, tmp_path, capsys):
        path = generated("slab")
        cert = tmp_path / "slab.cert.yaml"
        capsys.readouterr()
        assert main(["decompose", path, "--family", "square-oct", "-o", str(cert)]) == EXIT_OK
        assert lines(capsys) == ["bricks: 4", "  cube: 4"]
        assert main(["verify", path, "--cert", str(cert)]) == EXIT_OK
        assert lines(capsys)[0].startswith("pass: 4 bricks")

    def test_certificate_to_stdout(self, fixtures_dir, capsys):
        assert main(["decompose", str(fixtures_dir / "cube.rps")]) == EXIT_OK
        assert capsys.readouterr().out.startswith(f"{Labels.BRICKS}:")

    def test_verify_mismatch(self, generated, tmp_path, capsys):
        cert = tmp_path / "cube.cert.yaml"
        assert main(["decompose", generated("cube"), "-o", str(cert)]) == EXIT_OK
        box = generated("box")
        capsys.readouterr()
        assert main(["verify", box, "--cert", str(cert)]) == EXIT_FAILED
        assert lines(capsys)[0].startswith("fail: ")

    def test_wrong_family(self, generated, capsys):
        path = generated("great-dodecahedron")
        assert main(["decompose", path, "--family", "pent"]) == EXIT_DECOMPOSITION
        assert "GenusOutOfRange" in capsys.readouterr().err


class TestGenerate:
    def test_stdout(self, capsys):
        assert main(["gen", "cube"]) == EXIT_OK
        assert capsys.readouterr().out.startswith("RPS 1\n8\n")

    def test_export_obj(self, generated, tmp_path):
        obj = tmp_path / "cube.obj"
        assert main(["export-obj", generated("cube"), "-o", str(obj)]) == EXIT_OK
        text = obj.read_text()
        assert text.count("\nf ") + text.startswith("f ") == 6

    def test_bad_pairing(self, fixtures_dir):
        pairing = fixtures_dir / "pairing_bad.yaml"
        assert main(["gen", "tco3", "--pairing", str(pairing)]) == EXIT_FAILED


class TestLogging:
    """Each run puts one stderr handler on the package logger."""

    @pytest.mark.parametrize(
        "flags,level",
        [([], logging.WARNING), (["-v"], logging.INFO), (["-vv"], logging.DEBUG), (["-q"], logging.ERROR)],
    )
    def test_level(self, flags, level):
        assert main([*flags, "gen", "cube"]) == EXIT_OK
        assert logging.getLogger("rpsurf").level == level

    def test_one_handler_per_run(self):
        main(["gen", "cube"])
        main(["-v", "gen", "cube"])
        handlers = [h for h in logging.getLogger("rpsurf").handlers if getattr(h, "_rpsurf_cli", False)]
        assert len(handlers) == 1
        assert handlers[0].stream is sys.stderr


class TestErrors:
    """Exit codes for bad input and usage."""

    def test_parse_error(self, tmp_path, capsys):
        path = tmp_path / "bad.rps"
        path.write_text("RPS 1\n3\n0 0\n")
        assert main(["info", str(path)]) == EXIT_USAGE
        assert "line 3" in capsys.readouterr().err

    def test_missing_file(self, tmp_path):
        assert main(["info", str(tmp_path / "none.rps")]) == EXIT_USAGE

    def test_unknown_command(self, capsys):
        assert main(["explode"]) == EXIT_USAGE
        assert "rpsurf:" in capsys.readouterr().err

    def test_missing_cert_option(self, fixtures_dir):
        assert main(["verify", str(fixtures_dir / "cube.rps")]) == EXIT_USAGE

    def test_eps_option(self, fixtures_dir):
        assert main(["--eps", "0.001", "info", str(fixtures_dir / "cube.rps")]) == EXIT_OK
        assert Settings().get(Labels.EPS_COORD) == 0.001
