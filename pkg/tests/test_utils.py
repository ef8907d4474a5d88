import numpy as np
import pytest

from rpsurf.utils import (
    FILE_PATH,
    LEVEL,
    MTIME,
    deep_merge,
    discover_config_files,
    get_key_path,
    load_yaml_file,
    point_key,
    polygon_key,
    same_cyclic_order,
)


def test_discover_config_files(fixtures_dir):
    files = discover_config_files(fixtures_dir / "config")
    assert isinstance(files, dict)
    assert len(files) == 2
    for dict_ref, info in files.items():
        assert FILE_PATH in info
        assert MTIME in info
        assert info[LEVEL] == dict_ref.count("/")


def test_discover_config_files_pattern(fixtures_dir):
    assert discover_config_files(fixtures_dir / "config", pattern="*.json") == {}


@pytest.mark.parametrize(
    "key,path,expected",
    [
        ("geometry.eps_coord", [], ("eps_coord", ["geometry"])),
        ("eps_coord", "geometry", ("eps_coord", ["geometry"])),
        ("a.b.c", ["d"], ("c", ["a", "b", "d"])),
        ("plain", None, ("plain", [])),
    ],
)
def test_get_key_path(key, path, expected):
    assert get_key_path(key, path) == expected


class TestLoadYaml:
    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_yaml_file(tmp_path / "absent.yaml")

    def test_empty_file_is_empty_mapping(self, tmp_path):
        path = tmp_path / "empty.yaml"
        path.write_text("")
        assert load_yaml_file(path) == {}

    def test_list_is_rejected(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n")
        with pytest.raises(RuntimeError):
            load_yaml_file(path)

    def test_bad_yaml_is_rejected(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("a: [1, 2\n")
        with pytest.raises(RuntimeError):
            load_yaml_file(path)


def test_deep_merge_keeps_siblings():
    base = {"geometry": {"eps_coord": 1e-6, "key_quantum": 1e-5}, "io": {"float_digits": 17}}
    merged = deep_merge(base, {"geometry": {"eps_coord": 1e-7}})
    assert merged == {"geometry": {"eps_coord": 1e-7, "key_quantum": 1e-5}, "io": {"float_digits": 17}}
    assert base["geometry"]["eps_coord"] == 1e-6


class TestCoordinateKeys:
    """Points within a fraction of the quantum hash alike."""

    def test_point_key_tolerates_noise(self):
        assert point_key((1.0, 0.5, -2.0), 1e-5) == point_key((1.0 + 1e-7, 0.5 - 1e-7, -2.0), 1e-5)
        assert point_key((1.0, 0.5, -2.0), 1e-5) != point_key((1.0 + 1e-3, 0.5, -2.0), 1e-5)

    def test_polygon_key_ignores_order(self):
        square = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]], dtype=float)
        assert polygon_key(square, 1e-5) == polygon_key(square[::-1], 1e-5)
        assert polygon_key(square, 1e-5) == polygon_key(np.roll(square, 1, axis=0), 1e-5)


def test_same_cyclic_order():
    assert same_cyclic_order([1, 2, 3, 4], [3, 4, 1, 2])
    assert not same_cyclic_order([1, 2, 3, 4], [4, 3, 2, 1])
    assert not same_cyclic_order([1, 2, 3], [1, 2])
    assert same_cyclic_order([], [])
