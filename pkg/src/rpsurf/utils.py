"""Utility functions for settings discovery, key paths and coordinate hashing.

The module includes functions for:

- Discovering YAML settings files below an override directory
- Splitting dotted settings keys into a key and a path
- The conditional singleton decorator used by :class:`rpsurf.settings.Settings`
- Hashing coordinates onto a tolerance grid for matching points across surfaces

Example:
    Basic usage of the helpers::

        from pathlib import Path
        from rpsurf.utils import discover_config_files, get_key_path

        files = discover_config_files(Path("rps-config"))
        key, path = get_key_path("geometry.eps_coord", [])
"""

from pathlib import Path
from typing import Iterable, Tuple

import numpy as np
import yaml

from .labels import Labels

LEVEL = "level"
FILE_PATH = "file_path"
MTIME = "mtime"


def discover_config_files(
    base_path: Path, pattern: str = "*.yaml"
) -> dict[str, dict[str, str | float | int]]:
    """Recursively discover settings files with their hierarchy level.

    Args:
        base_path (Path): Root directory to search.
        pattern (str, optional): Glob pattern for file matching. Defaults to "*.yaml".

    Returns:
        dict[str, dict[str, str|float|int]]: Mapping from the path relative to
        ``base_path`` to a metadata dictionary with ``file_path``, ``mtime`` and
        ``level`` (directory depth, 0 for files directly in ``base_path``).

    Example:
        Discovering override files::

            files = discover_config_files(Path("rps-config"))
            # {"geometry.yaml": {"file_path": "/abs/rps-config/geometry.yaml",
            #                    "mtime": 1699123456.7, "level": 0}}
    """
    ret = {}
    for file in sorted(base_path.rglob(pattern)):
        if file.is_file():
            dict_ref = str(file.resolve().relative_to(base_path.resolve()))
            ret[dict_ref] = {
                FILE_PATH: str(file.resolve()),
                MTIME: file.stat().st_mtime,
                LEVEL: len(file.relative_to(base_path).parents) - 1,
            }
    return ret


def get_key_path(key: str, path: list | str | None) -> Tuple[str, list[str]]:
    """Split a dotted key and prepend its leading parts to a path context.

    Args:
        key (str): Settings key, possibly dotted ("geometry.eps_coord").
        path (list|str|None): Existing path context.

    Returns:
        Tuple[str, list[str]]: The last key component and the combined path.

    Example:
        >>> get_key_path("geometry.eps_coord", [])
        ('eps_coord', ['geometry'])
        >>> get_key_path("eps_coord", "geometry")
        ('eps_coord', ['geometry'])
    """
    if isinstance(path, str):
        path = [path]
    path = list(path or [])
    if "." in key:
        parts = key.split(".")
        key = parts[-1]
        path = parts[:-1] + path
    return key, path


def singleton_or_not(class_):
    """Decorator that conditionally implements the singleton pattern.

    The first call creates an instance and caches it. Later calls return the
    cached instance unless the instance's ``settings.singleton`` value is
    false, in which case a fresh instance replaces it.

    Args:
        class_: The class to decorate.

    Returns:
        function: Factory managing instance creation.

    Example:
        ::

            @singleton_or_not
            class Settings:
                ...

            Settings() is Settings()   # True while settings.singleton is true
    """
    instances = {}

    def getinstance(*args, **kwargs):
        if class_ not in instances:
            instances[class_] = class_(*args, **kwargs)
        else:
            instance_ = instances[class_]
            if args or kwargs or not instance_.get(Labels.SINGLETON, default=True):
                instances[class_] = class_(*args, **kwargs)
        return instances[class_]

    getinstance.__wrapped__ = class_
    getinstance.__doc__ = class_.__doc__
    return getinstance


def load_yaml_file(file_path: Path | str) -> dict:
    """Load a YAML mapping from disk.

    Raises:
        FileNotFoundError: If the file does not exist.
        RuntimeError: If the file cannot be parsed or is not a mapping.
    """
    file_path = Path(file_path)
    if not file_path.exists():
        raise FileNotFoundError(f"Settings file '{file_path}' not found")
    try:
        with open(file_path, "r") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise RuntimeError(f"Failed to parse {file_path}: {e}")
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise RuntimeError(f"Failed to parse {file_path}: top level is not a mapping")
    return data


def deep_merge(base: dict, override: dict) -> dict:
    """Return a copy of ``base`` with ``override`` merged in recursively."""
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def point_key(point: Iterable[float], quantum: float) -> tuple[int, int, int]:
    """Hash a point onto an integer grid of step ``quantum``."""
    p = np.asarray(point, dtype=float)
    return tuple(int(v) for v in np.round(p / quantum))


def polygon_key(points: np.ndarray, quantum: float) -> frozenset:
    """Hash the vertex set of a polygon, ignoring order and orientation."""
    return frozenset(point_key(p, quantum) for p in points)


def same_cyclic_order(a: list, b: list) -> bool:
    """True when ``b`` is a cyclic rotation of ``a``."""
    if len(a) != len(b):
        return False
    if not a:
        return True
    try:
        start = b.index(a[0])
    except ValueError:
        return False
    return all(b[(start + i) % len(b)] == a[i] for i in range(len(a)))
