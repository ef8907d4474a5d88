"""Layered YAML settings for rpsurf.

This module provides the :class:`Settings` class, the single access point for
tunable values such as the coordinate tolerance, search budgets and logging
level. Values come from two layers:

1. ``defaults.yaml`` shipped inside the package.
2. Every ``*.yaml`` file below the directory named by ``RPSURF_HOME``, merged in
   order of directory depth (shallow first), then file name.

Example:
    Basic usage::

        from rpsurf.settings import Settings

        settings = Settings()
        eps = settings.get("geometry.eps_coord")
        budget = settings("generators.torus_search_budget")
        settings.set("geometry.eps_coord", 1e-8)   # memory only

Environment Variables:
    RPSURF_HOME: Directory with YAML files overriding the packaged defaults.
"""

import logging
import os
from pathlib import Path
from typing import Any, TypeVar

from .labels import Labels
from .utils import (
    LEVEL,
    FILE_PATH,
    deep_merge,
    discover_config_files,
    get_key_path,
    load_yaml_file,
    singleton_or_not,
)

logger = logging.getLogger(__name__)

T = TypeVar("T")

DEFAULTS_FILE = Path(__file__).parent / "defaults.yaml"

_MISSING = object()


@singleton_or_not
class Settings:
    """Hierarchical settings with dotted-key access.

    The class is wrapped by :func:`rpsurf.utils.singleton_or_not`; while
    ``settings.singleton`` is true every ``Settings()`` call returns the same
    instance, so a value changed with :meth:`set` (for example by the CLI's
    ``--eps`` flag) is seen by all library code.

    Args:
        home (str|Path|None): Override directory. Defaults to ``$RPSURF_HOME``.

    Raises:
        FileNotFoundError: If an override directory is named but missing.

    Example:
        ::

            settings = Settings()
            if "bands.exhaustive_face_limit" in settings:
                limit = settings.get("bands.exhaustive_face_limit")
    """

    def __init__(self, home: str | Path | None = None):
        self._home = home if home is not None else os.getenv("RPSURF_HOME")
        self._files: dict[str, dict] = {}
        self._cfg: dict = {}
        self.reload()

    def __call__(self, key: str, *, default: Any = None) -> Any:
        return self.get(key, default=default)

    def __contains__(self, key: str) -> bool:
        return self._find(key) is not _MISSING

    def get(self, key: str, *path: str, default: T | None = None) -> T | Any:
        """Retrieve a value by dotted key.

        Args:
            key (str): Dotted key such as ``"geometry.eps_coord"``.
            *path (str): Optional leading path components.
            default: Value returned when the key is absent.

        Returns:
            Any: The value with ``$VARS`` expanded in strings, or ``default``.
        """
        value = self._find(key, list(path))
        if value is _MISSING:
            return default
        return self.expand_env(value)

    def set(self, key: str, value: Any) -> None:
        """Set a value in memory; files on disk are not touched."""
        key, path = get_key_path(key, [])
        current = self._cfg
        for p in path:
            if p not in current or not isinstance(current[p], dict):
                current[p] = {}
            current = current[p]
        current[key] = value
        logger.debug("Setting %s = %r", ".".join(path + [key]), value)

    def reload(self) -> None:
        """Re-read the packaged defaults and the override directory."""
        self._cfg = load_yaml_file(DEFAULTS_FILE)
        self._files = {}
        if self._home is None:
            return
        base = Path(self._home)
        if not base.exists():
            raise FileNotFoundError(
                f"Settings directory '{base}' does not exist. "
                "Please set the RPSURF_HOME environment variable to a valid path."
            )
        self._files = discover_config_files(base)
        ordered = sorted(self._files.items(), key=lambda item: (item[1][LEVEL], item[0]))
        for dict_ref, meta in ordered:
            try:
                self._cfg = deep_merge(self._cfg, load_yaml_file(meta[FILE_PATH]))
            except Exception as e:
                raise RuntimeError(f"Failed to load settings from {dict_ref}: {e}")
        logger.debug("Loaded %d override file(s) from %s", len(ordered), base)

    @property
    def files(self) -> list[str]:
        """Override files merged on top of the defaults, relative to the home."""
        return list(self._files)

    def expand_env(self, obj):
        if isinstance(obj, str):
            return os.path.expandvars(obj)
        elif isinstance(obj, list):
            return [self.expand_env(x) for x in obj]
        elif isinstance(obj, dict):
            return {k: self.expand_env(v) for k, v in obj.items()}
        else:
            return obj

    ##################################################################################
    # Internal helpers
    ##################################################################################

    def _find(self, key: str, path: list[str] | None = None) -> Any:
        key, path = get_key_path(key, path or [])
        current = self._cfg
        for p in path:
            if not isinstance(current, dict) or p not in current:
                return _MISSING
            current = current[p]
        if not isinstance(current, dict) or key not in current:
            return _MISSING
        return current[key]


def eps_coord(eps: float | None = None) -> float:
    """Return ``eps`` or, when None, the configured coordinate tolerance."""
    if eps is not None:
        return float(eps)
    return float(Settings().get(Labels.EPS_COORD, default=1e-6))


def key_quantum() -> float:
    """Grid step for hashing coordinates."""
    return float(Settings().get(Labels.KEY_QUANTUM, default=1e-5))
