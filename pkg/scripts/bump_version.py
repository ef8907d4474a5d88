#!/usr/bin/env python3
"""Bump the version in pyproject.toml and src/rpsurf/__init__.py together."""

import argparse
import re
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
TARGETS = {
    ROOT / "pyproject.toml": r'^version = "(\d+\.\d+\.\d+)"',
    ROOT / "src" / "rpsurf" / "__init__.py": r'^__version__ = "(\d+\.\d+\.\d+)"',
}


def next_version(current: str, bump_type: str) -> str:
    major, minor, patch = (int(x) for x in current.split("."))
    if bump_type == "patch":
        return f"{major}.{minor}.{patch + 1}"
    if bump_type == "minor":
        return f"{major}.{minor + 1}.0"
    if bump_type == "major":
        return f"{major + 1}.0.0"
    raise ValueError(f"Unknown bump type '{bump_type}'. Use 'patch', 'minor', or 'major'.")


def bump_version(bump_type: str, dry_run: bool = False) -> str:
    """Bump both version strings; they must agree before the bump."""
    found = {}
    for path, pattern in TARGETS.items():
        match = re.search(pattern, path.read_text(), flags=re.MULTILINE)
        if not match:
            sys.exit(f"Error: Could not find version in {path.relative_to(ROOT)}")
        found[path] = match.group(1)
    versions = set(found.values())
    if len(versions) != 1:
        listing = ", ".join(f"{p.relative_to(ROOT)}={v}" for p, v in found.items())
        sys.exit(f"Error: versions disagree ({listing})")
    current = versions.pop()
    new = next_version(current, bump_type)
    if not dry_run:
        for path, pattern in TARGETS.items():
            text = path.read_text()
            prefix = pattern.split('"')[0].lstrip("^")
            path.write_text(re.sub(pattern, f'{prefix}"{new}"', text, count=1, flags=re.MULTILINE))
    print(f"Version bumped: {current} -> {new}" + (" (dry run)" if dry_run else ""))
    return new


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("bump_type", choices=["patch", "minor", "major"])
    parser.add_argument("--dry-run", action="store_true", help="print the new version without writing")
    args = parser.parse_args()
    bump_version(args.bump_type, args.dry_run)
