#!/usr/bin/env python3
"""
Keep the dmc-checker version in pyproject.toml and the package in step.

Usage:
    python scripts/update_version.py 0.2.0
    python scripts/update_version.py --show
    python scripts/update_version.py --check
"""

import argparse
import re
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

# file -> pattern whose first group is the version string
VERSION_SOURCES = {
    ROOT / "pyproject.toml": re.compile(r'^(version = ")([^"]+)(")', re.MULTILINE),
    ROOT / "dmc_checker" / "__init__.py": re.compile(r'^(__version__ = ")([^"]+)(")',
                                                      re.MULTILINE),
}

SEMVER = re.compile(r'^\d+\.\d+\.\d+(?:[-.]?(?:alpha|beta|rc|dev)\d*)?$')


def read_versions():
    """Version string found in each source file (None when absent)."""
    found = {}
    for path, pattern in VERSION_SOURCES.items():
        match = pattern.search(path.read_text())
        found[path] = match.group(2) if match else None
    return found


def write_version(new_version):
    for path, pattern in VERSION_SOURCES.items():
        content, count = pattern.subn(rf'\g<1>{new_version}\g<3>', path.read_text(), count=1)
        if count != 1:
            raise ValueError(f"no version string in {path.relative_to(ROOT)}")
        path.write_text(content)
        print(f"Updated {path.relative_to(ROOT)} to {new_version}")


def main():
    parser = argparse.ArgumentParser(description="Manage the dmc-checker version")
    parser.add_argument("version", nargs="?", help="New version to set (X.Y.Z)")
    parser.add_argument("--show", action="store_true", help="Show the current versions")
    parser.add_argument("--check", action="store_true",
                        help="Exit non-zero unless all version strings agree")
    args = parser.parse_args()

    versions = read_versions()
    if args.show or args.check or not args.version:
        for path, version in versions.items():
            print(f"{path.relative_to(ROOT)}: {version or 'not found'}")
        if args.check and (None in versions.values() or len(set(versions.values())) != 1):
            print("Version strings disagree")
            return 1
        return 0

    if not SEMVER.match(args.version):
        print(f"Invalid version format: {args.version} (expected X.Y.Z)")
        return 1
    try:
        write_version(args.version)
    except (OSError, ValueError) as e:
        print(f"Error updating version: {e}")
        return 1
    print(f"\nNext: git commit -am 'Bump version to {args.version}' && git tag v{args.version}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
