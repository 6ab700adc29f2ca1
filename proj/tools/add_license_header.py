#!/usr/bin/env python3
"""Prepend cmake/license_header.txt to every C++ source that lacks it."""

import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
DIRS = ["include", "src", "tests", "tools"]


def main() -> int:
    header = (ROOT / "cmake" / "license_header.txt").read_text()
    if not header.endswith("\n"):
        header += "\n"
    changed = 0
    for d in DIRS:
        for path in sorted((ROOT / d).rglob("*")):
            if path.suffix not in (".hpp", ".cpp") or not path.is_file():
                continue
            text = path.read_text()
            if text.startswith(header):
                continue
            path.write_text(header + "\n" + text)
            changed += 1
    print(f"added header to {changed} files")
    return 0


if __name__ == "__main__":
    sys.exit(main())
