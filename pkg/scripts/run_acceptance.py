#!/usr/bin/env python3
"""Run the acceptance suite and echo the per-criterion verdict lines.

Equivalent to `pytest tests/test_acceptance.py -v -s`; exists so the gate can
be driven without remembering pytest flags.
"""

import pathlib
import subprocess
import sys


def main() -> int:
    root = pathlib.Path(__file__).resolve().parent.parent
    return subprocess.call(
        [sys.executable, "-m", "pytest", str(root / "tests" / "test_acceptance.py"),
         "-v", "-s"], cwd=root)


if __name__ == "__main__":
    sys.exit(main())
