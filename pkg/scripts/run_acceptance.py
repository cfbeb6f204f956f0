#!/usr/bin/env python3
"""Run the acceptance suite and print one line per criterion.

This is a thin wrapper over tests/test_acceptance.py; it exists so the
acceptance gate can be run without remembering pytest flags.
"""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent

if __name__ == "__main__":
    sys.exit(
        subprocess.call(
            [
                sys.executable,
                "-m",
                "pytest",
                str(ROOT / "tests" / "test_acceptance.py"),
                "-v",
                "-s",
            ]
        )
    )
