"""Run the acceptance suite and print its PASS/FAIL summary."""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", str(ROOT / "tests" / "test_acceptance.py")],
        cwd=ROOT,
    )
    sys.exit(proc.returncode)
