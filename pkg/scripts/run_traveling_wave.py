#!/usr/bin/env python3
"""Run the counter-propagating wave experiment; pass `--rho-im 1` (via extra
argv) to reproduce the finite-time admissibility event for imaginary speed."""
import sys

from ncihf.cli import main

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "runs/traveling_wave"
    sys.exit(main(["traveling-wave", "--out", out, "--t-end", "5.0"] + sys.argv[2:]))
