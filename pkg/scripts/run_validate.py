#!/usr/bin/env python3
"""Run the full identity/property battery and print the machine-readable
report (exit code 1 on any failing check)."""
import sys

from ncihf.cli import main

if __name__ == "__main__":
    args = ["validate"] + sys.argv[1:]
    sys.exit(main(args))
