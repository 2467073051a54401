#!/usr/bin/env python3
"""Reproduce the method-comparison experiment on the synthetic fixtures and,
optionally, on user-supplied WAV files.

Generates the fixtures, sweeps all three methods on each input, and leaves one
merged report CSV per input in the output directory. Plot the curves with
scripts/plot_curves.py (error against nonzero count, x reversed).

Usage:
    python scripts/run_comparison.py --out-dir results [extra.wav ...]
"""

import argparse
import sys
from pathlib import Path

from pgbz.cli import main as pgbz_main


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("inputs", nargs="*", type=Path, help="extra WAV files to sweep")
    parser.add_argument("--out-dir", type=Path, default=Path("results"))
    parser.add_argument("--duration", type=float, default=2.0, help="fixture length in seconds")
    parser.add_argument("--rate", type=float, default=22050.0)
    parser.add_argument("--levels", type=int, default=25)
    args = parser.parse_args()

    fixture_dir = args.out_dir / "fixtures"
    rc = pgbz_main(
        ["synthetic", "--duration", str(args.duration), "--rate", str(args.rate),
         "--out-dir", str(fixture_dir)]
    )
    if rc != 0:
        return rc

    inputs = sorted(fixture_dir.glob("*.wav")) + list(args.inputs)
    for wav in inputs:
        print(f"== {wav}")
        rc = pgbz_main(
            ["compare", str(wav), "--levels", str(args.levels), "--out-dir", str(args.out_dir)]
        )
        if rc != 0:
            return rc
    print(f"\nreports in {args.out_dir}/*.compare.report.csv")
    return 0


if __name__ == "__main__":
    sys.exit(main())
