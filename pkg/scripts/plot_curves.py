#!/usr/bin/env python3
"""Plot error-vs-coefficient-count curves from one or more report CSVs.

The x axis (remaining nonzero coefficients, log scale) is reversed so that
compression increases to the right, full maps on the left.

Usage:
    python scripts/plot_curves.py results/chirp.compare.report.csv -o chirp.png
"""

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from pgbz import load_report_rows


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("reports", nargs="+", type=Path)
    parser.add_argument("-o", "--output", type=Path, default=Path("curves.png"))
    args = parser.parse_args()

    fig, axes = plt.subplots(1, len(args.reports), figsize=(6 * len(args.reports), 4.5),
                             squeeze=False)
    for axis, report in zip(axes[0], args.reports):
        rows = load_report_rows(report)
        for method in sorted({row["method"] for row in rows}):
            series = [(r["nonzero"], r["mse_percent"]) for r in rows if r["method"] == method]
            series.sort(reverse=True)
            axis.plot([s[0] for s in series], [s[1] for s in series], marker="o",
                      markersize=3, label=method)
        axis.set_xscale("log")
        axis.set_yscale("log")
        axis.invert_xaxis()
        axis.set_xlabel("nonzero coefficients (log, reversed)")
        axis.set_ylabel("error (%)")
        axis.set_title(report.stem)
        axis.legend()
        axis.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(args.output, dpi=130)
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
