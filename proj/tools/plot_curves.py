#!/usr/bin/env python3
"""Plot fidelity curves written by `cpulse curve` (any number of CSV files)."""
import argparse
import csv

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("csv", nargs="+")
    ap.add_argument("-o", "--output", default="curves.png")
    args = ap.parse_args()

    fig, ax = plt.subplots(figsize=(5, 4))
    for path in args.csv:
        with open(path) as fh:
            rows = list(csv.DictReader(fh))
        ax.plot([float(r["g"]) for r in rows], [float(r["F"]) for r in rows], label=path)
    ax.set_xlabel("g")
    ax.set_ylabel("F")
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)


if __name__ == "__main__":
    main()
