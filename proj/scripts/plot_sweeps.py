#!/usr/bin/env python3
"""Plot sweep CSVs: infidelity against eta ratio, one line per file.

    python3 scripts/plot_sweeps.py out/fig1b -o fig1b.png
"""
import argparse
import pathlib

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd


def label(df):
    name = df["scenario"].iloc[0]
    k = int(df["k"].iloc[0])
    return name if k == 0 else f"{name} k={k}"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("paths", nargs="+", type=pathlib.Path, help="CSV files or directories of CSVs")
    ap.add_argument("-o", "--output", type=pathlib.Path, default=pathlib.Path("sweep.png"))
    ap.add_argument("--linear", action="store_true", help="linear infidelity axis")
    args = ap.parse_args()

    files = []
    for p in args.paths:
        files += sorted(p.glob("*.csv")) if p.is_dir() else [p]
    frames = [pd.read_csv(f) for f in files]
    frames = [f for f in frames if "infidelity" in f.columns and len(f)]
    if not frames:
        raise SystemExit("no sweep CSVs found")

    fig, ax = plt.subplots(figsize=(6, 4))
    for df in sorted(frames, key=lambda d: (d["k"].iloc[0] == 0, d["k"].iloc[0])):
        dashed = df["k"].iloc[0] == 0
        ax.plot(df["eta_ratio"], df["infidelity"].clip(lower=1e-16), "--" if dashed else "-o", ms=3, label=label(df))
    if not args.linear:
        ax.set_yscale("log")
    ax.set_xlabel("eta ratio")
    ax.set_ylabel("1 - F")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(args.output, dpi=150)
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
