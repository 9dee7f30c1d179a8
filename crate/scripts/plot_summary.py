"""Plot curves from a summary.csv written by the scent binary.

usage: python scripts/plot_summary.py results/xc/summary.csv [metric] [out.png]

Draws the across-seed mean of `metric` (default `objective`) against the
iteration for every config_id, with a one-std band.
"""

import sys

import matplotlib.pyplot as plt
import pandas as pd


def main():
    if len(sys.argv) < 2:
        sys.exit(__doc__)
    path = sys.argv[1]
    metric = sys.argv[2] if len(sys.argv) > 2 else "objective"
    out = sys.argv[3] if len(sys.argv) > 3 else path.replace(".csv", f"_{metric}.png")

    df = pd.read_csv(path)
    df = df[df.metric == metric]
    if df.empty:
        sys.exit(f"no rows for metric {metric!r}")
    fig, ax = plt.subplots(figsize=(6, 4))
    for cid, g in df.groupby("config_id"):
        g = g.sort_values("iteration")
        ax.plot(g.iteration, g["mean"], label=cid)
        ax.fill_between(g.iteration, g["mean"] - g["std"], g["mean"] + g["std"], alpha=0.2)
    ax.set_xlabel("iteration")
    ax.set_ylabel(metric)
    if metric in ("gap", "sq_error", "mean_gap", "mean_sq_error", "dual_error"):
        ax.set_yscale("log")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    main()
