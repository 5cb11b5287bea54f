#!/usr/bin/env python3
"""Plot a sweep CSV as outage-vs-SNR curves (one line per variant/method).

Usage: plot_outage.py SWEEP.csv [OUT.png]
"""

import csv
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

VARIANT_COLS = ("N", "K", "I_r", "I_d", "R", "rhoI_r_dB", "rhoI_d_dB")
STYLE = {"analytic": "-", "asymptotic": "--", "monte_carlo": ":"}
MARKER = {"analytic": "", "asymptotic": "", "monte_carlo": "o"}


def main(argv):
    if len(argv) < 2:
        print(__doc__.strip(), file=sys.stderr)
        return 2
    src = argv[1]
    dst = argv[2] if len(argv) > 2 else src.rsplit(".", 1)[0] + ".png"

    curves = {}
    with open(src, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            if row["status"] != "ok" or not row["p"] or float(row["p"]) <= 0:
                continue
            key = (tuple(row[c] for c in VARIANT_COLS), row["method"])
            curves.setdefault(key, []).append((float(row["rho_dB"]), float(row["p"])))

    fig, ax = plt.subplots(figsize=(7, 5))
    for (variant, method), pts in sorted(curves.items()):
        pts.sort()
        label_bits = [f"{c}={v}" for c, v in zip(VARIANT_COLS, variant) if c in ("N", "K")]
        label_bits += [
            f"gI=({variant[5]},{variant[6]})" if method == "analytic" else ""
        ]
        ax.semilogy(
            [r for r, _ in pts],
            [p for _, p in pts],
            STYLE.get(method, "-"),
            marker=MARKER.get(method, ""),
            markersize=4,
            fillstyle="none",
            label=" ".join(b for b in label_bits if b) + f" [{method}]",
        )
    ax.set_xlabel("average SNR (dB)")
    ax.set_ylabel("outage probability")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(dst, dpi=150)
    print(dst)
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv))
