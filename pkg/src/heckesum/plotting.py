"""Figures written next to the CSV outputs."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "font.size": 9.0,
    "axes.labelsize": 9.0,
    "legend.fontsize": 8.0,
    "xtick.labelsize": 8.0,
    "ytick.labelsize": 8.0,
    "lines.linewidth": 1.2,
    "svg.hashsalt": "heckesum",
    "figure.figsize": (5.0, 3.4),
}


def plot_series(series, path, fit=None) -> Path:
    """log-log |S(N)| with its running max and reference slopes 3/4 and 5/6."""
    path = Path(path)
    N = np.asarray(series.grid, dtype=float)
    a = series.abs
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.loglog(N, a, "o-", ms=2.5, label=r"$|S(N)|$")
        ax.loglog(N, np.maximum.accumulate(a), "-", color="0.4", lw=0.8, label="running max")
        pos = a > 0
        if pos.any():
            n0, s0 = N[pos][0], a[pos][0]
            for k, style in ((3 / 4, "--"), (5 / 6, ":")):
                ax.loglog(N, s0 * (N / n0) ** k, style, color="k", lw=0.8,
                          label=f"slope {k:.3g}")
        if fit is not None:
            ax.set_title(f"fit exponent {fit.exponent:.4f} ({fit.envelope_mode})")
        ax.set_xlabel("N")
        ax.set_ylabel(rf"$|S(N)|$, $\alpha={series.alpha:g}$")
        ax.legend(frameon=False)
        fig.tight_layout()
        # fixed metadata keeps the SVG byte-stable across runs
        fig.savefig(path, metadata={"Date": None})
        plt.close(fig)
    return path


def plot_components(rows, path) -> Path:
    """Bar chart of |S_i| for the five Vaughan pieces."""
    path = Path(path)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.bar([f"S{r['i']}" for r in rows], [r["abs"] for r in rows], color="0.5")
        ax.set_ylabel(r"$|S_i(N)|$")
        ax.set_title(f"N={rows[0]['N']}, alpha={rows[0]['alpha']:g}")
        fig.tight_layout()
        fig.savefig(path, metadata={"Date": None})
        plt.close(fig)
    return path
