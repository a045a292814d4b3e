"""Figures for the accuracy report; rendered straight to files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = ["plot_table1"]


def plot_table1(rows, path, dpi: int = 150):
    """Two panels: estimate/exact ratio against n, and both log10 volumes."""
    with_ratio = [r for r in rows if r.ratio is not None]
    fig, (ax_ratio, ax_vol) = plt.subplots(1, 2, figsize=(9, 3.6))

    ax_ratio.axhline(1.0, color="0.6", lw=0.8, ls="--")
    ax_ratio.plot([r.n for r in with_ratio], [r.ratio for r in with_ratio], "o-", color="C0")
    ax_ratio.set_xlabel("n")
    ax_ratio.set_ylabel("estimate / exact")
    ax_ratio.set_title("Birkhoff volume estimate accuracy")

    ax_vol.plot([r.n for r in rows], [r.estimate_log.log10() for r in rows], "s--",
                color="C1", label="estimate")
    ax_vol.plot([r.n for r in with_ratio], [r.exact_volume.log() / 2.302585092994046
                                           for r in with_ratio], "o", color="C0", label="exact")
    ax_vol.set_xlabel("n")
    ax_vol.set_ylabel("log10 vol(B_n)")
    ax_vol.legend(frameon=False)

    for ax in (ax_ratio, ax_vol):
        ax.set_xticks([r.n for r in rows])
        ax.spines["top"].set_visible(False)
        ax.spines["right"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
    return path
