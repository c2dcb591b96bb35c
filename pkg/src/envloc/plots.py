"""Matplotlib rendering of figure curves and advantage-region masks.

Imported lazily by the CLI so the numerical modules stay free of any
plotting dependency.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import BoundaryNorm, ListedColormap

from .scenarios import FigureCurve

_CURVE_STYLE = [
    ("quantum_lower_db", "quantum LB", "#d62728", "--"),
    ("quantum_upper_db", "quantum UB", "#d62728", "-"),
    ("classical_lower_db", "classical LB", "#1f77b4", "--"),
    ("quantum_mle_db", "quantum MLE", "#2ca02c", "-"),
    ("classical_mle_db", "classical MLE", "#2ca02c", "--"),
]


def render_figure_curve(curve: FigureCurve, path: str, dpi: int = 150) -> None:
    """Plot error probability in dB against probe count and save to ``path``."""
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    probes = [r.probes for r in curve.rows]
    for attr, label, color, style in _CURVE_STYLE:
        ys = [getattr(r, attr) for r in curve.rows]
        if all(y is None for y in ys):
            continue
        xs = [x for x, y in zip(probes, ys) if y is not None and np.isfinite(y)]
        vals = [y for y in ys if y is not None and np.isfinite(y)]
        ax.plot(xs, vals, style, color=color, label=label, linewidth=1.4)
    ax.set_xlabel("probes per channel")
    ax.set_ylabel(r"error probability [dB], $10\log_{10} p_{\mathrm{err}}$")
    ax.set_title(curve.description, fontsize=10)
    ax.grid(alpha=0.3)
    ax.legend(frameon=False, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)


def render_region(
    eps_dif: np.ndarray, eps_av: np.ndarray, mask: np.ndarray, tau: float, path: str, dpi: int = 150
) -> None:
    """Plot the advantage mask over the (noise difference, mean noise) plane."""
    fig, ax = plt.subplots(figsize=(6.0, 4.8))
    cmap = ListedColormap(["#bbbbbb", "#f7f7f7", "#2ca02c"])
    norm = BoundaryNorm([-1.5, -0.5, 0.5, 1.5], cmap.N)
    mesh = ax.pcolormesh(eps_dif, eps_av, mask.T, cmap=cmap, norm=norm, shading="nearest")
    cbar = fig.colorbar(mesh, ax=ax, ticks=[-1, 0, 1])
    cbar.ax.set_yticklabels(["infeasible", "no advantage", "advantage"])
    ax.set_xlabel(r"noise difference $\epsilon_{\mathrm{dif}}$")
    ax.set_ylabel(r"mean noise $\epsilon_{\mathrm{av}}$")
    ax.set_title(f"provable-advantage region, tau = {tau}", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
    plt.close(fig)
