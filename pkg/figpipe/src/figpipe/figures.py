"""Paper-style figures regenerated from the engine's CSV outputs.

Four figures:

  fig2   temperature-ratio heatmap over (alpha, phi) with the validity
         boundary overlaid dashed and the phi = k pi lines dash-dotted
  fig3   efficiency map eta / eta_CA over the phase sweep
  cycle  cascade cycle: energy-frequency loop plus omega(t) and E(t)
         traces with heating/cooling bands
  fig4   work definitions and heat versus shared mutual information, the
         piston-to-Alicki ratio on a right-hand axis

Nothing here recomputes physics: every plotted number comes out of a CSV.
"""
from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .schema import Table, read_table, require_columns

FIGURE_IDS = ("fig2", "fig3", "cycle", "fig4")

_SAVE_KW = {"dpi": 150, "bbox_inches": "tight", "metadata": {"Software": None}}


def _finish(fig, out_path: Path):
    fig.savefig(out_path, **_SAVE_KW)
    plt.close(fig)
    return out_path


def plot_temp_ratio(csv_path: str | Path, boundary_csv: str | Path, out_path: str | Path):
    """Heatmap of T_phi / T_cl with the domain boundary overlaid."""
    table = read_table(csv_path)
    require_columns(table, ["alpha[-]", "phi[rad]", "ratio[-]"], Path(csv_path).name)
    boundary = read_table(boundary_csv)
    require_columns(
        boundary, ["phi[rad]", "alpha_boundary[-]"], Path(boundary_csv).name
    )

    alphas = np.unique(table.columns["alpha[-]"])
    phis = np.unique(table.columns["phi[rad]"])
    grid = np.full((len(alphas), len(phis)), np.nan)
    a_idx = {a: i for i, a in enumerate(alphas)}
    p_idx = {p: j for j, p in enumerate(phis)}
    for a, p, r in zip(
        table.columns["alpha[-]"], table.columns["phi[rad]"], table.columns["ratio[-]"]
    ):
        grid[a_idx[a], p_idx[p]] = r

    fig, ax = plt.subplots(figsize=(7.0, 4.2))
    masked = np.ma.masked_invalid(grid)
    mesh = ax.pcolormesh(phis, alphas, masked, shading="nearest", cmap="RdBu_r")
    fig.colorbar(mesh, ax=ax, label=r"$T_\phi / T_{cl}$")
    ax.plot(
        boundary.columns["phi[rad]"],
        boundary.columns["alpha_boundary[-]"],
        "k--",
        lw=1.4,
        label="validity boundary",
    )
    for k in (0, 1, 2):
        ax.axvline(k * math.pi, color="gray", ls="-.", lw=0.9)
    ax.set_xlabel(r"coherence phase $\phi$ [rad]")
    ax.set_ylabel(r"$\alpha$")
    ax.set_ylim(alphas.min(), max(alphas.max(), boundary.columns["alpha_boundary[-]"].max()))
    ax.legend(loc="upper right", fontsize=8)
    ax.set_title("Apparent over classical bath temperature")
    return fig, _finish(fig, Path(out_path))


def plot_efficiency_map(csv_path: str | Path, out_path: str | Path):
    """Map of eta / eta_CA over the hot and cold coherence phases."""
    table = read_table(csv_path)
    require_columns(
        table, ["phi_H[rad]", "phi_C[rad]", "ratio[-]"], Path(csv_path).name
    )
    phi_h = np.unique(table.columns["phi_H[rad]"])
    phi_c = np.unique(table.columns["phi_C[rad]"])
    grid = np.full((len(phi_h), len(phi_c)), np.nan)
    for ph, pc, r in zip(
        table.columns["phi_H[rad]"], table.columns["phi_C[rad]"], table.columns["ratio[-]"]
    ):
        grid[np.searchsorted(phi_h, ph), np.searchsorted(phi_c, pc)] = r

    fig, ax = plt.subplots(figsize=(5.6, 4.4))
    mesh = ax.pcolormesh(
        phi_c / math.pi, phi_h / math.pi, np.ma.masked_invalid(grid),
        shading="nearest", cmap="viridis",
    )
    fig.colorbar(mesh, ax=ax, label=r"$\eta / \eta^{CA}$")
    ax.set_xlabel(r"$\phi_C / \pi$")
    ax.set_ylabel(r"$\phi_H / \pi$")
    ax.set_title("Engine efficiency against the Curzon-Ahlborn benchmark")
    return fig, _finish(fig, Path(out_path))


def _stroke_bands(table: Table):
    """Contiguous (start, end, kind) time bands of the isochore strokes."""
    times = table.columns["t[t]"]
    kinds = table.text_columns["stroke"]
    bands = []
    start = 0
    for k in range(1, len(kinds) + 1):
        if k == len(kinds) or kinds[k] != kinds[start]:
            if kinds[start].endswith("isochore"):
                bands.append((times[start], times[k - 1], kinds[start]))
            start = k
    return bands


def plot_cycle(csv_path: str | Path, out_path: str | Path):
    """Cascade cycle: E-omega loop on top, omega(t) and E(t) below."""
    table = read_table(csv_path)
    require_columns(
        table,
        ["t[t]", "omega[1/t]", "E1[1/t]", "E2[1/t]"],
        Path(csv_path).name,
    )
    t = table.columns["t[t]"]
    omega = table.columns["omega[1/t]"]
    e1 = table.columns["E1[1/t]"]
    e2 = table.columns["E2[1/t]"]

    fig, (ax_loop, ax_w, ax_e) = plt.subplots(
        3, 1, figsize=(6.4, 8.0), height_ratios=[2.2, 1, 1]
    )
    ax_loop.plot(omega, e1, "-", color="tab:blue", lw=1.5, label="cavity 1")
    smaller = (e2.max() - e2.min()) < (e1.max() - e1.min())
    ax_loop.plot(
        omega, e2, "--" if smaller else "-",
        color="gray", lw=1.4, label="cavity 2",
    )
    ax_loop.set_xlabel(r"$\omega$ [1/t]")
    ax_loop.set_ylabel(r"$E$ [1/t]")
    ax_loop.legend(fontsize=8)
    ax_loop.set_title("Energy-frequency diagram")

    for ax, series, label in ((ax_w, omega, r"$\omega$ [1/t]"), (ax_e, e1, r"$E$ [1/t]")):
        ax.plot(t, series, color="tab:blue", lw=1.2)
        if ax is ax_e:
            ax.plot(t, e2, color="gray", ls="--", lw=1.1)
        for start, end, kind in _stroke_bands(table):
            color = "red" if kind.startswith("hot") else "blue"
            ax.axvspan(start, end, color=color, alpha=0.12)
        ax.set_xlabel("t [t]")
        ax.set_ylabel(label)
    fig.tight_layout()
    return fig, _finish(fig, Path(out_path))


def plot_mi_work(csv_path: str | Path, out_path: str | Path):
    """Work definitions and heat against mutual information; ratio on the right axis."""
    table = read_table(csv_path)
    require_columns(
        table,
        ["MI[nat]", "W_mech[1/t]", "W_al[1/t]", "Q_hot[1/t]", "ratio_Wm_Wal[-]"],
        Path(csv_path).name,
    )
    order = np.argsort(table.columns["MI[nat]"])
    mi = table.columns["MI[nat]"][order]

    fig, ax = plt.subplots(figsize=(6.2, 4.2))
    ax.plot(mi, table.columns["W_mech[1/t]"][order], "o-", label=r"$W^m$")
    ax.plot(mi, table.columns["W_al[1/t]"][order], "s-", label=r"$W^{Al}$")
    ax.plot(mi, table.columns["Q_hot[1/t]"][order], "^-", label=r"$Q_{hot}$")
    ax.set_xlabel("mutual information [nat]")
    ax.set_ylabel("energy [1/t]")
    ax.set_yscale("log")
    ax.legend(loc="center left", fontsize=8)

    ax_ratio = ax.twinx()
    ratio_line, = ax_ratio.plot(
        mi, table.columns["ratio_Wm_Wal[-]"][order], "g--", label=r"$W^m / W^{Al}$"
    )
    ax_ratio.set_ylabel(r"$W^m / W^{Al}$", color="g")
    ax_ratio.tick_params(axis="y", labelcolor="g")
    ax.set_title("Work output definitions versus shared correlations")
    fig.tight_layout()
    return fig, ratio_line, _finish(fig, Path(out_path))
