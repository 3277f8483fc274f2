"""Figure rendering for the CLI report paths.

Each report command can render its delimited output as PNG figures next to
the data files.  All figures are file-only (Agg backend) so rendering works
headless and in CI.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .estimates import EstimateTable
from .model import OscillatorParams, ThermalState
from .oracles import classical_variance_x, energy_mean, TheorySide

_DPI = 150


def _finish(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def sweep_figure(
    temperatures: Sequence[float],
    values: Sequence[float],
    quantity: str,
    side: str,
    outdir: Path,
    counterpart: Sequence[float] | None = None,
    log_t: bool = False,
) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(temperatures, values, "o-", ms=3, label=side)
    if counterpart is not None:
        other = "quantum" if side == "classical" else "classical"
        ax.plot(temperatures, counterpart, "s--", ms=3, label=other)
        ax.legend()
    if log_t:
        ax.set_xscale("log")
        if all(v > 0 for v in values):
            ax.set_yscale("log")
    ax.set_xlabel("temperature")
    ax.set_ylabel(quantity)
    ax.set_title(f"{quantity} vs temperature")
    return _finish(fig, outdir / f"sweep_{quantity}.png")


def compare_figure(rows: Sequence[dict], outdir: Path) -> Path:
    """Two panels: the H2 and L2 classical/quantum pairs with their constant gaps."""
    t = [row["T"] for row in rows]
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    panels = (
        ("H2", "H2_classical", "H2_quantum", "H2_difference"),
        ("L2", "L2_classical", "L2_quantum", "L2_difference"),
    )
    for ax, (name, ck, qk, dk) in zip(axes, panels):
        ax.plot(t, [r[ck] for r in rows], "o-", ms=3, label="classical")
        ax.plot(t, [r[qk] for r in rows], "s--", ms=3, label="quantum")
        ax.plot(t, [r[dk] for r in rows], "k:", label="difference")
        ax.set_xlabel("temperature")
        ax.set_ylabel(name)
        if len(t) > 1 and min(t) > 0:
            ax.set_xscale("log")
        ax.legend(fontsize=8)
    fig.suptitle("classical vs quantum second moments")
    return _finish(fig, outdir / "compare.png")


def estimates_figure(table: EstimateTable, outdir: Path, stem: str) -> Path:
    """z-scores of every estimated row against its analytic reference."""
    names = [r.name for r in table]
    zs = [r.z for r in table]
    fig, ax = plt.subplots(figsize=(6, 0.5 * len(names) + 2))
    ypos = np.arange(len(names))
    ax.barh(ypos, zs, color=["tab:red" if abs(z) > 5 else "tab:blue" for z in zs])
    for bound in (-5, -3, 3, 5):
        ax.axvline(bound, color="k", ls=":", lw=0.8)
    ax.set_yticks(ypos, names)
    ax.set_xlabel("z-score vs analytic reference")
    ax.set_xlim(min(-6, min(zs) - 1), max(6, max(zs) + 1))
    return _finish(fig, outdir / f"{stem}_z.png")


def trajectory_figure(
    x: np.ndarray,
    h: np.ndarray,
    params: OscillatorParams,
    state: ThermalState,
    outdir: Path,
) -> Path:
    """Position marginal and energy distribution against the analytic laws."""
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    var = classical_variance_x(params, state)
    grid = np.linspace(-4 * var**0.5, 4 * var**0.5, 200)
    axes[0].hist(x, bins=80, density=True, alpha=0.6, label="simulated")
    axes[0].plot(
        grid,
        np.exp(-(grid**2) / (2 * var)) / np.sqrt(2 * np.pi * var),
        "k-",
        label="analytic",
    )
    axes[0].set_xlabel("x")
    axes[0].set_ylabel("density")
    axes[0].legend(fontsize=8)

    scale = energy_mean(TheorySide.CLASSICAL, params, state)
    hgrid = np.linspace(0, h.max(), 200)
    axes[1].hist(h, bins=80, density=True, alpha=0.6, label="simulated")
    axes[1].plot(hgrid, np.exp(-hgrid / scale) / scale, "k-", label="exponential")
    axes[1].set_yscale("log")
    axes[1].set_xlabel("H")
    axes[1].legend(fontsize=8)
    return _finish(fig, outdir / "simulate_diagnostics.png")
