"""Rendering of solution curves and convergence plots to image files."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .convergence import ConvergenceReport
from .problem import SolutionSeries


def save_solution_figure(path: Path, curves: dict[str, SolutionSeries],
                         title: str = "") -> None:
    """Overlay one or more solution curves over time."""
    fig, ax = plt.subplots(figsize=(8, 5))
    for label, series in curves.items():
        ax.plot(series.times, series.values, label=label, linewidth=1.5)
    ax.set_xlabel("t")
    ax.set_ylabel("u(t)")
    if title:
        ax.set_title(title)
    if len(curves) > 1:
        ax.legend()
    ax.grid(True, alpha=0.3)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def save_convergence_figure(path: Path, report: ConvergenceReport,
                            title: str = "") -> None:
    """Log-log error estimate against the step, with a slope-one guide."""
    fig, ax = plt.subplots(figsize=(7, 5))
    steps = [row.step for row in report.rows]
    plotted = False
    for attr, label in (("eps_alpha", "current-time order"),
                        ("eps_gamma", "lagged order")):
        eps = [getattr(row, attr) for row in report.rows]
        if eps[0] is None:
            continue
        ax.loglog(steps, eps, "o-", label=label)
        if not plotted:
            guide = [eps[0] * s / steps[0] for s in steps]
            ax.loglog(steps, guide, "--", color="gray", alpha=0.7,
                      label="first order")
            plotted = True
    ax.set_xlabel("step h")
    ax.set_ylabel("error estimate")
    if title:
        ax.set_title(title)
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
