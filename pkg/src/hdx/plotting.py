"""Sweep figures rendered straight to files, next to the CSV output."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .models import SweepResult  # noqa: E402


def render_sweep_figure(result: SweepResult, path: str | Path,
                        threshold: float | None = None,
                        title: str | None = None) -> None:
    """Empirical probability against the grid, Wilson bars, threshold line.

    SVG output is kept byte-stable across reruns (fixed hash salt, no
    creation date), matching the determinism contract of the CSV next to it.
    """
    path = Path(path)
    plt.rcParams["svg.hashsalt"] = "hdx-sweep"
    xs = [pt.value for pt in result.points]
    ys = [pt.p_hat for pt in result.points]
    lo = [pt.p_hat - pt.ci_low for pt in result.points]
    hi = [pt.ci_high - pt.p_hat for pt in result.points]

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.errorbar(xs, ys, yerr=[lo, hi], fmt="o-", capsize=3,
                color="#2c7bb6", label="empirical probability")
    if threshold is not None:
        ax.axvline(threshold, color="gray", linestyle="--", alpha=0.8,
                   label=f"threshold {threshold:.4g}")
    param = "p" if result.spec.template.model in ("er", "lm") else "k"
    ax.set_xlabel(param)
    ax.set_ylabel("empirical probability")
    ax.set_ylim(-0.05, 1.05)
    if title:
        ax.set_title(title)
    ax.legend(loc="best")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    if path.suffix.lower() == ".svg":
        fig.savefig(path, metadata={"Date": None})
    else:
        fig.savefig(path, dpi=150)
    plt.close(fig)
