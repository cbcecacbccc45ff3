"""Figure rendering for run directories.

Renders the two standard report figures next to the delimited output:
quality/diversity against the sweep value, and the per-run loss curves.
Headless by construction (Agg backend).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .runner import load_run_reports, report_plot_data


def quality_diversity_figure(rows, path, x_label="sweep value") -> Path:
    """Mean SC and mean 1-NMI versus the sweep value, twin axes."""
    xs = [r[0] for r in rows]
    sc = [r[1] for r in rows]
    div = [r[2] for r in rows]
    fig, ax1 = plt.subplots(figsize=(6.0, 4.0))
    ax1.plot(xs, sc, "o-", color="tab:blue")
    ax1.set_xlabel(x_label)
    ax1.set_ylabel("quality (SC)", color="tab:blue")
    ax1.tick_params(axis="y", labelcolor="tab:blue")
    ax1.grid(True, alpha=0.3)
    if any(d is not None for d in div):
        ax2 = ax1.twinx()
        ax2.plot(xs, div, "s--", color="tab:red")
        ax2.set_ylabel("diversity (1-NMI)", color="tab:red")
        ax2.tick_params(axis="y", labelcolor="tab:red")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def convergence_figure(histories, labels, path) -> Path:
    """Loss history per run, log-scaled epochs on a linear axis."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for hist, label in zip(histories, labels):
        ax.plot(range(len(hist)), hist, alpha=0.7, label=label)
    ax.set_xlabel("epoch")
    ax.set_ylabel("loss")
    ax.grid(True, alpha=0.3)
    if labels and len(labels) <= 12:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return Path(path)


def render_run_figures(run_dir) -> list[Path]:
    """Write quality_diversity.png and convergence.png for a finished run."""
    run_dir = Path(run_dir)
    csv_path = run_dir / "plot_data.csv"
    if not csv_path.exists():
        csv_path = report_plot_data(run_dir)
    rows = []
    for line in csv_path.read_text().splitlines()[1:]:
        value, sc, div = line.split(",")
        rows.append(
            (float(value), float(sc), float(div) if div else None)
        )
    reports = load_run_reports(run_dir)
    axis = reports[0].get("sweep_axis") or "run"
    out = [
        quality_diversity_figure(
            rows, run_dir / "quality_diversity.png", x_label=axis
        ),
        convergence_figure(
            [r["loss_history"] for r in reports],
            [f"p={r['sweep_value']} r={r['repeat']}" for r in reports],
            run_dir / "convergence.png",
        ),
    ]
    return out
