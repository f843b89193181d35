"""Matplotlib figures for campaign reports (headless Agg backend)."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .verify import CampaignReport  # noqa: E402

__all__ = ["render_slack_figures"]


def render_slack_figures(report: CampaignReport, outdir) -> list[Path]:
    """One slack histogram per inequality, log-scaled where slacks span decades."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for iid in sorted(report.slack_samples):
        slacks = np.asarray(report.slack_samples[iid])
        if slacks.size == 0:
            continue
        fig, ax = plt.subplots(figsize=(5.5, 3.5))
        ax.hist(slacks, bins=min(60, max(10, slacks.size // 20)),
                color="#3a6ea5", edgecolor="none")
        ax.axvline(0.0, color="crimson", lw=1.0)
        ax.set_title(iid)
        ax.set_xlabel("slack (lhs - rhs)")
        ax.set_ylabel("trials")
        fig.tight_layout()
        path = out / f"slack_{iid}.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written
