"""SVG rendering of BER sweeps."""

from __future__ import annotations

import numpy as np


def render_sweep_svg(
    curves,
    out_path: str,
    threshold: float = 1e-2,
    lu_deg: float | None = None,
    title: str | None = None,
) -> None:
    """Write a self-contained SVG of one or more BER-vs-azimuth curves.

    ``curves`` is a sequence of (label, angles, ber).  The BER axis is
    logarithmic; zero-BER samples are clipped to the plot floor so they stay
    visible.  The detection threshold and (optionally) the LU direction are
    drawn as reference lines.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    floor = 0.5 / 10.0
    positives = [b[b > 0] for _, _, b in curves if np.any(b > 0)]
    if positives:
        floor = min(min(p.min() for p in positives) / 2.0, threshold / 10.0)
    floor = max(floor, 1e-9)

    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    for label, angles, ber in curves:
        ax.semilogy(angles, np.maximum(ber, floor), label=label, linewidth=1.2)
    ax.axhline(threshold, color="crimson", linestyle="--", linewidth=0.9)
    ax.annotate(
        f"threshold {threshold:g}",
        xy=(2, threshold),
        xytext=(2, threshold * 1.3),
        fontsize=8,
        color="crimson",
    )
    if lu_deg is not None:
        ax.axvline(lu_deg % 360.0, color="seagreen", linestyle=":", linewidth=0.9)
        ax.annotate(
            f"LU {lu_deg % 360.0:g}\N{DEGREE SIGN}",
            xy=(lu_deg % 360.0, 0.6),
            fontsize=8,
            color="seagreen",
            ha="center",
        )
    ax.set_xlabel("azimuth (deg)")
    ax.set_ylabel("bit error rate")
    ax.set_xlim(0, 360)
    ax.set_ylim(floor, 1.0)
    ax.set_xticks(np.arange(0, 361, 45))
    ax.grid(True, which="both", alpha=0.25)
    if title:
        ax.set_title(title)
    if len(curves) > 1:
        ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, format="svg")
    plt.close(fig)
