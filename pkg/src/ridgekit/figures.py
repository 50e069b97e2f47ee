"""Figure rendering with byte-reproducible SVG output.

Matplotlib's SVG backend embeds a timestamp and hash-derived element ids
by default; pinning the hash salt and dropping the date makes a rerun
with identical inputs produce an identical file. The Agg backend is
forced so no display is ever needed.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

# 800 x 600 px canvas at the default 100 dpi.
_FIGSIZE = (8.0, 6.0)
_RC = {"svg.hashsalt": "ridgekit"}


def _save_svg(fig, out_path) -> Path:
    out_path = Path(out_path)
    try:
        with matplotlib.rc_context(_RC):
            fig.savefig(out_path, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
    return out_path


def coefficient_path_figure(lambdas, betas, out_path, labels=None) -> Path:
    """Plot each coefficient against the penalty on a log axis.

    ``betas`` is p x G as stored in a RidgePath. Returns the written path.
    """
    p = betas.shape[0]
    if labels is None:
        labels = [f"beta_{j + 1}" for j in range(p)]
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    for j in range(p):
        ax.plot(lambdas, betas[j], label=labels[j], linewidth=1.2)
    ax.axhline(0.0, color="0.6", linewidth=0.8)
    ax.set_xscale("log")
    ax.set_xlabel("lambda")
    ax.set_ylabel("coefficient")
    ax.set_title("ridge coefficient paths")
    if p <= 12:
        ax.legend(loc="best", fontsize="small")
    return _save_svg(fig, out_path)


def cv_curve_figure(lambdas, errors, selected, out_path) -> Path:
    """Plot the cross-validation error curve and mark the selected penalty."""
    fig, ax = plt.subplots(figsize=_FIGSIZE)
    ax.plot(lambdas, errors, linewidth=1.2)
    ax.axvline(selected, color="0.4", linewidth=0.8, linestyle="--")
    ax.set_xscale("log")
    ax.set_xlabel("lambda")
    ax.set_ylabel("cross-validation error")
    ax.set_title(f"selected lambda = {selected:.6g}")
    return _save_svg(fig, out_path)
