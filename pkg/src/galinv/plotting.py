"""Matplotlib figures for signatures.  Imported lazily by the CLI."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

LABELS = {"w1": r"$\omega_1 = |X''|$", "w2": r"$\omega_2 = |X'''|$",
          "w3": r"$\omega_3 = |X'' \times X'''|$"}


def plot_signatures(path, signatures, names=None, title=None):
    """Three stacked panels (w1, w2, w3 against s), one line per signature."""
    names = names or [f"curve {k + 1}" for k in range(len(signatures))]
    fig, axes = plt.subplots(3, 1, figsize=(7, 7), sharex=True)
    for sig, name in zip(signatures, names):
        for ax, key in zip(axes, ("w1", "w2", "w3")):
            ax.plot(sig.s, getattr(sig, key), lw=1.2, label=name)
    for ax, key in zip(axes, ("w1", "w2", "w3")):
        ax.set_ylabel(LABELS[key])
        ax.grid(alpha=0.3)
    axes[-1].set_xlabel("s" if signatures[0].meta.get("parameter") == "arclength" else "t - t0")
    if len(signatures) > 1:
        axes[0].legend(frameon=False)
    if title:
        axes[0].set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
