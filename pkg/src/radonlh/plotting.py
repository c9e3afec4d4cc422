"""Optional PNG rendering of CLI output tables (matplotlib is imported lazily)."""

from __future__ import annotations

import numpy as np


def plot_table(header, rows, path, title: str = "") -> None:
    """Plot ``value`` against the independent column that varies most."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    data = np.asarray(rows, dtype=float)
    vi = header.index("value")
    spread = [np.ptp(data[:, j]) if j != vi else -1.0 for j in range(len(header))]
    xi = int(np.argmax(spread))
    fig, ax = plt.subplots(figsize=(5, 3.5))
    order = np.argsort(data[:, xi])
    ax.plot(data[order, xi], data[order, vi], "o-", ms=3)
    if "exact" in header:
        ei = header.index("exact")
        ax.plot(data[order, xi], data[order, ei], "k--", lw=1, label="exact")
        ax.legend()
    ax.set_xlabel(header[xi])
    ax.set_ylabel("value")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
