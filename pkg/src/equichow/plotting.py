"""Figures for the CLI report path; always renders off-screen."""

from __future__ import annotations

import os
from typing import Dict, List, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .ledger import GradedTable, poincare_series  # noqa: E402

# fixed metadata keeps PNG bytes stable across runs
_META = {"Software": None}


def _save(fig, path):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fig.savefig(path, dpi=100, metadata=_META)
    plt.close(fig)
    return path


def plot_poincare(tables: Dict[str, GradedTable], path: str) -> str:
    """Grouped bar chart of Poincare series, one group per table."""
    fig, ax = plt.subplots(figsize=(7, 4))
    keys = list(tables)
    series = [poincare_series(tables[k]) for k in keys]
    top = max((len(s) for s in series), default=0)
    width = 0.8 / max(len(keys), 1)
    for i, (k, s) in enumerate(zip(keys, series)):
        xs = [d + i * width for d in range(len(s))]
        ax.bar(xs, s, width=width, label=k)
    ax.set_xticks([d + 0.4 - width / 2 for d in range(top)])
    ax.set_xticklabels([str(d) for d in range(top)])
    ax.set_xlabel("degree")
    ax.set_ylabel("generators")
    ax.yaxis.get_major_locator().set_params(integer=True)
    if len(keys) > 1:
        ax.legend(fontsize="small", ncol=2)
    fig.tight_layout()
    return _save(fig, path)


def plot_sweep(lemma: str, ns: Sequence[int], sizes: Sequence[int], statuses: List[str], path: str) -> str:
    """Term count of each replayed class against n, marked by status."""
    fig, ax = plt.subplots(figsize=(6, 3.5))
    colors = ["tab:green" if s == "pass" else "tab:orange" if s == "reported-only" else "tab:red"
              for s in statuses]
    ax.plot(ns, sizes, color="0.6", lw=1, zorder=1)
    ax.scatter(ns, sizes, c=colors, zorder=2)
    ax.set_xlabel("n")
    ax.set_ylabel("terms in integral class")
    ax.set_title(lemma)
    ax.xaxis.get_major_locator().set_params(integer=True)
    fig.tight_layout()
    return _save(fig, path)
