"""Matplotlib figures rendered next to the delimited tables: degree
distributions, clustering-coefficient distributions with an optional
highlighted node, and per-category ranking bars."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from ..analyze.centrality import RankingTable
from ..analyze.metrics import MetricsRecord

_DPI = 150
CATEGORY_ORDER = ("gene", "chemical", "disease")
CATEGORY_COLORS = {"gene": "#4c78a8", "chemical": "#54a24b", "disease": "#e45756"}


def degree_histogram_figure(metrics: MetricsRecord, path, title="degree distribution") -> str:
    degrees = sorted(metrics.degree_histogram)
    counts = [metrics.degree_histogram[d] for d in degrees]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(degrees, counts, width=0.9, color="#4c78a8")
    if degrees and max(degrees) > 30:
        ax.set_yscale("log")
        ax.set_xscale("log")
    ax.set_xlabel("degree")
    ax.set_ylabel("number of nodes")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return str(path)


def clustering_distribution_figure(
    metrics: MetricsRecord, path, highlight: str | None = None,
    title="local clustering coefficients",
) -> str:
    values = list(metrics.local_clustering.values())
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.hist(values, bins=40, color="#54a24b", edgecolor="white")
    if highlight is not None and highlight in metrics.local_clustering:
        mark = metrics.local_clustering[highlight]
        ax.axvline(mark, color="#d62728", linestyle="--", label=f"{highlight}: {mark:.3f}")
        ax.legend(loc="upper right", fontsize=8)
    ax.set_xlabel("local clustering coefficient")
    ax.set_ylabel("number of nodes")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return str(path)


def ranking_figure(table: RankingTable, path, top_k: int = 20, title: str | None = None) -> str:
    """Horizontal bars per category, strongest at the top of each panel."""
    panels = [
        (category, table.top(category, top_k))
        for category in CATEGORY_ORDER
        if any(r.category == category for r in table.rows)
    ]
    if not panels:
        panels = [("gene", [])]
    fig, axes = plt.subplots(
        1, len(panels), figsize=(4.2 * len(panels), 0.32 * top_k + 1.6), squeeze=False
    )
    for ax, (category, rows) in zip(axes[0], panels):
        names = [r.name[:28] for r in rows][::-1]
        scores = [r.score for r in rows][::-1]
        ax.barh(range(len(rows)), scores, color=CATEGORY_COLORS[category])
        ax.set_yticks(range(len(rows)))
        ax.set_yticklabels(names, fontsize=7)
        ax.set_title(category, fontsize=10)
        ax.tick_params(axis="x", labelsize=7)
    fig.suptitle(title or table.metric)
    fig.tight_layout(rect=(0, 0, 1, 0.96))
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return str(path)
