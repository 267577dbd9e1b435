"""Figure-equivalent tables: one CSV per ranking figure plus a metrics
summary JSON, written with stable ordering so re-runs are byte-identical."""

from __future__ import annotations

import csv
import json
import os

from ..analyze.centrality import RankingTable
from ..analyze.metrics import MetricsRecord

RANKING_HEADER = ["rank", "id", "name", "category", "score"]
CATEGORY_ORDER = ("gene", "chemical", "disease")


def write_ranking_csv(path, table: RankingTable, per_category_top: int | None = None) -> str:
    """Rows per category (gene, chemical, disease order), re-ranked within
    each; zero scores are dropped once any node scored above zero. An empty
    table yields a header-only file."""
    rows = []
    for category in CATEGORY_ORDER:
        picked = table.top(category, per_category_top) if per_category_top else [
            r for r in table.rows if r.category == category
        ]
        rows.extend(picked)
    if any(r.score > 0 for r in rows):
        rows = [r for r in rows if r.score > 0]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(RANKING_HEADER)
        for r in rows:
            writer.writerow([r.rank, r.id, r.name, r.category, repr(r.score)])
    return str(path)


def write_ranking_json(path, table: RankingTable) -> str:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(table.to_dict(), fh, ensure_ascii=False, indent=1)
        fh.write("\n")
    return str(path)


def write_metrics_json(path, metrics: MetricsRecord) -> str:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(metrics.summary(), fh, ensure_ascii=False, indent=1)
        fh.write("\n")
    return str(path)


def emit_figure_tables(
    out_dir,
    rankings: dict[str, RankingTable],
    metrics: MetricsRecord | None,
    top_k: int = 20,
) -> list[str]:
    """The six-file bundle: PPR and Katz top-k per category, HeteSim
    chemicals, disease similarity, chemical similarity, metrics summary.
    Missing rankings still produce header-only CSVs so the bundle shape is
    stable for downstream consumers."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    layout = [
        ("ppr", f"ppr_top{top_k}.csv", top_k),
        ("katz", f"katz_top{top_k}.csv", top_k),
        ("hetesim", "hetesim_chemicals.csv", top_k),
        ("disease_similarity", f"disease_similarity_top{top_k}.csv", top_k),
        ("chemical_similarity", f"chemical_similarity_top{top_k}.csv", top_k),
    ]
    for metric, filename, k in layout:
        table = rankings.get(metric, RankingTable(metric=metric))
        paths.append(write_ranking_csv(os.path.join(out_dir, filename), table, k))
    summary_path = os.path.join(out_dir, "metrics_summary.json")
    if metrics is not None:
        write_metrics_json(summary_path, metrics)
    else:
        with open(summary_path, "w", encoding="utf-8") as fh:
            json.dump({"warning": "metrics not computed"}, fh)
            fh.write("\n")
    paths.append(summary_path)
    return paths


def write_classification_csv(path, classification) -> str:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["edge_class", "source", "target"])
        for name in ("green", "red", "blue"):
            for a, b in sorted(getattr(classification, name)):
                writer.writerow([name, a, b])
    return str(path)


def write_coverage_csv(path, coverage) -> str:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["source", "target", "status", "length", "path"])
        for (a, b), nodes in sorted(coverage.paths.items()):
            writer.writerow([a, b, "covered", len(nodes) - 1, "|".join(nodes)])
        for a, b in sorted(coverage.uncovered):
            writer.writerow([a, b, "uncovered", "", ""])
    return str(path)
