import json

import pytest

from litkg.analyze.centrality import RankingRow, RankingTable
from litkg.analyze.metrics import characterize
from litkg.errors import RenderCapError
from litkg.model import KnowledgeGraph
from litkg.refgraph import ReferenceGraph
from litkg.report import (
    clustering_distribution_figure,
    degree_histogram_figure,
    emit_figure_tables,
    emit_html_view,
    force_layout,
    ranking_figure,
    write_ranking_csv,
)
from litkg.validate import classify_edges, overlay_export

from conftest import complete_graph, random_graph


def ranking(metric, rows):
    return RankingTable(
        metric=metric,
        rows=[RankingRow(i + 1, rid, rid.lower(), cat, score) for i, (rid, cat, score) in enumerate(rows)],
    )


class TestHtmlView:
    def test_empty_graph_valid_html(self, tmp_path):
        path = emit_html_view(KnowledgeGraph(), tmp_path / "empty.html")
        text = open(path, encoding="utf-8").read()
        assert text.startswith("<!DOCTYPE html>")
        assert "graph-data" in text

    def test_classified_overlay_distinguishes_classes(self, tmp_path):
        kg = complete_graph(["A", "B", "C"])
        ref = ReferenceGraph(kind="gene_gene")
        ref.add_edge("A", "B", "gene", "gene", tag="t")
        ref.add_edge("A", "C", "gene", "gene", tag="t")
        cls = classify_edges(kg, ref)
        overlay = overlay_export(kg, cls)
        path = emit_html_view(overlay, tmp_path / "overlay.html")
        text = open(path, encoding="utf-8").read()
        assert "#2ca02c" in text  # green
        assert "#d62728" in text  # red

    def test_render_cap_enforced(self, tmp_path, rng):
        kg = random_graph(rng, n_nodes=30)
        with pytest.raises(RenderCapError) as err:
            emit_html_view(kg, tmp_path / "big.html", render_cap=10)
        assert "module" in str(err.value)

    def test_deterministic_bytes_for_seed(self, tmp_path, rng):
        kg = random_graph(rng, n_nodes=20)
        p1 = emit_html_view(kg, tmp_path / "a.html", seed=7)
        p2 = emit_html_view(kg, tmp_path / "b.html", seed=7)
        assert open(p1, "rb").read() == open(p2, "rb").read()
        p3 = emit_html_view(kg, tmp_path / "c.html", seed=8)
        assert open(p1, "rb").read() != open(p3, "rb").read()

    def test_layout_unit_square(self, rng):
        kg = random_graph(rng, n_nodes=25)
        layout = force_layout(sorted(kg.nodes), list(kg.edge_pairs()), seed=1)
        assert len(layout) == kg.node_count
        assert all(0 <= x <= 1 and 0 <= y <= 1 for x, y in layout.values())


class TestFigureTables:
    def test_bundle_has_six_files(self, tmp_path, triangle):
        metrics = characterize(triangle)
        rankings = {
            "ppr": ranking("ppr", [("GENE:1", "gene", 0.4), ("CHEM:1", "chemical", 0.3)]),
            "katz": ranking("katz", [("GENE:1", "gene", 1.4)]),
            "hetesim": ranking("hetesim", [("CHEM:1", "chemical", 0.9)]),
            "disease_similarity": ranking("disease_similarity", [("MESH:1", "disease", 0.5)]),
            "chemical_similarity": ranking("chemical_similarity", [("CHEM:2", "chemical", 0.2)]),
        }
        paths = emit_figure_tables(tmp_path, rankings, metrics, top_k=20)
        assert len(paths) == 6
        summary = json.load(open(tmp_path / "metrics_summary.json"))
        assert summary["diameter"] == 1

    def test_empty_ranking_header_only(self, tmp_path):
        path = write_ranking_csv(tmp_path / "empty.csv", RankingTable(metric="hetesim"))
        assert open(path).read().strip() == "rank,id,name,category,score"

    def test_five_row_hetesim_five_rows(self, tmp_path):
        table = ranking(
            "hetesim",
            [(f"CHEM:{i}", "chemical", 0.5 - i / 10) for i in range(5)],
        )
        path = write_ranking_csv(tmp_path / "h.csv", table, per_category_top=20)
        lines = open(path).read().strip().splitlines()
        assert len(lines) == 6  # header + 5

    def test_zero_scores_dropped_when_nonzero_exist(self, tmp_path):
        table = ranking(
            "hetesim",
            [("CHEM:1", "chemical", 0.5), ("CHEM:2", "chemical", 0.0)],
        )
        path = write_ranking_csv(tmp_path / "h.csv", table, per_category_top=20)
        lines = open(path).read().strip().splitlines()
        assert len(lines) == 2


class TestFigures:
    def test_degree_and_clustering_figures(self, tmp_path, two_triangles_bridge):
        metrics = characterize(two_triangles_bridge)
        p1 = degree_histogram_figure(metrics, tmp_path / "deg.png")
        p2 = clustering_distribution_figure(metrics, tmp_path / "clust.png", highlight="A")
        for p in (p1, p2):
            assert open(p, "rb").read()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_ranking_figure(self, tmp_path):
        table = ranking(
            "ppr",
            [("GENE:1", "gene", 0.4), ("GENE:2", "gene", 0.2), ("MESH:1", "disease", 0.3)],
        )
        path = ranking_figure(table, tmp_path / "rank.png", top_k=5)
        assert open(path, "rb").read()[:8] == b"\x89PNG\r\n\x1a\n"


class TestModuleSelector:
    def test_over_cap_downsamples_to_named_module(self, tmp_path, two_triangles_bridge):
        from litkg.analyze import leiden

        partition = leiden(two_triangles_bridge, seed=0)
        path = emit_html_view(
            two_triangles_bridge,
            tmp_path / "module.html",
            render_cap=4,
            module_selector=(partition, "E"),
        )
        text = open(path, encoding="utf-8").read()
        assert "community of E" in text
        assert '"id": "D"' in text and '"id": "A"' not in text
