import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from litkg.analyze.hetesim import CHEMICAL_GENE_DISEASE, MetaPath, hetesim
from litkg.errors import CategoryError, MissingNodeError
from litkg.model import EntityNode, KnowledgeGraph

from conftest import random_graph


def build(edges, categories):
    kg = KnowledgeGraph()
    for nid, cat in categories.items():
        kg.add_node(EntityNode(id=nid, name=nid.lower(), category=cat))
    for a, b in edges:
        kg.merge_evidence(a, b, "association", "p1", 0.9)
    return kg


CATS = {"c": "chemical", "c2": "chemical", "d": "disease", "g1": "gene", "g2": "gene"}


class TestMetaPath:
    def test_default_shape(self):
        assert CHEMICAL_GENE_DISEASE.categories == ("chemical", "gene", "disease")

    def test_midpoint_must_be_gene(self):
        with pytest.raises(CategoryError):
            MetaPath(("chemical", "disease", "gene"))

    def test_length_three(self):
        with pytest.raises(CategoryError):
            MetaPath(("chemical", "gene"))


class TestHeteSim:
    def test_partial_overlap_closed_form(self):
        kg = build([("c", "g1"), ("c", "g2"), ("d", "g1")], CATS)
        scores = hetesim(kg, "d")
        assert scores["c"] == pytest.approx(1 / math.sqrt(2), abs=1e-12)

    def test_identical_distributions_score_one(self):
        kg = build([("c", "g1"), ("c", "g2"), ("d", "g1"), ("d", "g2")], CATS)
        assert hetesim(kg, "d")["c"] == pytest.approx(1.0, abs=1e-12)

    def test_no_gene_neighbor_scores_zero(self):
        kg = build([("c", "d"), ("d", "g1"), ("c2", "g1")], CATS)
        scores = hetesim(kg, "d")
        assert scores["c"] == 0.0
        assert scores["c2"] > 0.0

    def test_target_without_genes_all_zero(self):
        kg = build([("c", "g1"), ("c", "d")], CATS)
        assert set(hetesim(kg, "d").values()) == {0.0}

    def test_target_category_checked(self):
        kg = build([("c", "g1")], CATS)
        with pytest.raises(CategoryError):
            hetesim(kg, "g1")

    def test_missing_target(self):
        kg = build([("c", "g1")], CATS)
        with pytest.raises(MissingNodeError):
            hetesim(kg, "QQQ")

    def test_weights_shape_the_distribution(self):
        kg = build([("c", "g1"), ("c", "g2"), ("d", "g1")], CATS)
        # strengthen c-g1 to two articles: distribution (0.6, 0.4)
        kg.merge_evidence("c", "g1", "association", "p2", 0.9)
        scores = hetesim(kg, "d")
        u = (0.75 / 1.25, 0.5 / 1.25)
        expected = u[0] / math.sqrt(u[0] ** 2 + u[1] ** 2)
        assert scores["c"] == pytest.approx(expected, abs=1e-12)

    def test_mirrored_metapath_symmetry(self):
        kg = build([("c", "g1"), ("c", "g2"), ("d", "g1"), ("d", "g2"), ("c2", "g2")], CATS)
        forward = hetesim(kg, "d")  # chemical -> gene -> disease
        mirrored = hetesim(kg, "c", MetaPath(("disease", "gene", "chemical")))
        assert forward["c"] == pytest.approx(mirrored["d"], abs=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=10**6))
    def test_scores_within_unit_interval(self, seed):
        rng = random.Random(seed)
        kg = random_graph(rng, n_nodes=rng.randint(4, 25))
        diseases = sorted(n for n, node in kg.nodes.items() if node.category == "disease")
        if not diseases:
            return
        scores = hetesim(kg, diseases[0])
        assert all(0.0 <= s <= 1.0 + 1e-12 for s in scores.values())
