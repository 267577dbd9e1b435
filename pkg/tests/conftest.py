import random

import pytest

from litkg.model import EntityNode, KnowledgeGraph

CATEGORY_CYCLE = ("gene", "disease", "chemical", "variant")
KINDS = (
    "positive_correlation",
    "negative_correlation",
    "association",
    "cotreatment",
    "bind",
    "drug_interaction",
)


def make_node(i, category=None):
    category = category or CATEGORY_CYCLE[i % 4]
    prefix = {"gene": "GENE", "disease": "MESH", "chemical": "CHEM", "variant": "VAR"}[category]
    return EntityNode(id=f"{prefix}:{i:04d}", name=f"entity {i}", category=category)


def random_graph(rng: random.Random, n_nodes=None, edge_prob=None) -> KnowledgeGraph:
    """Random simple KG with random kinds/evidence; deterministic per rng."""
    n = n_nodes if n_nodes is not None else rng.randint(0, 40)
    p = edge_prob if edge_prob is not None else rng.uniform(0.05, 0.4)
    kg = KnowledgeGraph(provenance={"generator": "random_graph"})
    nodes = [make_node(i) for i in range(n)]
    for node in nodes:
        kg.add_node(node)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                for _ in range(rng.randint(1, 3)):
                    kg.merge_evidence(
                        nodes[i].id,
                        nodes[j].id,
                        rng.choice(KINDS),
                        f"PMID:{rng.randint(1, 8)}",
                        round(rng.uniform(0.0, 1.0), 3),
                    )
    return kg


def path_graph(ids, category="gene"):
    kg = KnowledgeGraph()
    for i, nid in enumerate(ids):
        kg.add_node(EntityNode(id=nid, name=nid.lower(), category=category))
    for a, b in zip(ids, ids[1:]):
        kg.merge_evidence(a, b, "association", "PMID:1", 0.9)
    return kg


def complete_graph(ids, category="gene", articles=1):
    kg = KnowledgeGraph()
    for nid in ids:
        kg.add_node(EntityNode(id=nid, name=nid.lower(), category=category))
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            for k in range(articles):
                kg.merge_evidence(a, b, "association", f"PMID:{k + 1}", 0.8)
    return kg


@pytest.fixture
def rng():
    return random.Random(20240817)


@pytest.fixture
def triangle():
    return complete_graph(["A", "B", "C"])


@pytest.fixture
def two_triangles_bridge():
    """Two triangles joined by one bridge edge; the classic two-community graph."""
    kg = complete_graph(["A", "B", "C"])
    for nid in ["D", "E", "F"]:
        kg.add_node(EntityNode(id=nid, name=nid.lower(), category="gene"))
    for a, b in [("D", "E"), ("D", "F"), ("E", "F")]:
        kg.merge_evidence(a, b, "association", "PMID:1", 0.8)
    kg.merge_evidence("C", "D", "association", "PMID:1", 0.8)
    return kg
