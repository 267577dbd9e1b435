import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from litkg.analyze.cohesion import max_cliques_containing, max_kcore_of
from litkg.errors import MissingNodeError
from litkg.model import EntityNode, KnowledgeGraph

from conftest import complete_graph, random_graph


def iterated_deletion_core_numbers(kg):
    """Brute-force oracle: node's core number is the largest k it survives."""
    adj = {nid: set(nbrs) for nid, nbrs in kg.adjacency().items()}
    core = {nid: 0 for nid in adj}
    k = 1
    while True:
        current = {n: set(nb) for n, nb in adj.items()}
        changed = True
        while changed:
            changed = False
            for node in list(current):
                if len(current[node]) < k:
                    for other in current.pop(node):
                        current[other].discard(node)
                    changed = True
        if not current:
            break
        for node in current:
            core[node] = k
        k += 1
    return core


def exhaustive_max_cliques_with(kg, node):
    """Subset enumeration oracle (graphs <= 15 nodes)."""
    adj = kg.adjacency()
    others = sorted(set(kg.nodes) - {node})
    cliques = []
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            group = {node, *combo}
            if all(b in adj[a] for a, b in itertools.combinations(group, 2)):
                cliques.append(group)
    top = max(len(c) for c in cliques)
    return sorted(sorted(c) for c in cliques if len(c) == top)


def triangle_with_leaf():
    kg = complete_graph(["A", "B", "C"])
    kg.add_node(EntityNode(id="L", name="leaf", category="gene"))
    kg.merge_evidence("L", "A", "association", "p1", 0.9)
    return kg


class TestMaxKCore:
    def test_triangle_node(self, triangle):
        result = max_kcore_of(triangle, "A")
        assert result.k == 2
        assert result.size == 3

    def test_leaf_on_triangle(self):
        result = max_kcore_of(triangle_with_leaf(), "L")
        assert result.k == 1
        assert result.size == 4  # whole graph is the leaf's 1-core component

    def test_triangle_node_ignores_leaf(self):
        result = max_kcore_of(triangle_with_leaf(), "B")
        assert result.k == 2
        assert set(result.subgraph.nodes) == {"A", "B", "C"}

    def test_core_subgraph_degrees(self):
        result = max_kcore_of(complete_graph(["A", "B", "C", "D"]), "A")
        assert result.k == 3
        assert all(result.subgraph.degree(n) >= result.k for n in result.subgraph.nodes)

    def test_missing_node(self, triangle):
        with pytest.raises(MissingNodeError):
            max_kcore_of(triangle, "Q")

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=10**6))
    def test_core_numbers_match_iterated_deletion(self, seed):
        rng = random.Random(seed)
        kg = random_graph(rng, n_nodes=rng.randint(1, 40))
        if kg.node_count == 0:
            return
        oracle = iterated_deletion_core_numbers(kg)
        for node in kg.nodes:
            assert max_kcore_of(kg, node).k == oracle[node]

    def test_hundred_node_graph_matches_networkx(self):
        kg = random_graph(random.Random(5), n_nodes=100, edge_prob=0.05)
        g = nx.Graph()
        g.add_nodes_from(kg.nodes)
        g.add_edges_from(kg.edge_pairs())
        oracle = nx.core_number(g)
        for node in kg.nodes:
            assert max_kcore_of(kg, node).k == oracle[node]


class TestMaxCliques:
    def test_node_in_k4(self):
        cliques = max_cliques_containing(complete_graph(["A", "B", "C", "D"]), "B")
        assert cliques == [["A", "B", "C", "D"]]

    def test_two_triangles_sharing_node(self):
        kg = complete_graph(["X", "A", "B"])
        for nid in ["C", "D"]:
            kg.add_node(EntityNode(id=nid, name=nid.lower(), category="gene"))
        kg.merge_evidence("X", "C", "association", "p1", 0.9)
        kg.merge_evidence("X", "D", "association", "p1", 0.9)
        kg.merge_evidence("C", "D", "association", "p1", 0.9)
        cliques = max_cliques_containing(kg, "X")
        assert cliques == [["A", "B", "X"], ["C", "D", "X"]]

    def test_isolated_node(self):
        kg = KnowledgeGraph()
        kg.add_node(EntityNode(id="S", name="s", category="gene"))
        assert max_cliques_containing(kg, "S") == [["S"]]

    def test_missing_node(self, triangle):
        with pytest.raises(MissingNodeError):
            max_cliques_containing(triangle, "Q")

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=10**6))
    def test_matches_subset_enumeration(self, seed):
        rng = random.Random(seed)
        kg = random_graph(rng, n_nodes=rng.randint(1, 12), edge_prob=0.35)
        if kg.node_count == 0:
            return
        node = sorted(kg.nodes)[0]
        assert max_cliques_containing(kg, node) == exhaustive_max_cliques_with(kg, node)
