"""Acceptance suite.

Criteria 1-7 reproduce published numbers on the published network fixtures
and reference snapshots; those files are distributed separately, so each
criterion looks for them under $LITKG_FIXTURES (or ./data, ./fixtures) and
skips with an explicit message when they are absent. Criterion 8, the
property suite, needs no fixtures and always runs.

Run with `pytest tests/test_acceptance.py -v -s` to see one line per
criterion.
"""

import math
import os
import random
import time

import pytest

from litkg.analyze import (
    characterize,
    fast_greedy,
    hetesim,
    leiden,
    local_clustering_percentile,
    max_cliques_containing,
    max_kcore_of,
    module_of,
    personalized_katz,
    personalized_pagerank,
)
from litkg.build import derive_high_confidence
from litkg.errors import EmptyResultError
from litkg.model import edge_weight
from litkg.refgraph import load_kegg, read_alias_table
from litkg.serialize import deserialize, load, serialize
from litkg.validate import classify_edges, path_coverage

from conftest import random_graph
from test_centrality import dense_katz_oracle, dense_ppr_oracle
from test_cohesion import exhaustive_max_cliques_with, iterated_deletion_core_numbers
from test_communities import naive_modularity

ANCHOR = os.environ.get("LITKG_ANCHOR", "MESH:D000474")

FIXTURE_DIRS = [
    os.environ.get("LITKG_FIXTURES", ""),
    "data",
    "fixtures",
    os.path.join(os.path.dirname(__file__), "..", "data"),
]


def fixture_path(name):
    for base in FIXTURE_DIRS:
        if not base:
            continue
        candidate = os.path.join(base, name)
        if os.path.exists(candidate):
            return candidate
    return None


def need_fixture(criterion, *names):
    paths = []
    for name in names:
        path = fixture_path(name)
        if path is None:
            message = (
                f"ACCEPTANCE {criterion} SKIP: fixture {name!r} not present "
                f"(searched {[d for d in FIXTURE_DIRS if d]}); property suite substitutes"
            )
            print(message)
            pytest.skip(message)
        paths.append(path)
    return paths if len(paths) > 1 else paths[0]


def anchor_in(kg, criterion):
    if ANCHOR not in kg.nodes:
        message = f"ACCEPTANCE {criterion} SKIP: anchor {ANCHOR!r} not in fixture; set LITKG_ANCHOR"
        print(message)
        pytest.skip(message)
    return ANCHOR


def report(criterion, detail):
    print(f"ACCEPTANCE {criterion} PASS: {detail}")


@pytest.fixture(scope="module")
def highconf():
    path = fixture_path("highconf_graph.json")
    return load(path) if path else None


@pytest.fixture(scope="module")
def extended():
    path = fixture_path("extended_graph.json")
    return load(path) if path else None


class TestCriterion1Fixtures:
    def test_fixture_load_counts(self, highconf, extended):
        need_fixture(1, "highconf_graph.json", "extended_graph.json")
        started = time.monotonic()
        counts = highconf.category_counts()
        assert highconf.node_count == 1450
        assert highconf.edge_count == 3307
        assert counts["disease"] == 366
        assert counts["chemical"] == 602
        assert counts["gene"] == 482
        assert extended.node_count == 27252
        assert extended.edge_count == 261649
        elapsed = time.monotonic() - started
        assert elapsed < 30
        report(1, f"fixture counts exact in {elapsed:.1f}s")


class TestCriterion2HighConfidenceMetrics:
    def test_characterize_highconf(self, highconf):
        need_fixture(2, "highconf_graph.json")
        anchor = anchor_in(highconf, 2)
        started = time.monotonic()
        record = characterize(highconf, anchor=anchor)
        coeff, pct = local_clustering_percentile(highconf, anchor)
        elapsed = time.monotonic() - started
        assert record.diameter == 10
        assert abs(record.average_clustering - 0.114) <= 0.001
        assert abs(record.transitivity - 0.0576) <= 0.0005
        assert abs(record.degree_assortativity - (-0.137)) <= 0.005
        assert abs(coeff - 0.389) <= 0.001
        assert pct is not None and abs(pct - 90) <= 2
        assert elapsed < 10
        report(2, f"high-confidence characterization reproduced in {elapsed:.1f}s")


class TestCriterion3ExtendedMetrics:
    def test_characterize_extended(self, extended):
        need_fixture(3, "extended_graph.json")
        anchor = anchor_in(extended, 3)
        started = time.monotonic()
        record = characterize(extended, anchor=anchor)
        coeff, _ = local_clustering_percentile(extended, anchor)
        elapsed = time.monotonic() - started
        assert record.diameter == 10
        assert abs(record.average_clustering - 0.2184) <= 0.001
        assert abs(record.transitivity - 0.0731) <= 0.0005
        assert abs(record.degree_assortativity - (-0.12)) <= 0.005
        assert abs(coeff - 0.154) <= 0.001
        assert elapsed < 300
        report(3, f"extended characterization reproduced in {elapsed:.1f}s")


def leiden_run_ok(kg, anchor, q_target, q_tol, communities_target, communities_tol,
                  module_target=None, module_tol=None, seed=0):
    partition = leiden(kg, resolution=1.0, seed=seed)
    if abs(partition.modularity - q_target) > q_tol:
        return False
    if abs(partition.community_count - communities_target) > communities_tol:
        return False
    if module_target is not None:
        size = module_of(kg, partition, anchor).node_count
        if abs(size - module_target) > module_tol:
            return False
    return True


class TestCriterion4Leiden:
    def test_highconf_leiden(self, highconf):
        need_fixture(4, "highconf_graph.json")
        anchor = anchor_in(highconf, 4)
        started = time.monotonic()
        wins = sum(
            leiden_run_ok(highconf, anchor, 0.546, 0.03, 17, 3, 84, 10, seed=s)
            for s in range(10)
        )
        elapsed = time.monotonic() - started
        assert wins >= 8, f"only {wins}/10 seeded runs hit the published structure"
        assert elapsed < 120
        report(4, f"high-confidence leiden {wins}/10 seeds in {elapsed:.0f}s")

    def test_extended_leiden(self, extended):
        need_fixture(4, "extended_graph.json")
        anchor_in(extended, 4)
        started = time.monotonic()
        wins = sum(
            leiden_run_ok(extended, None, 0.336, 0.03, 34, 5, seed=s) for s in range(10)
        )
        elapsed = time.monotonic() - started
        assert wins >= 8, f"only {wins}/10 seeded runs hit the published structure"
        assert elapsed < 1200
        report(4, f"extended leiden {wins}/10 seeds in {elapsed:.0f}s")


class TestCriterion5Cohesion:
    def test_cohesive_subgroups(self, highconf, extended):
        need_fixture(5, "highconf_graph.json", "extended_graph.json")
        anchor = anchor_in(extended, 5)
        anchor_in(highconf, 5)
        started = time.monotonic()
        core_ext = max_kcore_of(extended, anchor)
        assert (core_ext.k, core_ext.size) == (9, 26)
        core_hi = max_kcore_of(highconf, anchor)
        assert (core_hi.k, core_hi.size) == (4, 6)
        cliques_ext = max_cliques_containing(extended, anchor)
        assert len(cliques_ext) == 15 and len(cliques_ext[0]) == 7
        cliques_hi = max_cliques_containing(highconf, anchor)
        assert len(cliques_hi) == 2 and len(cliques_hi[0]) == 5
        elapsed = time.monotonic() - started
        assert elapsed < 300
        report(5, f"k-cores and cliques exact in {elapsed:.1f}s")


class TestCriterion6HeteSim:
    def test_hetesim_nonzero_and_top(self, highconf, extended):
        need_fixture(6, "highconf_graph.json", "extended_graph.json")
        anchor = anchor_in(highconf, 6)
        started = time.monotonic()
        hi_scores = hetesim(highconf, anchor)
        nonzero = [nid for nid, s in hi_scores.items() if s > 0]
        assert len(nonzero) == 5
        ext_scores = hetesim(extended, anchor_in(extended, 6))
        top = max(sorted(ext_scores), key=lambda nid: ext_scores[nid])
        top_name = extended.nodes[top].name.casefold()
        assert "homogentisic" in top_name
        elapsed = time.monotonic() - started
        assert elapsed < 120
        report(6, f"5 non-zero chemicals and {top_name!r} first in {elapsed:.1f}s")


class TestCriterion7KeggValidation:
    def test_kegg_against_extended(self, extended):
        need_fixture(7, "extended_graph.json")
        kegg_path = need_fixture(7, "kegg_pathway.xml")
        compounds = fixture_path("kegg_compounds.tsv")
        genes = fixture_path("kegg_genes.tsv")
        started = time.monotonic()
        ref = load_kegg(
            kegg_path,
            read_alias_table(compounds) if compounds else {},
            read_alias_table(genes) if genes else {},
        )
        classification = classify_edges(extended, ref)
        counts = classification.counts()
        assert abs(counts["red"] - 61) <= 6.1
        assert abs(counts["green"] - 30) <= 3.0
        assert abs(counts["blue"] - 25) <= 2.5
        coverage = path_coverage(extended, classification)
        assert coverage.average_length is not None
        assert abs(coverage.average_length - 2.56) <= 0.15
        elapsed = time.monotonic() - started
        assert elapsed < 300
        report(7, f"KEGG classification and coverage reproduced in {elapsed:.1f}s")


class TestCriterion8PropertySuite:
    """Always runnable: no fixtures, brute-force and dense-solve oracles."""

    def test_property_suite(self):
        started = time.monotonic()

        # weight formula exactness and strict monotonicity
        previous = 0.0
        for n in range(1, 54):
            w = edge_weight(n)
            assert w == 1.0 - math.ldexp(1.0, -n)
            assert 0.5 <= w < 1.0
            assert w > previous
            previous = w

        # high-confidence subgraph containment
        rng = random.Random(80)
        derived = 0
        for _ in range(50):
            kg = random_graph(rng, n_nodes=rng.randint(2, 25))
            anchor = sorted(kg.nodes)[0]
            try:
                hc = derive_high_confidence(kg, anchor)
            except EmptyResultError:
                continue
            derived += 1
            assert set(hc.nodes) <= set(kg.nodes)
            assert set(hc.edge_pairs()) <= set(kg.edge_pairs())
            assert all(len(e.evidence) >= 2 for e in hc.edges())
        assert derived > 0

        # serialization round-trip identity on 500 random graphs
        rng = random.Random(81)
        for i in range(500):
            size = 1000 if i == 0 else rng.randint(0, 40)
            prob = 0.004 if i == 0 else None
            kg = random_graph(rng, n_nodes=size, edge_prob=prob)
            again = deserialize(serialize(kg))
            assert again == kg
            assert serialize(again) == serialize(kg)

        # PPR: sums to one, matches dense solve
        rng = random.Random(82)
        for _ in range(20):
            kg = random_graph(rng, n_nodes=rng.randint(2, 50))
            source = sorted(kg.nodes)[0]
            scores = personalized_pagerank(kg, source)
            assert abs(sum(scores.values()) - 1.0) <= 1e-9
            oracle = dense_ppr_oracle(kg, source, 0.85)
            assert all(abs(scores[n] - oracle[n]) <= 1e-8 for n in kg.nodes)

        # Katz: residual below 1e-8, matches dense solve
        import numpy as np

        rng = random.Random(83)
        for _ in range(20):
            kg = random_graph(rng, n_nodes=rng.randint(2, 50))
            source = sorted(kg.nodes)[0]
            scores = personalized_katz(kg, source)
            oracle = dense_katz_oracle(kg, source, 0.95)
            assert all(abs(scores[n] - oracle[n]) <= 1e-8 for n in kg.nodes)
            ids = sorted(kg.nodes)
            index = {nid: i for i, nid in enumerate(ids)}
            A = np.zeros((len(ids), len(ids)))
            for e in kg.edges():
                A[index[e.a], index[e.b]] = A[index[e.b], index[e.a]] = e.weight
            lam = max(abs(np.linalg.eigvalsh(A)))
            alpha = 0.95 / lam if lam > 0 else 0.0
            x = np.array([scores[nid] for nid in ids])
            e_vec = np.zeros(len(ids))
            e_vec[index[source]] = 1.0
            assert float(np.abs(x - alpha * A.dot(x) - e_vec).max()) < 1e-8

        # k-core against iterated deletion (graphs up to 100 nodes)
        rng = random.Random(84)
        for size in (15, 40, 100):
            kg = random_graph(rng, n_nodes=size, edge_prob=3.0 / max(size, 1))
            oracle = iterated_deletion_core_numbers(kg)
            for node in sorted(kg.nodes)[:25]:
                assert max_kcore_of(kg, node).k == oracle[node]

        # cliques against subset enumeration (graphs up to 15 nodes)
        rng = random.Random(85)
        for _ in range(10):
            kg = random_graph(rng, n_nodes=rng.randint(2, 13), edge_prob=0.4)
            node = sorted(kg.nodes)[0]
            assert max_cliques_containing(kg, node) == exhaustive_max_cliques_with(kg, node)

        # shortest paths against a BFS oracle via path_coverage invariants
        from collections import deque

        from litkg.refgraph import ReferenceGraph

        rng = random.Random(86)
        for _ in range(10):
            kg = random_graph(rng, n_nodes=rng.randint(3, 50))
            genes = sorted(n for n, node in kg.nodes.items() if node.category == "gene")
            if len(genes) < 2:
                continue
            ref = ReferenceGraph(kind="gene_gene")
            for a in genes:
                for b in genes:
                    if a < b and rng.random() < 0.3:
                        ref.add_edge(a, b, "gene", "gene", tag="t")
            classification = classify_edges(kg, ref)
            coverage = path_coverage(kg, classification)

            def bfs(source, target):
                seen = {source: 0}
                queue = deque([source])
                while queue:
                    u = queue.popleft()
                    for v in kg.neighbors(u):
                        if v not in seen:
                            seen[v] = seen[u] + 1
                            queue.append(v)
                return seen.get(target)

            for (a, b), path in coverage.paths.items():
                assert len(path) - 1 == bfs(a, b)
            for a, b in coverage.uncovered:
                assert bfs(a, b) is None

            # classification partition completeness
            shared = classification.shared_nodes
            kg_edges = {
                p for p in kg.edge_pairs()
                if p[0] in shared and p[1] in shared
                and kg.nodes[p[0]].category == "gene" and kg.nodes[p[1]].category == "gene"
            }
            ref_edges = {p for p in ref.edges if p[0] in shared and p[1] in shared}
            assert classification.green | classification.red == kg_edges
            assert classification.green | classification.blue == ref_edges
            assert not (classification.green & classification.blue)
            assert not (classification.green & classification.red)
            assert not (classification.red & classification.blue)

        # modularity: stored scores match the naive double-loop recomputation
        rng = random.Random(87)
        for size in (10, 40, 100):
            kg = random_graph(rng, n_nodes=size, edge_prob=4.0 / max(size, 1))
            for partition in (leiden(kg, seed=1), fast_greedy(kg)):
                if "modularity_undefined" in partition.flags:
                    continue
                assert abs(
                    partition.modularity - naive_modularity(kg, partition.assignment)
                ) <= 1e-9

        elapsed = time.monotonic() - started
        assert elapsed < 180
        report(8, f"property suite green in {elapsed:.1f}s")
