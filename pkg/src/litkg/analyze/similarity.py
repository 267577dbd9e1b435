"""Entity similarity from shared neighborhoods, weighted against ubiquity.

Two diseases are similar when they connect to the same genes/chemicals,
with rare shared features counting for more: feature f gets weight
log(N / df_f), N the number of same-category nodes and df_f how many of
them touch f. Cosine similarity is computed per feature space and the
gene-based and chemical-based (or disease-based) scores are averaged when
both are defined. Optionally only each node's top-q strongest associations
(by edge weight) enter the profiles at all.
"""

from __future__ import annotations

import math

from ..errors import CategoryError, MissingNodeError
from ..model import KnowledgeGraph
from .centrality import RankingRow, RankingTable

FEATURE_SPACES = {
    "disease": ("gene", "chemical"),
    "chemical": ("gene", "disease"),
}


class _ProfileIndex:
    def __init__(self, graph: KnowledgeGraph, category: str, top_q: int | None):
        if category not in FEATURE_SPACES:
            raise CategoryError(
                f"similarity is defined for {sorted(FEATURE_SPACES)}, not {category!r}"
            )
        self.spaces = FEATURE_SPACES[category]
        self.members = sorted(
            nid for nid, node in graph.nodes.items() if node.category == category
        )
        feature_cats = set(self.spaces)
        neighbor_sets: dict[str, set[str]] = {}
        for member in self.members:
            links = [
                (nbr, graph.edge(member, nbr).weight)
                for nbr in graph.neighbors(member)
                if graph.nodes[nbr].category in feature_cats
            ]
            if top_q is not None:
                links = sorted(links, key=lambda item: (-item[1], item[0]))[:top_q]
            neighbor_sets[member] = {nbr for nbr, _ in links}
        df: dict[str, int] = {}
        for features in neighbor_sets.values():
            for f in features:
                df[f] = df.get(f, 0) + 1
        n = len(self.members)
        idf = {f: math.log(n / count) for f, count in df.items()}
        self.profiles: dict[str, dict[str, dict[str, float]]] = {}
        for member, features in neighbor_sets.items():
            per_space: dict[str, dict[str, float]] = {}
            for space in self.spaces:
                vector = {
                    f: idf[f]
                    for f in features
                    if graph.nodes[f].category == space and idf[f] > 0.0
                }
                per_space[space] = vector
            self.profiles[member] = per_space

    def similarity(self, a: str, b: str) -> float:
        scores = []
        for space in self.spaces:
            u = self.profiles[a][space]
            v = self.profiles[b][space]
            if not u or not v:
                continue  # undefined in this space
            dot = sum(u[f] * v[f] for f in u.keys() & v.keys())
            nu = math.sqrt(sum(x * x for x in u.values()))
            nv = math.sqrt(sum(x * x for x in v.values()))
            scores.append(dot / (nu * nv))
        if not scores:
            return 0.0
        return sum(scores) / len(scores)


def pair_similarity(
    graph: KnowledgeGraph, category: str, a: str, b: str, top_q: int | None = None
) -> float:
    index = _ProfileIndex(graph, category, top_q)
    for nid in (a, b):
        if nid not in index.profiles:
            raise MissingNodeError(f"{nid!r} is not a {category} node in the graph")
    return index.similarity(a, b)


def entity_similarity(
    graph: KnowledgeGraph, category: str, reference: str, top_q: int | None = None
) -> RankingTable:
    """Ranking of all same-category nodes by similarity to the reference
    (the reference itself is excluded from the rows)."""
    if reference not in graph.nodes:
        raise MissingNodeError(f"unknown reference {reference!r}")
    if graph.nodes[reference].category != category:
        raise CategoryError(
            f"reference {reference!r} has category "
            f"{graph.nodes[reference].category!r}, expected {category!r}"
        )
    index = _ProfileIndex(graph, category, top_q)
    scored = {
        member: index.similarity(reference, member)
        for member in index.members
        if member != reference
    }
    order = sorted(scored.items(), key=lambda item: (-item[1], item[0]))
    rows = [
        RankingRow(i + 1, nid, graph.nodes[nid].name, category, score)
        for i, (nid, score) in enumerate(order)
    ]
    return RankingTable(metric=f"{category}_similarity", rows=rows)
