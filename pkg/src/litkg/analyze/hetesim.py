"""Meta-path similarity between typed nodes, split at the path midpoint.

For the chemical -> gene -> disease meta-path, each chemical gets its
weight-normalized distribution over gene neighbors, the target disease gets
its own, and the score is the cosine of the two distributions. A chemical
with no gene neighbor scores zero; identical distributions score one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import CategoryError, MissingNodeError
from ..model import CATEGORIES, KnowledgeGraph


@dataclass(frozen=True)
class MetaPath:
    categories: tuple[str, str, str] = ("chemical", "gene", "disease")

    def __post_init__(self):
        if len(self.categories) != 3:
            raise CategoryError("meta-path must have exactly three categories")
        if self.categories[1] != "gene":
            raise CategoryError("meta-path midpoint must be the gene category")
        unknown = set(self.categories) - set(CATEGORIES)
        if unknown:
            raise CategoryError(f"unknown categories in meta-path: {sorted(unknown)}")


CHEMICAL_GENE_DISEASE = MetaPath()


def _midpoint_distribution(graph: KnowledgeGraph, node: str, midpoint: str) -> dict[str, float]:
    weights = {
        nbr: graph.edge(node, nbr).weight
        for nbr in graph.neighbors(node)
        if graph.nodes[nbr].category == midpoint
    }
    total = sum(weights.values())
    if total == 0.0:
        return {}
    return {nbr: w / total for nbr, w in weights.items()}


def _cosine(u: dict[str, float], v: dict[str, float]) -> float:
    if not u or not v:
        return 0.0
    dot = sum(u[g] * v[g] for g in u.keys() & v.keys())
    if dot == 0.0:
        return 0.0
    nu = math.sqrt(sum(x * x for x in u.values()))
    nv = math.sqrt(sum(x * x for x in v.values()))
    return dot / (nu * nv)


def hetesim(
    graph: KnowledgeGraph,
    target: str,
    metapath: MetaPath = CHEMICAL_GENE_DISEASE,
) -> dict[str, float]:
    """Score every start-category node against the target along the
    meta-path. The target must carry the path's end category."""
    if target not in graph.nodes:
        raise MissingNodeError(f"unknown target {target!r}")
    start_cat, midpoint, end_cat = metapath.categories
    if graph.nodes[target].category != end_cat:
        raise CategoryError(
            f"target {target!r} has category {graph.nodes[target].category!r}, "
            f"meta-path ends at {end_cat!r}"
        )
    target_dist = _midpoint_distribution(graph, target, midpoint)
    scores: dict[str, float] = {}
    for nid, node in graph.nodes.items():
        if node.category != start_cat or nid == target:
            continue
        scores[nid] = _cosine(_midpoint_distribution(graph, nid, midpoint), target_dist)
    return scores
