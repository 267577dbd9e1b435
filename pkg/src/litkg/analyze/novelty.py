"""Merged-novelty network: the union of green and red edges from two
validation runs, restricted to genes and chemicals, ready for community
detection and per-module gene-list export."""

from __future__ import annotations

from ..errors import EmptyResultError
from ..graphops import giant_component
from ..model import KnowledgeGraph
from ..validate import EdgeClassification


def novelty_union(
    class_a: EdgeClassification,
    class_b: EdgeClassification,
    kg: KnowledgeGraph,
) -> KnowledgeGraph:
    """Union of green and red edges from both classifications, keeping only
    edges between gene and chemical nodes. Both classifications must come
    from the same knowledge graph."""
    pairs = class_a.green | class_a.red | class_b.green | class_b.red
    kept: set[tuple[str, str]] = set()
    node_ids: set[str] = set()
    for a, b in pairs:
        if kg.nodes[a].category in ("gene", "chemical") and kg.nodes[b].category in (
            "gene",
            "chemical",
        ):
            kept.add((a, b))
            node_ids.update((a, b))
    merged = KnowledgeGraph(provenance={"derivation": "novelty_union"})
    for nid in node_ids:
        merged.add_node(kg.nodes[nid])
    for a, b in kept:
        merged.add_edge(kg.edge(a, b).copy())
    return merged


def novelty_merge(
    class_a: EdgeClassification,
    class_b: EdgeClassification,
    kg: KnowledgeGraph,
) -> KnowledgeGraph:
    """Giant connected component of the novelty union."""
    merged = novelty_union(class_a, class_b, kg)
    if merged.node_count == 0:
        raise EmptyResultError("no gene/chemical edges survive the novelty merge")
    component = giant_component(merged.adjacency())
    result = merged.subgraph(component)
    result.provenance["derivation"] = "novelty_merge_giant_component"
    return result
