"""Overlap classification between a knowledge graph and a reference graph,
and shortest-path coverage of reference-only edges.

Over the nodes shared by both graphs, every edge falls in exactly one class:
green (in both), red (knowledge graph only), blue (reference only). A blue
edge is "covered" when the knowledge graph connects its endpoints by some
path; coverage reports the shortest one, hop-counted on the unweighted
graph, with ties broken lexicographically so overlays are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graphops import shortest_path_lex
from .model import KnowledgeGraph
from .refgraph import ReferenceGraph


def _kind_pattern_ok(kind: str, cat_a: str, cat_b: str) -> bool:
    if kind == "gene_gene":
        return cat_a == "gene" and cat_b == "gene"
    if kind == "drug_gene":
        return sorted((cat_a, cat_b)) == ["chemical", "gene"]
    return cat_a in ("gene", "chemical") and cat_b in ("gene", "chemical")


@dataclass
class EdgeClassification:
    green: set[tuple[str, str]] = field(default_factory=set)
    red: set[tuple[str, str]] = field(default_factory=set)
    blue: set[tuple[str, str]] = field(default_factory=set)
    shared_nodes: set[str] = field(default_factory=set)
    reference_kind: str = ""
    warning: str | None = None

    @property
    def total(self) -> int:
        return len(self.green) + len(self.red) + len(self.blue)

    def counts(self) -> dict[str, int]:
        return {"green": len(self.green), "red": len(self.red), "blue": len(self.blue)}

    def percentages(self) -> dict[str, float]:
        if self.total == 0:
            return {"green": 0.0, "red": 0.0, "blue": 0.0}
        return {name: 100.0 * count / self.total for name, count in self.counts().items()}

    def to_dict(self) -> dict:
        payload = {
            "reference_kind": self.reference_kind,
            "shared_nodes": sorted(self.shared_nodes),
            "counts": self.counts(),
            "percentages": self.percentages(),
            "green": sorted(self.green),
            "red": sorted(self.red),
            "blue": sorted(self.blue),
        }
        if self.warning:
            payload["warning"] = self.warning
        return payload


def classify_edges(kg: KnowledgeGraph, ref: ReferenceGraph) -> EdgeClassification:
    """Partition edges over the shared node set into green/red/blue.

    Red only counts knowledge-graph edges whose endpoint categories match
    the reference kind (a chemical-chemical edge is not a missing drug-gene
    interaction). Both graphs must already live in the same id namespace.
    """
    shared = set(kg.nodes) & set(ref.nodes)
    result = EdgeClassification(shared_nodes=shared, reference_kind=ref.kind)
    if not shared:
        result.warning = "no shared nodes between graphs"
        return result

    kg_edges = {
        pair
        for pair in kg.edge_pairs()
        if pair[0] in shared
        and pair[1] in shared
        and _kind_pattern_ok(
            ref.kind, kg.nodes[pair[0]].category, kg.nodes[pair[1]].category
        )
    }
    ref_edges = {
        pair for pair in ref.edges if pair[0] in shared and pair[1] in shared
    }
    result.green = kg_edges & ref_edges
    result.red = kg_edges - ref_edges
    result.blue = ref_edges - kg_edges
    return result


@dataclass
class PathCoverageReport:
    paths: dict[tuple[str, str], tuple[str, ...]] = field(default_factory=dict)
    uncovered: set[tuple[str, str]] = field(default_factory=set)

    @property
    def average_length(self) -> float | None:
        """Mean hop count over covered edges; None when nothing is covered."""
        if not self.paths:
            return None
        return sum(len(p) - 1 for p in self.paths.values()) / len(self.paths)

    @property
    def residual_uncovered(self) -> int:
        return len(self.uncovered)

    def to_dict(self) -> dict:
        return {
            "average_length": self.average_length,
            "covered": {f"{a}|{b}": list(p) for (a, b), p in sorted(self.paths.items())},
            "uncovered": sorted(self.uncovered),
            "residual_uncovered": self.residual_uncovered,
        }


def path_coverage(kg: KnowledgeGraph, classification: EdgeClassification) -> PathCoverageReport:
    """Shortest knowledge-graph path for each blue edge, when one exists."""
    report = PathCoverageReport()
    adj = kg.adjacency()
    for pair in sorted(classification.blue):
        path = shortest_path_lex(adj, pair[0], pair[1])
        if path is None:
            report.uncovered.add(pair)
        else:
            report.paths[pair] = tuple(path)
    return report


@dataclass
class Overlay:
    """Classified graph artifact for rendering: nodes with categories plus
    edges labeled green/red/blue/path."""

    nodes: dict[str, dict] = field(default_factory=dict)
    edges: list[dict] = field(default_factory=list)

    def class_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for edge in self.edges:
            counts[edge["edge_class"]] = counts.get(edge["edge_class"], 0) + 1
        return counts

    def to_dict(self) -> dict:
        return {
            "nodes": [self.nodes[nid] | {"id": nid} for nid in sorted(self.nodes)],
            "edges": sorted(
                self.edges, key=lambda e: (e["source"], e["target"], e["edge_class"])
            ),
        }


def overlay_export(
    kg: KnowledgeGraph,
    classification: EdgeClassification,
    coverage: PathCoverageReport | None = None,
) -> Overlay:
    """Single artifact combining the classification and, when given, the
    covering paths. Without coverage, blue edges stay blue; with it, covered
    blue edges are replaced by their path edges (class "path") and only the
    residual uncovered ones remain blue.
    """
    overlay = Overlay()

    def ensure_node(nid: str):
        if nid in overlay.nodes:
            return
        if nid in kg.nodes:
            node = kg.nodes[nid]
            overlay.nodes[nid] = {"name": node.name, "category": node.category}
        else:
            overlay.nodes[nid] = {"name": nid, "category": "gene"}

    def add(pair, edge_class):
        ensure_node(pair[0])
        ensure_node(pair[1])
        record = {"source": pair[0], "target": pair[1], "edge_class": edge_class}
        if kg.has_edge(*pair):
            edge = kg.edge(*pair)
            evidence = sorted(edge.evidence.items())
            record["kinds"] = sorted(edge.kinds)
            record["pmids"] = [a for a, _ in evidence]
            record["confidences"] = [c for _, c in evidence]
            record["weight"] = edge.weight
        overlay.edges.append(record)

    for pair in sorted(classification.green):
        add(pair, "green")
    for pair in sorted(classification.red):
        add(pair, "red")

    if coverage is None:
        for pair in sorted(classification.blue):
            add(pair, "blue")
        return overlay

    seen_path_edges: set[tuple[str, str]] = set()
    for pair in sorted(classification.blue):
        path = coverage.paths.get(pair)
        if path is None:
            add(pair, "blue")
            continue
        for a, b in zip(path, path[1:]):
            step = (a, b) if a < b else (b, a)
            if step not in seen_path_edges:
                seen_path_edges.add(step)
                add(step, "path")
    return overlay
