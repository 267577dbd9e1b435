"""Deterministic construction of the extended and high-confidence networks
from raw relations.

Stage order is fixed: confidence filtering, graph assembly, variant
collapsing, generic-node pruning, anchor-component extraction. The
high-confidence network is then derived from the extended one by keeping
edges with at least two distinct supporting articles and re-extracting the
anchor's component.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError, EmptyResultError, MissingNodeError
from .graphops import connected_component
from .ingest import RawRelation
from .model import EntityNode, KnowledgeGraph, RELATION_KINDS

DEFAULT_DROP_KINDS = frozenset({"comparison"})


@dataclass
class FilterPolicy:
    hi_conf_threshold: float = 0.7
    lo_conf_threshold: float = 0.5
    lo_conf_min_pubs: int = 4  # "more than three publications"
    drop_kinds: frozenset[str] = DEFAULT_DROP_KINDS
    generic_blocklist: frozenset[str] = frozenset()
    generic_degree_floor: int = 11  # degree "larger than 10"

    def __post_init__(self):
        if not (0.0 < self.lo_conf_threshold < self.hi_conf_threshold < 1.0):
            raise ConfigError(
                "thresholds must satisfy 0 < lo_conf_threshold < hi_conf_threshold < 1, "
                f"got lo={self.lo_conf_threshold}, hi={self.hi_conf_threshold}"
            )
        self.drop_kinds = frozenset(self.drop_kinds)
        self.generic_blocklist = frozenset(self.generic_blocklist)


@dataclass
class RelationGroup:
    """All raw relation records sharing an unordered pair and a kind."""

    a_id: str
    b_id: str
    kind: str
    records: list[RawRelation] = field(default_factory=list)

    @property
    def mean_confidence(self) -> float:
        return sum(r.confidence for r in self.records) / len(self.records)

    @property
    def article_count(self) -> int:
        return len({r.article_id for r in self.records})


def group_relations(relations: list[RawRelation]) -> list[RelationGroup]:
    groups: dict[tuple, RelationGroup] = {}
    for rel in relations:
        key = (rel.pair, rel.kind)
        group = groups.get(key)
        if group is None:
            a, b = rel.pair
            group = groups[key] = RelationGroup(a_id=a, b_id=b, kind=rel.kind)
        group.records.append(rel)
    return [groups[key] for key in sorted(groups)]


def filter_relations(relations: list[RawRelation], policy: FilterPolicy) -> list[RelationGroup]:
    """Retain (pair, kind) groups passing the confidence rules: mean
    confidence above the high threshold, or above the low threshold with
    at least lo_conf_min_pubs distinct supporting articles."""
    retained = []
    for group in group_relations(relations):
        if group.kind in policy.drop_kinds:
            continue
        mean = group.mean_confidence
        if mean > policy.hi_conf_threshold or (
            mean > policy.lo_conf_threshold and group.article_count >= policy.lo_conf_min_pubs
        ):
            retained.append(group)
    return retained


def assemble_graph(
    groups: list[RelationGroup],
    entities: dict[str, EntityNode],
    provenance: dict | None = None,
) -> tuple[KnowledgeGraph, list[str]]:
    """Build a graph from retained groups. Groups whose endpoints lack
    entity metadata or carry a kind outside the edge vocabulary are skipped
    and reported rather than failing the whole build."""
    kg = KnowledgeGraph(provenance=provenance or {})
    skipped: list[str] = []
    for group in groups:
        if group.kind not in RELATION_KINDS:
            skipped.append(f"{group.a_id}-{group.b_id}: kind {group.kind!r} outside vocabulary")
            continue
        missing = [e for e in (group.a_id, group.b_id) if e not in entities]
        if missing:
            skipped.append(f"{group.a_id}-{group.b_id}: no entity metadata for {missing}")
            continue
        for endpoint in (group.a_id, group.b_id):
            kg.add_node(entities[endpoint])
        for record in group.records:
            kg.merge_evidence(
                group.a_id, group.b_id, group.kind, record.article_id, record.confidence
            )
    return kg, skipped


def collapse_variants(
    graph: KnowledgeGraph,
    gene_catalog: dict[str, EntityNode] | None = None,
) -> tuple[KnowledgeGraph, dict]:
    """Merge each variant with a known parent gene into that gene node.

    Incident edges are re-targeted to the gene with evidence unioned and
    weights following the new article counts; the variant-to-its-own-gene
    link vanishes (it would be a self-loop). Variants without a parent
    stay in the graph under the variant category.
    """
    result = graph.copy()
    report = {"collapsed": [], "orphans": [], "skipped": []}
    variant_ids = sorted(
        nid for nid, node in result.nodes.items() if node.category == "variant"
    )
    for vid in variant_ids:
        variant = result.nodes[vid]
        gene_id = variant.parent_gene
        if not gene_id:
            report["orphans"].append(vid)
            continue
        gene_node = result.nodes.get(gene_id)
        if gene_node is None:
            gene_node = (gene_catalog or {}).get(gene_id) or EntityNode(
                id=gene_id, name=gene_id, category="gene"
            )
        if gene_node.category != "gene":
            report["skipped"].append(f"{vid}: parent {gene_id} is not a gene")
            continue
        result.add_node(gene_node)
        for neighbor in sorted(result.neighbors(vid)):
            if neighbor == gene_id:
                continue  # would be a self-loop on the gene
            old = result.edge(vid, neighbor)
            for article, conf in old.evidence.items():
                for kind in sorted(old.kinds):
                    result.merge_evidence(gene_id, neighbor, kind, article, conf)
        result.remove_node(vid)
        report["collapsed"].append({"variant": vid, "gene": gene_id})
    return result, report


@dataclass
class PruneReport:
    removed: list[tuple[str, str, int]] = field(default_factory=list)  # (id, name, degree)
    not_found: list[str] = field(default_factory=list)


def prune_generic(graph: KnowledgeGraph, policy: FilterPolicy) -> tuple[KnowledgeGraph, PruneReport]:
    """Remove blocklisted generic entities whose degree reaches the floor.

    Matching is by case-insensitive node name. Pruning is strictly
    blocklist-driven: an unlisted hub is never touched, and a listed name
    below the degree floor is kept.
    """
    result = graph.copy()
    report = PruneReport()
    by_name: dict[str, list[str]] = {}
    for nid, node in result.nodes.items():
        by_name.setdefault(node.name.casefold(), []).append(nid)
    for name in sorted(policy.generic_blocklist):
        matches = by_name.get(name.casefold())
        if not matches:
            report.not_found.append(name)
            continue
        for nid in sorted(matches):
            degree = result.degree(nid)
            if degree >= policy.generic_degree_floor:
                report.removed.append((nid, result.nodes[nid].name, degree))
                result.remove_node(nid)
    return result, report


def extract_component(graph: KnowledgeGraph, anchor: str) -> KnowledgeGraph:
    """Induced subgraph on the connected component containing the anchor."""
    if anchor not in graph.nodes:
        raise MissingNodeError(f"anchor {anchor!r} is not in the graph")
    return graph.subgraph(connected_component(graph.adjacency(), anchor))


def derive_high_confidence(extended: KnowledgeGraph, anchor: str) -> KnowledgeGraph:
    """Edges supported by at least two distinct articles, restricted to the
    anchor's connected component (which drops isolated nodes)."""
    if anchor not in extended.nodes:
        raise MissingNodeError(f"anchor {anchor!r} is not in the graph")
    strong = [e for e in extended.edges() if len(e.evidence) >= 2]
    adj: dict[str, set[str]] = {nid: set() for nid in extended.nodes}
    for edge in strong:
        adj[edge.a].add(edge.b)
        adj[edge.b].add(edge.a)
    component = connected_component(adj, anchor)
    if component == {anchor}:
        raise EmptyResultError(
            f"anchor {anchor!r} has no edges with >= 2 supporting articles"
        )
    kg = KnowledgeGraph(provenance={**extended.provenance, "derivation": "high_confidence"})
    for nid in component:
        kg.add_node(extended.nodes[nid])
    for edge in strong:
        if edge.a in component and edge.b in component:
            kg.add_edge(edge.copy())
    return kg


@dataclass
class BuildResult:
    extended: KnowledgeGraph
    high_confidence: KnowledgeGraph | None
    report: dict


def run_build(
    relations: list[RawRelation],
    entities: dict[str, EntityNode],
    policy: FilterPolicy,
    anchor: str,
    provenance: dict | None = None,
) -> BuildResult:
    """Full pipeline: filter, assemble, collapse, prune, extract, derive."""
    report: dict = {"stages": []}

    def note(stage: str, kg: KnowledgeGraph, **extra):
        report["stages"].append(
            {"stage": stage, "nodes": kg.node_count, "edges": kg.edge_count, **extra}
        )

    groups = filter_relations(relations, policy)
    report["retained_groups"] = len(groups)
    assembled, skipped = assemble_graph(groups, entities, provenance=provenance)
    report["skipped_groups"] = skipped
    note("assembled", assembled)

    collapsed, collapse_report = collapse_variants(assembled, gene_catalog=entities)
    report["variant_collapse"] = {
        "collapsed": len(collapse_report["collapsed"]),
        "orphans": len(collapse_report["orphans"]),
        "skipped": collapse_report["skipped"],
    }
    note("variants_collapsed", collapsed)

    pruned, prune_report = prune_generic(collapsed, policy)
    report["pruned_generic"] = {
        "removed": prune_report.removed,
        "not_found": prune_report.not_found,
    }
    note("generic_pruned", pruned)

    extended = extract_component(pruned, anchor)
    note("anchor_component", extended)
    extended.provenance.setdefault("network", "extended")
    extended.provenance["category_counts"] = extended.category_counts()

    try:
        highconf = derive_high_confidence(extended, anchor)
        note("high_confidence", highconf)
        highconf.provenance["network"] = "high_confidence"
        highconf.provenance["category_counts"] = highconf.category_counts()
    except EmptyResultError as exc:
        highconf = None
        report["high_confidence_error"] = str(exc)

    return BuildResult(extended=extended, high_confidence=highconf, report=report)
