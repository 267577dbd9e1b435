"""Core data model: typed entity nodes, evidence-weighted relation edges,
and the undirected knowledge graph they form.

Graphs are simple (no self-loops, at most one edge per unordered pair).
An edge's weight is fully determined by how many distinct articles support
it: w = 1 - 2^(-n). Builders mutate a graph in place while constructing it;
once built, graphs are treated as read-only snapshots and are safe to share
across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import InvalidEdgeError, InvalidEvidenceError, MissingNodeError

CATEGORIES = ("gene", "disease", "chemical", "variant")

RELATION_KINDS = frozenset(
    {
        "positive_correlation",
        "negative_correlation",
        "association",
        "cotreatment",
        "bind",
        "drug_interaction",
    }
)

# Label reported for edges carrying more than one relation kind.
MULTITYPE_LABEL = "multitype"


def edge_weight(n: int) -> float:
    """Weight of an edge supported by n distinct articles: 1 - 2^(-n).

    Strictly increasing in n and bounded above by 1. In IEEE-754 doubles
    the strict bound saturates at n = 54, where 1 - 2^(-n) rounds to 1.0;
    realistic evidence counts stay far below that.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidEvidenceError(f"evidence count must be a positive integer, got {n!r}")
    return 1.0 - 2.0 ** (-n)


def pair_key(a: str, b: str) -> tuple[str, str]:
    """Canonical unordered-pair key; rejects self-loops."""
    if a == b:
        raise InvalidEdgeError(f"self-loop on {a!r} is not allowed")
    return (a, b) if a < b else (b, a)


@dataclass
class EntityNode:
    """A typed biomedical entity with a namespaced identifier.

    parent_gene is only meaningful for variant nodes: the gene id a variant
    collapses into during network construction. It survives serialization
    when set and is absent from the emitted JSON otherwise.
    """

    id: str
    name: str
    category: str
    aliases: set[str] = field(default_factory=set)
    parent_gene: str | None = None

    def __post_init__(self):
        if not self.id:
            raise InvalidEdgeError("node id must be non-empty")
        if self.category not in CATEGORIES:
            raise InvalidEdgeError(
                f"unknown category {self.category!r} for node {self.id!r}; "
                f"expected one of {', '.join(CATEGORIES)}"
            )
        self.aliases = set(self.aliases)


@dataclass
class RelationEdge:
    """Undirected edge: relation kinds, per-article evidence, derived weight.

    evidence maps article id -> confidence in [0, 1]; article ids are unique
    by construction. The weight is never stored, always derived.
    """

    a: str
    b: str
    kinds: set[str] = field(default_factory=set)
    evidence: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        self.a, self.b = pair_key(self.a, self.b)
        self.kinds = set(self.kinds)
        if not self.kinds:
            raise InvalidEdgeError(f"edge {self.a}-{self.b} has no relation kind")
        unknown = self.kinds - RELATION_KINDS
        if unknown:
            raise InvalidEdgeError(
                f"edge {self.a}-{self.b} has unknown kind(s): {', '.join(sorted(unknown))}"
            )
        if not self.evidence:
            raise InvalidEdgeError(f"edge {self.a}-{self.b} has no supporting evidence")
        for article, conf in self.evidence.items():
            if not (0.0 <= conf <= 1.0):
                raise InvalidEdgeError(
                    f"edge {self.a}-{self.b}: confidence {conf!r} for article {article!r} "
                    "outside [0, 1]"
                )

    @property
    def pair(self) -> tuple[str, str]:
        return (self.a, self.b)

    @property
    def weight(self) -> float:
        return edge_weight(len(self.evidence))

    @property
    def kind_label(self) -> str:
        """Single kind name, or 'multitype' when the edge carries several."""
        if len(self.kinds) > 1:
            return MULTITYPE_LABEL
        return next(iter(self.kinds))

    def copy(self) -> "RelationEdge":
        return RelationEdge(self.a, self.b, set(self.kinds), dict(self.evidence))


class KnowledgeGraph:
    """Simple undirected weighted graph over EntityNodes.

    nodes: id -> EntityNode; at most one RelationEdge per unordered pair
    (evidence merges, never duplicates). provenance is free-form build
    metadata carried through serialization but ignored by graph equality.
    """

    def __init__(self, provenance: dict | None = None):
        self.nodes: dict[str, EntityNode] = {}
        self.provenance: dict = dict(provenance or {})
        self._edges: dict[tuple[str, str], RelationEdge] = {}
        self._adj: dict[str, set[str]] = {}

    # -- construction -------------------------------------------------

    def add_node(self, node: EntityNode) -> EntityNode:
        """Insert a node; re-adding the same id merges aliases.

        A conflicting re-add (different name or category) is an error:
        ids are globally unique within a graph.
        """
        existing = self.nodes.get(node.id)
        if existing is None:
            self.nodes[node.id] = node
            self._adj.setdefault(node.id, set())
            return node
        if existing.name != node.name or existing.category != node.category:
            raise InvalidEdgeError(
                f"node id {node.id!r} re-added with conflicting payload "
                f"({existing.name!r}/{existing.category} vs {node.name!r}/{node.category})"
            )
        existing.aliases |= node.aliases
        if existing.parent_gene is None:
            existing.parent_gene = node.parent_gene
        return existing

    def merge_evidence(
        self, a: str, b: str, kind: str, article_id: str, confidence: float
    ) -> RelationEdge:
        """Accumulate one article's support for the (a, b) relation.

        Idempotent in (pair, kind, article_id). A repeated article with a
        different confidence keeps the maximum. The weight follows the
        distinct-article count automatically.
        """
        key = pair_key(a, b)
        for endpoint in key:
            if endpoint not in self.nodes:
                raise MissingNodeError(f"edge endpoint {endpoint!r} is not in the graph")
        if kind not in RELATION_KINDS:
            raise InvalidEdgeError(f"unknown relation kind {kind!r}")
        if not (0.0 <= confidence <= 1.0):
            raise InvalidEdgeError(f"confidence {confidence!r} outside [0, 1]")
        edge = self._edges.get(key)
        if edge is None:
            edge = RelationEdge(key[0], key[1], {kind}, {article_id: confidence})
            self._edges[key] = edge
            self._adj[key[0]].add(key[1])
            self._adj[key[1]].add(key[0])
        else:
            edge.kinds.add(kind)
            prev = edge.evidence.get(article_id)
            edge.evidence[article_id] = confidence if prev is None else max(prev, confidence)
        return edge

    def add_edge(self, edge: RelationEdge) -> RelationEdge:
        """Insert a prebuilt edge, merging with any existing one on the pair."""
        existing = self._edges.get(edge.pair)
        if existing is None:
            for endpoint in edge.pair:
                if endpoint not in self.nodes:
                    raise MissingNodeError(f"edge endpoint {endpoint!r} is not in the graph")
            self._edges[edge.pair] = edge
            self._adj[edge.a].add(edge.b)
            self._adj[edge.b].add(edge.a)
            return edge
        existing.kinds |= edge.kinds
        for article, conf in edge.evidence.items():
            prev = existing.evidence.get(article)
            existing.evidence[article] = conf if prev is None else max(prev, conf)
        return existing

    def remove_node(self, node_id: str) -> None:
        if node_id not in self.nodes:
            raise MissingNodeError(f"cannot remove unknown node {node_id!r}")
        for other in list(self._adj[node_id]):
            del self._edges[pair_key(node_id, other)]
            self._adj[other].discard(node_id)
        del self._adj[node_id]
        del self.nodes[node_id]

    # -- access --------------------------------------------------------

    def __contains__(self, node_id: str) -> bool:
        return node_id in self.nodes

    def node(self, node_id: str) -> EntityNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise MissingNodeError(f"unknown node {node_id!r}") from None

    def has_edge(self, a: str, b: str) -> bool:
        return pair_key(a, b) in self._edges

    def edge(self, a: str, b: str) -> RelationEdge:
        try:
            return self._edges[pair_key(a, b)]
        except KeyError:
            raise MissingNodeError(f"no edge between {a!r} and {b!r}") from None

    def edges(self) -> Iterator[RelationEdge]:
        return iter(self._edges.values())

    def edge_pairs(self) -> Iterator[tuple[str, str]]:
        return iter(self._edges.keys())

    def neighbors(self, node_id: str) -> set[str]:
        try:
            return self._adj[node_id]
        except KeyError:
            raise MissingNodeError(f"unknown node {node_id!r}") from None

    def degree(self, node_id: str) -> int:
        return len(self.neighbors(node_id))

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def category_counts(self) -> dict[str, int]:
        counts = {c: 0 for c in CATEGORIES}
        for node in self.nodes.values():
            counts[node.category] += 1
        return counts

    def adjacency(self) -> dict[str, set[str]]:
        """Unweighted adjacency view (shared sets; do not mutate)."""
        return self._adj

    def weighted_adjacency(self) -> dict[str, dict[str, float]]:
        adj: dict[str, dict[str, float]] = {nid: {} for nid in self.nodes}
        for edge in self._edges.values():
            w = edge.weight
            adj[edge.a][edge.b] = w
            adj[edge.b][edge.a] = w
        return adj

    # -- derivation ----------------------------------------------------

    def subgraph(self, node_ids: Iterable[str]) -> "KnowledgeGraph":
        """Induced subgraph; shares node objects, copies edge objects."""
        keep = set(node_ids)
        missing = keep - self.nodes.keys()
        if missing:
            raise MissingNodeError(f"unknown node(s) in subgraph selection: {sorted(missing)[:5]}")
        sub = KnowledgeGraph(provenance=dict(self.provenance))
        for nid in keep:
            sub.add_node(self.nodes[nid])
        for (a, b), edge in self._edges.items():
            if a in keep and b in keep:
                sub.add_edge(edge.copy())
        return sub

    def copy(self) -> "KnowledgeGraph":
        return self.subgraph(self.nodes.keys())

    # -- equality and invariants ----------------------------------------

    def _canonical(self):
        nodes = {
            nid: (n.name, n.category, tuple(sorted(n.aliases)), n.parent_gene)
            for nid, n in self.nodes.items()
        }
        edges = {
            pair: (tuple(sorted(e.kinds)), tuple(sorted(e.evidence.items())))
            for pair, e in self._edges.items()
        }
        return nodes, edges

    def graph_equal(self, other: "KnowledgeGraph") -> bool:
        """Same node set, edge set, kinds, evidence (weights follow)."""
        return self._canonical() == other._canonical()

    def __eq__(self, other):
        if not isinstance(other, KnowledgeGraph):
            return NotImplemented
        return self.graph_equal(other)

    def __repr__(self):
        return f"<KnowledgeGraph nodes={self.node_count} edges={self.edge_count}>"

    def invariant_violations(self, weight_tol: float = 1e-12) -> list[str]:
        """Structural checks; the stored-weight check matters for loaded
        graphs whose JSON carried an explicit weight field."""
        problems = []
        for (a, b), edge in self._edges.items():
            if a not in self.nodes or b not in self.nodes:
                problems.append(f"edge {a}-{b} has a missing endpoint")
            if a == b:
                problems.append(f"self-loop on {a}")
            expected = edge_weight(len(edge.evidence)) if edge.evidence else None
            if expected is None:
                problems.append(f"edge {a}-{b} has no evidence")
            elif abs(edge.weight - expected) > weight_tol:
                problems.append(f"edge {a}-{b} weight inconsistent with evidence count")
        return problems
