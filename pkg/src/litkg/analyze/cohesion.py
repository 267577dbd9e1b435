"""Cohesive subgroups around a query node: maximum k-core and maximum
cliques, both on the unweighted simple graph."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import MissingNodeError
from ..graphops import connected_component, core_numbers, induced_adjacency
from ..model import KnowledgeGraph


@dataclass
class KCoreResult:
    k: int
    subgraph: KnowledgeGraph

    @property
    def size(self) -> int:
        return self.subgraph.node_count


def max_kcore_of(graph: KnowledgeGraph, node: str) -> KCoreResult:
    """The query node's core index k, and the connected component containing
    it within the k-core (every member keeps degree >= k inside)."""
    if node not in graph.nodes:
        raise MissingNodeError(f"unknown node {node!r}")
    adj = graph.adjacency()
    cores = core_numbers(adj)
    k = cores[node]
    core_nodes = {nid for nid, c in cores.items() if c >= k}
    within = induced_adjacency(adj, core_nodes)
    component = connected_component(within, node)
    return KCoreResult(k=k, subgraph=graph.subgraph(component))


def _bron_kerbosch_pivot(adj, r: set, p: set, x: set, out: list[frozenset]):
    if not p and not x:
        out.append(frozenset(r))
        return
    pivot = max(sorted(p | x), key=lambda u: len(adj[u] & p))
    for v in sorted(p - adj[pivot]):
        _bron_kerbosch_pivot(adj, r | {v}, p & adj[v], x & adj[v], out)
        p = p - {v}
        x = x | {v}


def max_cliques_containing(graph: KnowledgeGraph, node: str) -> list[list[str]]:
    """All maximum-size maximal cliques containing the node.

    Bron-Kerbosch with pivoting, seeded with the node itself so the search
    never leaves its closed neighborhood. Output cliques are sorted
    internally and against each other.
    """
    if node not in graph.nodes:
        raise MissingNodeError(f"unknown node {node!r}")
    adj = graph.adjacency()
    neighborhood = adj[node] | {node}
    local = induced_adjacency(adj, neighborhood)
    found: list[frozenset] = []
    _bron_kerbosch_pivot(local, {node}, set(local[node]), set(), found)
    if not found:
        return [[node]]
    biggest = max(len(c) for c in found)
    cliques = sorted(sorted(c) for c in found if len(c) == biggest)
    return cliques
