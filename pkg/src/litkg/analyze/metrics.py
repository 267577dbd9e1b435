"""Whole-network characterization: exact diameter and center, clustering,
transitivity, degree assortativity, degree histogram.

Structural metrics run on the unweighted simple graph. The diameter/center
search keeps per-node eccentricity bounds that tighten with every BFS
(lower: max(ecc(v) - d, d); upper: ecc(v) + d) and drops nodes that can no
longer influence either the diameter or center membership, so large
networks need far fewer single-source traversals than all-pairs. BFS
distance vectors come from scipy's C implementation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from ..errors import EmptyResultError, MissingNodeError
from ..graphops import connected_component, connected_components, induced_adjacency, local_clustering, triangles_and_triples
from ..model import KnowledgeGraph


@dataclass
class MetricsRecord:
    diameter: int
    radius: int
    center_nodes: list[str]
    center_closeness: dict[str, float]
    average_clustering: float
    transitivity: float
    degree_assortativity: float
    degree_histogram: dict[int, int]
    local_clustering: dict[str, float]
    node_count: int
    edge_count: int
    bfs_calls: int = 0
    warning: str | None = None

    def summary(self) -> dict:
        return {
            "nodes": self.node_count,
            "edges": self.edge_count,
            "diameter": self.diameter,
            "radius": self.radius,
            "center_nodes": self.center_nodes,
            "center_closeness": self.center_closeness,
            "average_clustering": self.average_clustering,
            "transitivity": self.transitivity,
            "degree_assortativity": self.degree_assortativity,
            "degree_histogram": {str(k): v for k, v in sorted(self.degree_histogram.items())},
            "warning": self.warning,
        }


def _to_csr(adj: dict[str, set[str]], ids: list[str]) -> csr_matrix:
    index = {nid: i for i, nid in enumerate(ids)}
    rows, cols = [], []
    for nid, nbrs in adj.items():
        i = index[nid]
        for other in nbrs:
            rows.append(i)
            cols.append(index[other])
    data = np.ones(len(rows), dtype=np.int8)
    return csr_matrix((data, (rows, cols)), shape=(len(ids), len(ids)))


def eccentricity_search(adj: dict[str, set[str]]) -> tuple[int, int, dict[str, float], dict[str, float], int]:
    """Exact diameter, radius, per-center eccentricity and closeness over a
    connected adjacency. Returns (diameter, radius, exact_ecc, dist_sums,
    bfs_calls); exact_ecc holds every node whose eccentricity had to be
    resolved, which always includes the whole center."""
    ids = sorted(adj)
    n = len(ids)
    if n == 1:
        return 0, 0, {ids[0]: 0.0}, {ids[0]: 0.0}, 0
    matrix = _to_csr(adj, ids)
    degrees = np.asarray(matrix.sum(axis=1)).ravel()

    lower = np.full(n, -np.inf)
    upper = np.full(n, np.inf)
    exact: dict[int, int] = {}
    dist_sum: dict[int, float] = {}
    undecided = np.ones(n, dtype=bool)
    diam_low = 0
    rad_up = np.inf
    pick_high = True
    bfs_calls = 0

    while undecided.any():
        candidates = np.flatnonzero(undecided)
        if pick_high:
            key = upper[candidates]
            best = candidates[key == key.max()]
        else:
            key = lower[candidates]
            best = candidates[key == key.min()]
        v = int(best[np.argmax(degrees[best])])
        pick_high = not pick_high

        dist = dijkstra(matrix, directed=False, unweighted=True, indices=v)
        bfs_calls += 1
        ecc = int(dist.max())
        exact[v] = ecc
        dist_sum[v] = float(dist.sum())
        diam_low = max(diam_low, ecc)
        rad_up = min(rad_up, ecc)
        lower[v] = upper[v] = ecc
        np.maximum(lower, np.maximum(ecc - dist, dist), out=lower)
        np.minimum(upper, ecc + dist, out=upper)

        resolved = lower == upper
        for i in np.flatnonzero(resolved & undecided):
            e = int(lower[i])
            exact.setdefault(int(i), e)
            diam_low = max(diam_low, e)
            rad_up = min(rad_up, e)
        irrelevant = (upper <= diam_low) & (lower > rad_up)
        undecided &= ~(resolved | irrelevant)

    radius = min(exact.values())
    diameter = diam_low
    # center nodes resolved purely by bounds still need one traversal each
    # so their closeness can be reported
    for i, ecc in exact.items():
        if ecc == radius and i not in dist_sum:
            dist_sum[i] = float(dijkstra(matrix, directed=False, unweighted=True, indices=i).sum())
            bfs_calls += 1
    exact_ecc = {ids[i]: float(e) for i, e in exact.items()}
    sums = {ids[i]: s for i, s in dist_sum.items()}
    return diameter, radius, exact_ecc, sums, bfs_calls


def degree_assortativity(adj: dict[str, set[str]]) -> float:
    """Pearson correlation of endpoint degrees over (symmetrized) edges."""
    xs, ys = [], []
    for u, nbrs in adj.items():
        du = len(nbrs)
        for v in nbrs:
            xs.append(du)
            ys.append(len(adj[v]))
    if not xs:
        return 0.0
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    sx = x.std()
    sy = y.std()
    if sx == 0 or sy == 0:
        return 0.0
    return float(((x - x.mean()) * (y - y.mean())).mean() / (sx * sy))


def characterize(graph: KnowledgeGraph, anchor: str | None = None) -> MetricsRecord:
    """Full metric sweep. On a disconnected graph the sweep runs on the
    component containing the anchor (or the largest one when no anchor is
    configured) and the record carries a warning saying so."""
    if graph.node_count == 0:
        raise EmptyResultError("cannot characterize an empty graph")
    adj = {nid: set(nbrs) for nid, nbrs in graph.adjacency().items()}
    warning = None
    components = connected_components(adj)
    if len(components) > 1:
        if anchor is not None:
            if anchor not in adj:
                raise MissingNodeError(f"anchor {anchor!r} is not in the graph")
            keep = connected_component(adj, anchor)
            warning = (
                f"graph has {len(components)} components; metrics computed on the "
                f"anchor's component ({len(keep)} nodes)"
            )
        else:
            keep = components[0]
            warning = (
                f"graph has {len(components)} components; metrics computed on the "
                f"largest ({len(keep)} nodes)"
            )
        adj = induced_adjacency(adj, keep)

    diameter, radius, exact_ecc, dist_sums, bfs_calls = eccentricity_search(adj)
    center = sorted(nid for nid, ecc in exact_ecc.items() if ecc == radius)
    n = len(adj)
    closeness = {
        nid: ((n - 1) / dist_sums[nid]) if dist_sums.get(nid) else 0.0
        for nid in center
    }

    coeffs = local_clustering(adj)
    _, triangles, triples = triangles_and_triples(adj)
    transitivity = 3.0 * triangles / triples if triples else 0.0
    histogram: dict[int, int] = {}
    for nbrs in adj.values():
        histogram[len(nbrs)] = histogram.get(len(nbrs), 0) + 1
    edge_total = sum(len(nbrs) for nbrs in adj.values()) // 2

    return MetricsRecord(
        diameter=diameter,
        radius=radius,
        center_nodes=center,
        center_closeness=closeness,
        average_clustering=sum(coeffs.values()) / len(coeffs),
        transitivity=transitivity,
        degree_assortativity=degree_assortativity(adj),
        degree_histogram=histogram,
        local_clustering=coeffs,
        node_count=n,
        edge_count=edge_total,
        bfs_calls=bfs_calls,
        warning=warning,
    )


def local_clustering_percentile(graph: KnowledgeGraph, node: str) -> tuple[float, float | None]:
    """Local clustering coefficient and its percentile among all nodes of
    degree >= 2 (fraction of that population with a strictly smaller
    coefficient). Degree < 2 gives coefficient 0 and an undefined (None)
    percentile."""
    if node not in graph.nodes:
        raise MissingNodeError(f"unknown node {node!r}")
    adj = graph.adjacency()
    coeffs = local_clustering(adj)
    if len(adj[node]) < 2:
        return 0.0, None
    population = [coeffs[nid] for nid in adj if len(adj[nid]) >= 2]
    value = coeffs[node]
    smaller = sum(1 for c in population if c < value)
    return value, 100.0 * smaller / len(population)
