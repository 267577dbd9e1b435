"""Plain-graph primitives shared by the build, validate and analyze stages.

Everything here works on an adjacency mapping {node: set(neighbors)} so the
same code serves knowledge graphs, reference graphs and overlay graphs.
"""

from __future__ import annotations

from collections import deque
from typing import Hashable, Iterable, Mapping

Adjacency = Mapping[Hashable, set]


def bfs_distances(adj: Adjacency, source) -> dict:
    """Hop distances from source to every reachable node."""
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u]
        for v in adj[u]:
            if v not in dist:
                dist[v] = du + 1
                queue.append(v)
    return dist


def shortest_path_lex(adj: Adjacency, source, target) -> list | None:
    """Lexicographically smallest shortest path from source to target.

    Distances are computed from the target, then the path is walked from
    the source, always picking the smallest-id neighbor one hop closer.
    Returns None when target is unreachable.
    """
    if source == target:
        return [source]
    dist = bfs_distances(adj, target)
    if source not in dist:
        return None
    path = [source]
    current = source
    while current != target:
        step = dist[current] - 1
        current = min(v for v in adj[current] if dist.get(v) == step)
        path.append(current)
    return path


def connected_component(adj: Adjacency, anchor) -> set:
    seen = {anchor}
    queue = deque([anchor])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def connected_components(adj: Adjacency) -> list[set]:
    """All components, largest first (ties by smallest member id)."""
    remaining = set(adj)
    components = []
    while remaining:
        comp = connected_component(adj, next(iter(remaining)))
        components.append(comp)
        remaining -= comp
    components.sort(key=lambda c: (-len(c), min(map(str, c))))
    return components


def giant_component(adj: Adjacency) -> set:
    comps = connected_components(adj)
    if not comps:
        return set()
    return comps[0]


def induced_adjacency(adj: Adjacency, keep: Iterable) -> dict:
    keep = set(keep)
    return {u: adj[u] & keep for u in keep}


def degree_map(adj: Adjacency) -> dict:
    return {u: len(nbrs) for u, nbrs in adj.items()}


def core_numbers(adj: Adjacency) -> dict:
    """Core index per node by iterative peeling (bucket algorithm)."""
    degrees = degree_map(adj)
    if not degrees:
        return {}
    max_deg = max(degrees.values())
    buckets: list[list] = [[] for _ in range(max_deg + 1)]
    for node, d in degrees.items():
        buckets[d].append(node)
    core: dict = {}
    current = dict(degrees)
    seen = set()
    k = 0
    for d in range(max_deg + 1):
        stack = buckets[d]
        while stack:
            node = stack.pop()
            if node in seen or current[node] > d:
                continue
            seen.add(node)
            k = max(k, current[node])
            core[node] = k
            for nbr in adj[node]:
                if nbr not in seen:
                    current[nbr] -= 1
                    target = max(current[nbr], d)
                    if target <= d:
                        stack.append(nbr)
                    else:
                        buckets[target].append(nbr)
    return core


def triangles_and_triples(adj: Adjacency) -> tuple[dict, int, int]:
    """Per-node triangle counts, total triangles, and connected triples.

    Node ids must be mutually comparable (they are strings throughout this
    package); each edge is visited once via the id ordering.
    """
    tri = {u: 0 for u in adj}
    for u, nbrs in adj.items():
        for v in nbrs:
            if not u < v:
                continue
            common = len(nbrs & adj[v])
            tri[u] += common
            tri[v] += common
    for u in tri:
        tri[u] //= 2
    total = sum(tri.values()) // 3
    triples = sum(d * (d - 1) // 2 for d in degree_map(adj).values())
    return tri, total, triples


def local_clustering(adj: Adjacency) -> dict:
    """Local clustering coefficient per node; 0 by convention for deg < 2."""
    tri, _, _ = triangles_and_triples(adj)
    coeff = {}
    for u, nbrs in adj.items():
        d = len(nbrs)
        coeff[u] = 0.0 if d < 2 else 2.0 * tri[u] / (d * (d - 1))
    return coeff
