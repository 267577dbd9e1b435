"""Community detection over the weighted graph.

leiden() runs the full procedure: queue-based local moving, refinement
inside each community (only singleton refined communities merge, and only
into positively-gaining, connected targets within their parent community,
which keeps every final community internally connected), aggregation on
the refined partition with the unrefined one as the next level's starting
point, repeated until nothing moves. All randomness comes from the seed.

fast_greedy() is plain agglomerative modularity maximization: repeatedly
merge the connected community pair with the largest gain until no merge
helps, deterministic via representative-id tie-breaks.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from ..errors import MissingNodeError
from ..model import KnowledgeGraph

_EPS = 1e-12


@dataclass
class CommunityPartition:
    assignment: dict[str, int]
    modularity: float
    algorithm: str
    resolution: float = 1.0
    seed: int | None = None
    flags: list[str] = field(default_factory=list)

    def communities(self) -> list[list[str]]:
        groups: dict[int, list[str]] = {}
        for nid, cid in self.assignment.items():
            groups.setdefault(cid, []).append(nid)
        ordered = sorted(groups.values(), key=lambda g: (-len(g), min(g)))
        return [sorted(g) for g in ordered]

    @property
    def community_count(self) -> int:
        return len(set(self.assignment.values()))

    def members(self, community_id: int) -> list[str]:
        return sorted(nid for nid, cid in self.assignment.items() if cid == community_id)

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "resolution": self.resolution,
            "seed": self.seed,
            "modularity": self.modularity,
            "communities": self.community_count,
            "flags": self.flags,
            "assignment": dict(sorted(self.assignment.items())),
        }


def _canonical_labels(ids: list[str], membership: list[int]) -> dict[str, int]:
    """Relabel communities 0..k-1 by decreasing size, ties by smallest id."""
    groups: dict[int, list[str]] = {}
    for nid, label in zip(ids, membership):
        groups.setdefault(label, []).append(nid)
    ordered = sorted(groups.values(), key=lambda g: (-len(g), min(g)))
    assignment: dict[str, int] = {}
    for new_label, group in enumerate(ordered):
        for nid in group:
            assignment[nid] = new_label
    return assignment


def _index_graph(graph: KnowledgeGraph) -> tuple[list[str], list[dict[int, float]], float]:
    ids = sorted(graph.nodes)
    index = {nid: i for i, nid in enumerate(ids)}
    adj: list[dict[int, float]] = [{} for _ in ids]
    total = 0.0
    for edge in graph.edges():
        w = edge.weight
        a, b = index[edge.a], index[edge.b]
        adj[a][b] = adj[a].get(b, 0.0) + w
        adj[b][a] = adj[b].get(a, 0.0) + w
        total += w
    return ids, adj, total


def modularity_of(graph: KnowledgeGraph, assignment: dict[str, int], resolution: float = 1.0) -> float:
    """Weighted Newman modularity of a stored partition."""
    m = sum(e.weight for e in graph.edges())
    if m == 0:
        return 0.0
    strength: dict[str, float] = {nid: 0.0 for nid in graph.nodes}
    intra: dict[int, float] = {}
    comm_strength: dict[int, float] = {}
    for edge in graph.edges():
        w = edge.weight
        strength[edge.a] += w
        strength[edge.b] += w
        if assignment[edge.a] == assignment[edge.b]:
            intra[assignment[edge.a]] = intra.get(assignment[edge.a], 0.0) + w
    for nid, s in strength.items():
        cid = assignment[nid]
        comm_strength[cid] = comm_strength.get(cid, 0.0) + s
    q = 0.0
    for cid, s in comm_strength.items():
        q += intra.get(cid, 0.0) / m - resolution * (s / (2.0 * m)) ** 2
    return q


def _local_move(adj, membership, strengths, comm_strength, gamma, m, rng) -> bool:
    n = len(adj)
    order = list(range(n))
    rng.shuffle(order)
    queue = deque(order)
    queued = [True] * n
    moved_any = False
    next_label = max(membership) + 1 if membership else 0
    while queue:
        v = queue.popleft()
        queued[v] = False
        old = membership[v]
        weight_to: dict[int, float] = {}
        for u, w in adj[v].items():
            if u != v:
                weight_to[membership[u]] = weight_to.get(membership[u], 0.0) + w
        comm_strength[old] = comm_strength.get(old, 0.0) - strengths[v]
        best_c = old
        best_gain = weight_to.get(old, 0.0) - gamma * strengths[v] * comm_strength[old] / (2.0 * m)
        for c in sorted(weight_to):
            if c == old:
                continue
            gain = weight_to[c] - gamma * strengths[v] * comm_strength.get(c, 0.0) / (2.0 * m)
            if gain > best_gain + _EPS:
                best_gain = gain
                best_c = c
        if best_gain < -_EPS and comm_strength[old] > 0:
            # isolating the node beats every occupied community
            best_c = next_label
            next_label += 1
        comm_strength[best_c] = comm_strength.get(best_c, 0.0) + strengths[v]
        if best_c != old:
            membership[v] = best_c
            moved_any = True
            for u in adj[v]:
                if u != v and membership[u] != best_c and not queued[u]:
                    queue.append(u)
                    queued[u] = True
    return moved_any


def _refine(adj, membership, strengths, gamma, m, rng) -> list[int]:
    n = len(adj)
    refined = list(range(n))
    ref_strength = {i: strengths[i] for i in range(n)}
    ref_size = {i: 1 for i in range(n)}
    order = list(range(n))
    rng.shuffle(order)
    for v in order:
        if ref_size[refined[v]] > 1:
            continue
        weight_to: dict[int, float] = {}
        for u, w in adj[v].items():
            if u != v and membership[u] == membership[v]:
                weight_to[refined[u]] = weight_to.get(refined[u], 0.0) + w
        own = refined[v]
        best_d = None
        best_gain = _EPS
        for d in sorted(weight_to):
            if d == own:
                continue
            gain = weight_to[d] - gamma * strengths[v] * ref_strength[d] / (2.0 * m)
            if gain > best_gain:
                best_gain = gain
                best_d = d
        if best_d is not None:
            ref_strength[best_d] += strengths[v]
            ref_size[best_d] += 1
            del ref_strength[own]
            del ref_size[own]
            refined[v] = best_d
    return refined


def _aggregate(adj, refined, membership):
    labels = sorted(set(refined))
    relabel = {old: new for new, old in enumerate(labels)}
    group_of = [relabel[r] for r in refined]
    k = len(labels)
    new_adj: list[dict[int, float]] = [{} for _ in range(k)]
    for v, nbrs in enumerate(adj):
        gv = group_of[v]
        for u, w in nbrs.items():
            gu = group_of[u]
            if v == u:
                new_adj[gv][gv] = new_adj[gv].get(gv, 0.0) + w
            elif gv == gu:
                # intra-group edge appears from both directions; keep both
                # halves so the self-loop carries the doubled weight
                new_adj[gv][gv] = new_adj[gv].get(gv, 0.0) + w
            else:
                new_adj[gv][gu] = new_adj[gv].get(gu, 0.0) + w
    new_membership = [0] * k
    for v in range(len(adj)):
        new_membership[group_of[v]] = membership[v]
    return new_adj, group_of, new_membership


def leiden(graph: KnowledgeGraph, resolution: float = 1.0, seed: int = 0) -> CommunityPartition:
    """Leiden communities on the weighted graph at the given resolution."""
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    ids, adj, m = _index_graph(graph)
    n = len(ids)
    if n == 0:
        return CommunityPartition({}, 0.0, "leiden", resolution, seed, flags=["empty_graph"])
    if m == 0:
        return CommunityPartition(
            {nid: i for i, nid in enumerate(ids)}, 0.0, "leiden", resolution, seed,
            flags=["modularity_undefined"],
        )
    rng = random.Random(seed)
    node_of = list(range(n))  # original node -> current level node
    level_adj = adj
    membership = list(range(n))
    for _level in range(100):
        strengths = [sum(nbrs.values()) for nbrs in level_adj]
        comm_strength: dict[int, float] = {}
        for v, c in enumerate(membership):
            comm_strength[c] = comm_strength.get(c, 0.0) + strengths[v]
        moved = _local_move(level_adj, membership, strengths, comm_strength, resolution, m, rng)
        communities = set(membership)
        if len(communities) == len(level_adj):
            break
        refined = _refine(level_adj, membership, strengths, resolution, m, rng)
        level_adj, group_of, membership = _aggregate(level_adj, refined, membership)
        node_of = [group_of[g] for g in node_of]
        if not moved and len(level_adj) == len(refined):
            break

    final = [membership[node_of[i]] for i in range(n)]
    assignment = _canonical_labels(ids, final)
    q = modularity_of(graph, assignment, resolution)
    return CommunityPartition(assignment, q, "leiden", resolution, seed)


def fast_greedy(graph: KnowledgeGraph, resolution: float = 1.0) -> CommunityPartition:
    """Agglomerative greedy modularity maximization with id-order tie-breaks."""
    ids, adj, m = _index_graph(graph)
    n = len(ids)
    if n == 0:
        return CommunityPartition({}, 0.0, "fast_greedy", resolution, flags=["empty_graph"])
    if m == 0:
        return CommunityPartition(
            {nid: i for i, nid in enumerate(ids)}, 0.0, "fast_greedy", resolution,
            flags=["modularity_undefined"],
        )
    # community state keyed by representative (smallest member index)
    members: dict[int, set[int]] = {i: {i} for i in range(n)}
    strength: dict[int, float] = {i: sum(adj[i].values()) for i in range(n)}
    between: dict[int, dict[int, float]] = {i: {} for i in range(n)}
    for v, nbrs in enumerate(adj):
        for u, w in nbrs.items():
            if u > v:
                between[v][u] = between[v].get(u, 0.0) + w
                between[u][v] = between[u].get(v, 0.0) + w

    while True:
        best = None
        for a in sorted(between):
            for b in sorted(between[a]):
                if b <= a:
                    continue
                gain = between[a][b] / m - resolution * strength[a] * strength[b] / (2.0 * m * m)
                if best is None or gain > best[0] + _EPS:
                    best = (gain, a, b)
        if best is None or best[0] <= _EPS:
            break
        _, a, b = best
        members[a] |= members.pop(b)
        strength[a] += strength.pop(b)
        merged = between.pop(b)
        between[a].pop(b, None)
        for c, w in merged.items():
            if c == a:
                continue
            between[c].pop(b, None)
            between[c][a] = between[c].get(a, 0.0) + w
            between[a][c] = between[a].get(c, 0.0) + w

    membership = [0] * n
    for label, group in members.items():
        for v in group:
            membership[v] = label
    assignment = _canonical_labels(ids, membership)
    q = modularity_of(graph, assignment, resolution)
    return CommunityPartition(assignment, q, "fast_greedy", resolution)


def module_of(graph: KnowledgeGraph, partition: CommunityPartition, node: str) -> KnowledgeGraph:
    """Induced subgraph on the community containing the node."""
    if node not in partition.assignment:
        raise MissingNodeError(f"node {node!r} is not in the partition")
    return graph.subgraph(partition.members(partition.assignment[node]))


def export_gene_lists(graph: KnowledgeGraph, partition: CommunityPartition, out_dir) -> list[str]:
    """One newline-delimited gene-symbol file per module, named by module
    index. A module without genes gets a single header comment line."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for module_index, group in enumerate(partition.communities()):
        genes = sorted(
            {graph.nodes[nid].name for nid in group if graph.nodes[nid].category == "gene"}
        )
        path = os.path.join(out_dir, f"module_{module_index:02d}_genes.txt")
        with open(path, "w", encoding="utf-8") as fh:
            if genes:
                fh.write("\n".join(genes) + "\n")
            else:
                fh.write(f"# module {module_index}: no gene members\n")
        paths.append(path)
    return paths
