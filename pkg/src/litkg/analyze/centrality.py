"""Personalized centralities on the weighted graph, and ranking tables.

Personalized PageRank iterates p <- (1-d) e_s + d (W p + dangling * e_s)
with W the column-stochastic transition operator built from edge weights;
mass stranded on strength-zero nodes teleports back to the source, so the
scores always sum to one. Personalized Katz solves x = alpha A x + e_s by
fixed-point iteration with alpha = decay_ratio / lambda_max, the spectral
radius coming from power iteration on the weighted adjacency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix

from ..errors import ConfigError, ConvergenceError, MissingNodeError
from ..model import KnowledgeGraph


@dataclass
class CentralityParams:
    damping: float = 0.85            # teleport survival probability for PPR
    decay_ratio: float = 0.95        # Katz alpha = decay_ratio / lambda_max
    tolerance: float = 1e-10
    max_iterations: int = 100_000
    lambda_tolerance: float = 1e-8

    def __post_init__(self):
        if not (0.0 < self.damping < 1.0):
            raise ConfigError(f"damping must lie in (0, 1), got {self.damping}")
        if not (0.0 <= self.decay_ratio < 1.0):
            raise ConfigError(f"decay ratio must lie in [0, 1), got {self.decay_ratio}")


def _weighted_csr(graph: KnowledgeGraph) -> tuple[list[str], csr_matrix]:
    ids = sorted(graph.nodes)
    index = {nid: i for i, nid in enumerate(ids)}
    rows, cols, data = [], [], []
    for edge in graph.edges():
        a, b = index[edge.a], index[edge.b]
        w = edge.weight
        rows.extend((a, b))
        cols.extend((b, a))
        data.extend((w, w))
    matrix = csr_matrix((data, (rows, cols)), shape=(len(ids), len(ids)))
    return ids, matrix


def personalized_pagerank(
    graph: KnowledgeGraph, source: str, params: CentralityParams | None = None
) -> dict[str, float]:
    params = params or CentralityParams()
    if source not in graph.nodes:
        raise MissingNodeError(f"unknown source {source!r}")
    ids, adjacency = _weighted_csr(graph)
    n = len(ids)
    index = {nid: i for i, nid in enumerate(ids)}
    strengths = np.asarray(adjacency.sum(axis=1)).ravel()
    dangling = strengths == 0.0
    inv = np.where(dangling, 0.0, 1.0 / np.where(dangling, 1.0, strengths))
    e = np.zeros(n)
    e[index[source]] = 1.0
    p = e.copy()
    d = params.damping
    for _ in range(params.max_iterations):
        outflow = p * inv
        spread = adjacency.dot(outflow)
        stranded = p[dangling].sum()
        p_next = (1.0 - d) * e + d * (spread + stranded * e)
        residual = float(np.abs(p_next - p).sum())
        p = p_next
        if residual < params.tolerance:
            return {nid: float(p[i]) for nid, i in index.items()}
    raise ConvergenceError("personalized pagerank did not converge", residual)


def spectral_radius(matrix: csr_matrix, tolerance: float = 1e-8, max_iterations: int = 100_000) -> float:
    """Largest-magnitude eigenvalue of a symmetric non-negative matrix.

    Power iteration on A^2 (positive semidefinite, so bipartite +/- pairs
    cannot make the iterate oscillate) with the Rayleigh-quotient residual
    as a rigorous a-posteriori bound: |rho - lambda^2| <= ||A^2 x - rho x||
    for unit x. The achieved accuracy is typically far below the stopping
    tolerance because the Rayleigh error shrinks with the residual squared.
    """
    n = matrix.shape[0]
    if n == 0 or matrix.nnz == 0:
        return 0.0
    x = np.ones(n) / math.sqrt(n)
    rho = 0.0
    for _ in range(max_iterations):
        y = matrix.dot(x)
        z = matrix.dot(y)  # A^2 x
        rho = float(y.dot(y))  # Rayleigh quotient of A^2 at unit x
        residual = float(np.linalg.norm(z - rho * x))
        if residual <= 2.0 * tolerance * max(rho, 1e-300):
            return math.sqrt(rho)
        x = z / float(np.linalg.norm(z))
    raise ConvergenceError("power iteration for the spectral radius stalled", math.sqrt(rho))


def personalized_katz(
    graph: KnowledgeGraph, source: str, params: CentralityParams | None = None
) -> dict[str, float]:
    params = params or CentralityParams()
    if source not in graph.nodes:
        raise MissingNodeError(f"unknown source {source!r}")
    ids, adjacency = _weighted_csr(graph)
    index = {nid: i for i, nid in enumerate(ids)}
    lam = spectral_radius(adjacency, params.lambda_tolerance)
    alpha = params.decay_ratio / lam if lam > 0 else 0.0
    e = np.zeros(len(ids))
    e[index[source]] = 1.0
    x = e.copy()
    residual = math.inf
    for _ in range(params.max_iterations):
        x = alpha * adjacency.dot(x) + e
        residual = float(np.abs(x - alpha * adjacency.dot(x) - e).max())
        if residual < params.tolerance:
            return {nid: float(x[i]) for nid, i in index.items()}
    raise ConvergenceError("personalized katz did not converge", residual)


@dataclass
class RankingRow:
    rank: int
    id: str
    name: str
    category: str
    score: float


@dataclass
class RankingTable:
    metric: str  # ppr | katz | hetesim | disease_similarity | chemical_similarity
    rows: list[RankingRow] = field(default_factory=list)

    def top(self, category: str, k: int) -> list[RankingRow]:
        picked = [r for r in self.rows if r.category == category][:k]
        return [
            RankingRow(i + 1, r.id, r.name, r.category, r.score)
            for i, r in enumerate(picked)
        ]

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "rows": [
                {"rank": r.rank, "id": r.id, "name": r.name, "category": r.category, "score": r.score}
                for r in self.rows
            ],
        }


def build_ranking(
    graph: KnowledgeGraph,
    scores: dict[str, float],
    metric: str,
    exclude: tuple[str, ...] = (),
) -> RankingTable:
    """Descending ranking over all scored nodes; ties break by node id and
    non-finite scores are rejected outright."""
    bad = [nid for nid, s in scores.items() if not math.isfinite(s)]
    if bad:
        raise ConfigError(f"non-finite scores for: {sorted(bad)[:5]}")
    order = sorted(scores.items(), key=lambda item: (-item[1], item[0]))
    rows = []
    for nid, score in order:
        if nid in exclude:
            continue
        node = graph.nodes[nid]
        rows.append(RankingRow(len(rows) + 1, nid, node.name, node.category, score))
    return RankingTable(metric=metric, rows=rows)


def top_by_category(
    graph: KnowledgeGraph,
    scores: dict[str, float],
    category: str,
    k: int,
    exclude: tuple[str, ...] = (),
) -> list[RankingRow]:
    """Top-k nodes of one category by score, excluding the personalization
    source; fewer than k candidates returns them all."""
    if k < 1:
        raise ConfigError("k must be at least 1")
    table = build_ranking(graph, scores, metric="adhoc", exclude=exclude)
    return table.top(category, k)
