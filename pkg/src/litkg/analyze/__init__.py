from .centrality import (
    CentralityParams,
    RankingRow,
    RankingTable,
    build_ranking,
    personalized_katz,
    personalized_pagerank,
    spectral_radius,
    top_by_category,
)
from .cohesion import KCoreResult, max_cliques_containing, max_kcore_of
from .communities import (
    CommunityPartition,
    export_gene_lists,
    fast_greedy,
    leiden,
    modularity_of,
    module_of,
)
from .hetesim import CHEMICAL_GENE_DISEASE, MetaPath, hetesim
from .metrics import MetricsRecord, characterize, local_clustering_percentile
from .novelty import novelty_merge, novelty_union
from .similarity import entity_similarity, pair_similarity

__all__ = [
    "CentralityParams",
    "RankingRow",
    "RankingTable",
    "build_ranking",
    "personalized_katz",
    "personalized_pagerank",
    "spectral_radius",
    "top_by_category",
    "KCoreResult",
    "max_cliques_containing",
    "max_kcore_of",
    "CommunityPartition",
    "export_gene_lists",
    "fast_greedy",
    "leiden",
    "modularity_of",
    "module_of",
    "CHEMICAL_GENE_DISEASE",
    "MetaPath",
    "hetesim",
    "MetricsRecord",
    "characterize",
    "local_clustering_percentile",
    "novelty_merge",
    "novelty_union",
    "entity_similarity",
    "pair_similarity",
]
