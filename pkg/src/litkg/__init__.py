"""Literature-mined knowledge graphs: build, validate, analyze, report."""

from .model import EntityNode, KnowledgeGraph, RelationEdge, edge_weight
from .serialize import deserialize, load, save, serialize

__version__ = "0.1.0"

__all__ = [
    "EntityNode",
    "KnowledgeGraph",
    "RelationEdge",
    "edge_weight",
    "serialize",
    "deserialize",
    "load",
    "save",
    "__version__",
]
