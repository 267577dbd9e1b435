"""Canonical JSON serialization for knowledge graphs.

The canonical schema is a top-level object with "nodes" and "edges" arrays:

    {"nodes": [{"id", "name", "category", "aliases"}, ...],
     "edges": [{"source", "target", "kinds", "pmids", "confidences", "weight"}, ...],
     "provenance": {...}}            # present only when non-empty

Nodes are sorted by id, edges by (source, target) with source < target,
aliases and kinds sorted, evidence sorted by article id with confidences
aligned to pmids. Weights are printed at full precision. Equal graphs
therefore serialize to identical bytes.

Loading also accepts field-name variants seen in the wild (see
FIELD_ALIASES); pass a custom field map to extend the mapping for a
particular published file.
"""

from __future__ import annotations

import json
import math

from .errors import GraphParseError, SchemaValidationError
from .model import CATEGORIES, EntityNode, KnowledgeGraph, RelationEdge, edge_weight

# Accepted alternative spellings for each canonical field, tried in order.
FIELD_ALIASES: dict[str, tuple[str, ...]] = {
    "nodes": ("nodes", "vertices", "entities"),
    "edges": ("edges", "links", "relations"),
    # node fields
    "id": ("id", "node_id", "identifier"),
    "name": ("name", "label", "display_name"),
    "category": ("category", "type", "node_type", "kind"),
    "aliases": ("aliases", "synonyms", "alias"),
    "parent_gene": ("parent_gene", "corresponding_gene", "gene"),
    # edge fields
    "source": ("source", "from", "node1", "u"),
    "target": ("target", "to", "node2", "v"),
    "kinds": ("kinds", "types", "relation_types", "kind", "relation", "label"),
    "pmids": ("pmids", "articles", "article_ids", "pubmed_ids", "pmid"),
    "confidences": ("confidences", "scores", "confidence"),
    "weight": ("weight", "w"),
}


def _pick(record: dict, canonical: str, field_map: dict | None):
    names = list(FIELD_ALIASES[canonical])
    if field_map and canonical in field_map:
        names.insert(0, field_map[canonical])
    for name in names:
        if name in record:
            return record[name]
    return None


def to_canonical_dict(kg: KnowledgeGraph) -> dict:
    nodes = []
    for nid in sorted(kg.nodes):
        node = kg.nodes[nid]
        record = {
            "id": node.id,
            "name": node.name,
            "category": node.category,
            "aliases": sorted(node.aliases),
        }
        if node.parent_gene is not None:
            record["parent_gene"] = node.parent_gene
        nodes.append(record)

    edges = []
    for a, b in sorted(kg.edge_pairs()):
        edge = kg.edge(a, b)
        evidence = sorted(edge.evidence.items())
        edges.append(
            {
                "source": a,
                "target": b,
                "kinds": sorted(edge.kinds),
                "pmids": [article for article, _ in evidence],
                "confidences": [conf for _, conf in evidence],
                "weight": edge.weight,
            }
        )

    payload = {"nodes": nodes, "edges": edges}
    if kg.provenance:
        payload["provenance"] = kg.provenance
    return payload


def serialize(kg: KnowledgeGraph) -> bytes:
    text = json.dumps(to_canonical_dict(kg), ensure_ascii=False, indent=1)
    return (text + "\n").encode("utf-8")


def save(kg: KnowledgeGraph, path) -> None:
    with open(path, "wb") as fh:
        fh.write(serialize(kg))


def _as_list(value):
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def deserialize(
    data: bytes | str,
    field_map: dict | None = None,
    weight_tol: float = 1e-12,
) -> KnowledgeGraph:
    """Parse and validate a graph stream.

    Raises GraphParseError (with line/column) on malformed JSON and
    SchemaValidationError listing every offending record otherwise.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        payload = json.loads(data)
    except json.JSONDecodeError as exc:
        raise GraphParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc

    if not isinstance(payload, dict):
        raise SchemaValidationError(["top level must be an object with 'nodes' and 'edges'"])

    raw_nodes = _pick(payload, "nodes", field_map)
    raw_edges = _pick(payload, "edges", field_map)
    offenders: list[str] = []
    if raw_nodes is None:
        offenders.append("missing 'nodes' array")
    if raw_edges is None:
        offenders.append("missing 'edges' array")
    if offenders:
        raise SchemaValidationError(offenders)

    kg = KnowledgeGraph(provenance=payload.get("provenance") or {})

    for i, record in enumerate(raw_nodes):
        if not isinstance(record, dict):
            offenders.append(f"node[{i}]: not an object")
            continue
        nid = _pick(record, "id", field_map)
        name = _pick(record, "name", field_map)
        category = _pick(record, "category", field_map)
        aliases = _as_list(_pick(record, "aliases", field_map))
        parent = _pick(record, "parent_gene", field_map)
        if not nid:
            offenders.append(f"node[{i}]: missing id")
            continue
        if category not in CATEGORIES:
            offenders.append(f"node[{i}] ({nid}): unknown category {category!r}")
            continue
        if nid in kg.nodes:
            offenders.append(f"node[{i}] ({nid}): duplicate id")
            continue
        kg.add_node(
            EntityNode(
                id=str(nid),
                name=str(name) if name is not None else str(nid),
                category=category,
                aliases={str(a) for a in aliases},
                parent_gene=str(parent) if parent else None,
            )
        )

    for i, record in enumerate(raw_edges):
        if not isinstance(record, dict):
            offenders.append(f"edge[{i}]: not an object")
            continue
        src = _pick(record, "source", field_map)
        dst = _pick(record, "target", field_map)
        kinds = _as_list(_pick(record, "kinds", field_map))
        pmids = [str(p) for p in _as_list(_pick(record, "pmids", field_map))]
        confs = _as_list(_pick(record, "confidences", field_map))
        weight = _pick(record, "weight", field_map)

        label = f"edge[{i}] ({src}-{dst})"
        if not src or not dst:
            offenders.append(f"edge[{i}]: missing source/target")
            continue
        if src == dst:
            offenders.append(f"{label}: self-loop")
            continue
        if src not in kg.nodes or dst not in kg.nodes:
            offenders.append(f"{label}: endpoint not in nodes array")
            continue
        if not pmids:
            offenders.append(f"{label}: no supporting article ids")
            continue
        if len(set(pmids)) != len(pmids):
            offenders.append(f"{label}: duplicate article ids")
            continue
        if confs and len(confs) != len(pmids):
            offenders.append(f"{label}: {len(confs)} confidences for {len(pmids)} articles")
            continue
        if not confs:
            # Confidence is provenance; an absent column loads as the
            # midpoint so the file still round-trips structurally.
            confs = [0.5] * len(pmids)
        try:
            evidence = {p: float(c) for p, c in zip(pmids, confs)}
            edge = RelationEdge(str(src), str(dst), set(map(str, kinds)), evidence)
        except Exception as exc:  # noqa: BLE001 - surfaced as a schema offence
            offenders.append(f"{label}: {exc}")
            continue
        if kg.has_edge(src, dst):
            offenders.append(f"{label}: duplicate edge for this pair")
            continue
        if weight is not None:
            expected = edge_weight(len(evidence))
            try:
                stored = float(weight)
            except (TypeError, ValueError):
                stored = math.nan
            if not math.isfinite(stored) or abs(stored - expected) > weight_tol:
                offenders.append(
                    f"{label}: stored weight {weight!r} inconsistent with "
                    f"{len(evidence)} article(s) (expected {expected!r})"
                )
                continue
        kg.add_edge(edge)

    if offenders:
        raise SchemaValidationError(offenders)
    return kg


def load(path, field_map: dict | None = None) -> KnowledgeGraph:
    with open(path, "rb") as fh:
        return deserialize(fh.read(), field_map=field_map)
