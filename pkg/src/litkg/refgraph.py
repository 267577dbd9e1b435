"""Reference graphs built from curated-database exports, used as validation
ground truth: gene-gene interactions (STRING-style TSV), drug-gene
interactions (DGIdb-style TSV), and metabolic pathways (KGML XML).

Only offline exports are read; nothing queries a live database. Identifier
mapping into the knowledge graph's namespaces goes through external alias
tables (two tab-separated columns, UTF-8), since mapping curation changes
faster than code.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from itertools import combinations

from .errors import GraphParseError

REFERENCE_KINDS = ("gene_gene", "drug_gene", "pathway")

# Channel keywords considered trustworthy in interaction exports. Scores in
# any other channel (text mining, co-expression, predictions) are ignored.
DEFAULT_ALLOWED_CHANNELS = ("experimental", "database")


@dataclass
class ReferenceGraph:
    kind: str
    source: str = ""
    nodes: dict[str, str] = field(default_factory=dict)  # id -> category
    edges: dict[tuple[str, str], set[str]] = field(default_factory=dict)  # pair -> tags
    report: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in REFERENCE_KINDS:
            raise GraphParseError(f"unknown reference kind {self.kind!r}")

    def add_edge(self, a: str, b: str, cat_a: str, cat_b: str, tag: str) -> None:
        if a == b:
            return
        self._check_categories(cat_a, cat_b)
        self.nodes.setdefault(a, cat_a)
        self.nodes.setdefault(b, cat_b)
        key = (a, b) if a < b else (b, a)
        self.edges.setdefault(key, set()).add(tag)

    def _check_categories(self, cat_a: str, cat_b: str) -> None:
        cats = {cat_a, cat_b}
        if self.kind == "gene_gene" and cats != {"gene"}:
            raise GraphParseError(f"gene_gene edge with categories {sorted(cats)}")
        if self.kind == "drug_gene" and sorted((cat_a, cat_b)) != ["chemical", "gene"]:
            raise GraphParseError(f"drug_gene edge with categories {sorted(cats)}")
        if self.kind == "pathway" and not cats <= {"gene", "chemical"}:
            raise GraphParseError(f"pathway edge with categories {sorted(cats)}")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "source": self.source,
            "nodes": [
                {"id": nid, "category": self.nodes[nid]} for nid in sorted(self.nodes)
            ],
            "edges": [
                {"source": a, "target": b, "tags": sorted(tags)}
                for (a, b), tags in sorted(self.edges.items())
            ],
            "report": self.report,
        }


def read_alias_table(path) -> dict[str, str]:
    """Two-column TSV: external name/symbol -> namespaced id. Lines starting
    with '#' are comments. Lookups are whitespace-trimmed."""
    table: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise GraphParseError(f"alias table needs two columns", line=lineno, column=1)
            table[parts[0].strip()] = parts[1].strip()
    return table


def _split_tsv(path):
    with open(path, encoding="utf-8") as fh:
        rows = [line.rstrip("\n") for line in fh]
    rows = [r for r in rows if r.strip()]
    if not rows:
        return [], []
    header = [h.strip().lstrip("#") for h in rows[0].split("\t")]
    return header, rows[1:]


def load_string(
    path,
    query_genes: dict[str, str],
    allowed_channels: tuple[str, ...] = DEFAULT_ALLOWED_CHANNELS,
    score_cutoff: float = 0.0,
    source: str = "STRING",
) -> ReferenceGraph:
    """Gene-gene reference from a STRING-style interaction TSV.

    An edge survives iff some allowed channel scores above the cutoff;
    all other channels are ignored entirely. Both endpoints must map
    through query_genes (symbol -> KG id); unmapped symbols are collected
    in the report, not fatal.
    """
    ref = ReferenceGraph(kind="gene_gene", source=source)
    unmapped: set[str] = set()
    header, rows = _split_tsv(path)
    if not rows:
        ref.report["unmapped_symbols"] = []
        return ref
    name_cols = [i for i, h in enumerate(header) if h in ("node1", "node2", "protein1", "protein2")]
    if len(name_cols) < 2:
        name_cols = [0, 1]
    channel_cols = {
        i: h
        for i, h in enumerate(header)
        if any(key in h.lower() for key in allowed_channels)
    }
    for lineno, row in enumerate(rows, start=2):
        parts = row.split("\t")
        if len(parts) < 2:
            raise GraphParseError("interaction row needs at least two columns", line=lineno, column=1)
        sym_a, sym_b = parts[name_cols[0]].strip(), parts[name_cols[1]].strip()
        supported = False
        for col, _name in channel_cols.items():
            if col >= len(parts) or not parts[col].strip():
                continue
            try:
                score = float(parts[col])
            except ValueError:
                raise GraphParseError(
                    f"non-numeric channel score {parts[col]!r}", line=lineno, column=col + 1
                ) from None
            if score > score_cutoff:
                supported = True
        if not supported:
            continue
        ids = []
        for sym in (sym_a, sym_b):
            mapped = query_genes.get(sym)
            if mapped is None:
                unmapped.add(sym)
            ids.append(mapped)
        if ids[0] is None or ids[1] is None:
            continue
        ref.add_edge(ids[0], ids[1], "gene", "gene", tag="string")
    ref.report["unmapped_symbols"] = sorted(unmapped)
    return ref


def load_dgidb(
    path,
    query_genes: dict[str, str],
    drug_aliases: dict[str, str] | None = None,
    source: str = "DGIdb",
) -> ReferenceGraph:
    """Bipartite drug-gene reference from a DGIdb-style interaction TSV.

    Genes outside the query set are excluded (and reported); drug names
    normalize through the alias table case-insensitively, falling back to
    a NAME: local namespace so unmapped drugs stay visible in reports.
    Duplicate claims for the same (drug, gene) collapse into one edge.
    """
    ref = ReferenceGraph(kind="drug_gene", source=source)
    header, rows = _split_tsv(path)
    lower_header = [h.lower() for h in header]

    def col(*names):
        for name in names:
            if name in lower_header:
                return lower_header.index(name)
        return None

    gene_col = col("gene_name", "gene", "gene_claim_name")
    drug_col = col("drug_name", "drug", "drug_claim_name")
    claim_col = col("interaction_types", "interaction_type", "interaction_claim_source")
    if rows and (gene_col is None or drug_col is None):
        raise GraphParseError("could not locate gene/drug columns in header", line=1, column=1)

    aliases = {k.casefold(): v for k, v in (drug_aliases or {}).items()}
    excluded_genes: set[str] = set()
    unmapped_drugs: set[str] = set()
    for lineno, row in enumerate(rows, start=2):
        parts = row.split("\t")
        if max(gene_col, drug_col) >= len(parts):
            raise GraphParseError("row shorter than header", line=lineno, column=1)
        gene_sym = parts[gene_col].strip()
        drug_name = parts[drug_col].strip()
        if not gene_sym or not drug_name:
            continue
        gene_id = query_genes.get(gene_sym)
        if gene_id is None:
            excluded_genes.add(gene_sym)
            continue
        drug_id = aliases.get(drug_name.casefold())
        if drug_id is None:
            unmapped_drugs.add(drug_name)
            drug_id = f"NAME:{drug_name}"
        tag = parts[claim_col].strip() if claim_col is not None and claim_col < len(parts) else ""
        ref.add_edge(drug_id, gene_id, "chemical", "gene", tag=tag or "dgidb")
    ref.report["excluded_genes"] = sorted(excluded_genes)
    ref.report["unmapped_drugs"] = sorted(unmapped_drugs)
    return ref


def load_kegg(
    path,
    compound_aliases: dict[str, str] | None = None,
    gene_aliases: dict[str, str] | None = None,
    source: str = "KEGG",
) -> ReferenceGraph:
    """Pathway reference from a KGML file, with edges from three rules:
    co-reactant pairs within one reaction, each reactant to each product of
    the same reaction, and each substrate to its catalyzing enzyme when one
    is present. Product-product pairs are not connected.

    Compounds/genes map through the alias tables; anything unmappable keeps
    a KEGG-local id and is reported.
    """
    ref = ReferenceGraph(kind="pathway", source=source)
    compound_aliases = compound_aliases or {}
    gene_aliases = gene_aliases or {}
    unmapped: set[str] = set()

    def map_id(kegg_name: str, category: str) -> str:
        table = compound_aliases if category == "chemical" else gene_aliases
        mapped = table.get(kegg_name)
        if mapped is None:
            bare = kegg_name.split(":", 1)[-1]
            mapped = table.get(bare)
        if mapped is None:
            unmapped.add(kegg_name)
            return f"KEGG:{kegg_name.split(':', 1)[-1]}"
        return mapped

    try:
        tree = ET.parse(path)
    except ET.ParseError as exc:
        line, column = exc.position if exc.position else (None, None)
        raise GraphParseError(f"invalid KGML: {exc}", line=line, column=column) from exc
    root = tree.getroot()

    # entry id -> list of KEGG names (an entry can bundle several genes)
    entry_names: dict[str, list[str]] = {}
    entry_types: dict[str, str] = {}
    enzymes_by_reaction: dict[str, list[str]] = {}
    for entry in root.findall("entry"):
        eid = entry.get("id")
        names = (entry.get("name") or "").split()
        entry_names[eid] = names
        entry_types[eid] = entry.get("type") or ""
        if entry_types[eid] in ("gene", "enzyme", "ortholog"):
            for reaction_name in (entry.get("reaction") or "").split():
                enzymes_by_reaction.setdefault(reaction_name, []).extend(names)

    for reaction in root.findall("reaction"):
        rname = reaction.get("name") or reaction.get("id") or ""
        substrates: list[str] = []
        products: list[str] = []
        for sub in reaction.findall("substrate"):
            substrates.extend((sub.get("name") or "").split())
        for prod in reaction.findall("product"):
            products.extend((prod.get("name") or "").split())
        sub_ids = [map_id(s, "chemical") for s in dict.fromkeys(substrates)]
        prod_ids = [map_id(p, "chemical") for p in dict.fromkeys(products)]
        enzyme_ids = [
            map_id(e, "gene") for e in dict.fromkeys(enzymes_by_reaction.get(rname, []))
        ]
        for a, b in combinations(sub_ids, 2):
            ref.add_edge(a, b, "chemical", "chemical", tag="co_reactant")
        for s in sub_ids:
            for p in prod_ids:
                ref.add_edge(s, p, "chemical", "chemical", tag="reactant_product")
            for e in enzyme_ids:
                ref.add_edge(s, e, "chemical", "gene", tag="substrate_enzyme")

    ref.report["unmapped"] = sorted(unmapped)
    return ref
