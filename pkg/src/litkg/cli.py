"""Command-line entry point.

Subcommands: ingest, build, validate, analyze, report, pipeline. Artifacts
land under <out>/{graphs,reports,rankings,html}; structured logs go to
stderr. Exit codes: 0 success, 1 user error (bad flags, missing files,
invalid inputs), 2 internal error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys

from .analyze import (
    build_ranking,
    characterize,
    entity_similarity,
    export_gene_lists,
    fast_greedy,
    hetesim,
    leiden,
    local_clustering_percentile,
    max_cliques_containing,
    max_kcore_of,
    module_of,
    novelty_merge,
    personalized_katz,
    personalized_pagerank,
)
from .build import run_build
from .config import RunConfig, load_config
from .errors import ConfigError, LitkgError
from .ingest import (
    AnnotationClient,
    LiteratureClient,
    RawRelation,
    fetch_annotations,
    fetch_article_ids,
    expand_seeds,
)
from .model import EntityNode, KnowledgeGraph
from .refgraph import load_dgidb, load_kegg, load_string, read_alias_table
from .serialize import load as load_kg, save as save_kg
from .report import (
    clustering_distribution_figure,
    degree_histogram_figure,
    emit_figure_tables,
    emit_html_view,
    ranking_figure,
    write_classification_csv,
    write_coverage_csv,
    write_ranking_csv,
    write_ranking_json,
)
from .validate import EdgeClassification, classify_edges, overlay_export, path_coverage

log = logging.getLogger("litkg")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as exit code 1, not 2."""

    def error(self, message):
        raise UsageError(message)


def _write_json(path, payload) -> str:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, ensure_ascii=False, indent=1, sort_keys=True)
        fh.write("\n")
    return str(path)


def _load_entities(path) -> dict[str, EntityNode]:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    entities = {}
    for record in raw:
        node = EntityNode(
            id=record["id"],
            name=record.get("name", record["id"]),
            category=record["category"],
            aliases=set(record.get("aliases", [])),
            parent_gene=record.get("parent_gene"),
        )
        entities[node.id] = node
    return entities


def _load_relations(path) -> list[RawRelation]:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return [RawRelation(**record) for record in raw]


def _load_classification(path) -> EdgeClassification:
    """Rebuild a classification from the JSON report emitted by validate."""
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return EdgeClassification(
        green={tuple(p) for p in raw["green"]},
        red={tuple(p) for p in raw["red"]},
        blue={tuple(p) for p in raw["blue"]},
        shared_nodes=set(raw.get("shared_nodes", [])),
        reference_kind=raw.get("reference_kind", ""),
    )


def _graph_alias_maps(kg: KnowledgeGraph) -> tuple[dict[str, str], dict[str, str]]:
    """Symbol/name -> id maps derived from the graph itself: gene names and
    aliases, chemical names and aliases. External alias tables extend these."""
    genes: dict[str, str] = {}
    chems: dict[str, str] = {}
    for nid, node in sorted(kg.nodes.items()):
        table = genes if node.category == "gene" else chems if node.category == "chemical" else None
        if table is None:
            continue
        for label in {node.name, *node.aliases}:
            table.setdefault(label, nid)
    return genes, chems


class ReplayTransport:
    """Serve recorded responses from a JSON file mapping url (or url
    substring) to response body; used for offline/reproducible ingestion."""

    def __init__(self, path):
        with open(path, encoding="utf-8") as fh:
            self.routes = json.load(fh)

    def __call__(self, url: str) -> bytes:
        if url in self.routes:
            return json.dumps(self.routes[url]).encode()
        for key, body in sorted(self.routes.items(), key=lambda kv: -len(kv[0])):
            if key in url:
                return json.dumps(body).encode()
        raise ConnectionError(f"no recorded response for {url}")


# -- subcommands -------------------------------------------------------------


def cmd_ingest(config: RunConfig, args) -> int:
    terms = args.terms or config.seed_terms
    if not terms:
        raise ConfigError("no seed terms: pass --terms or set seed_terms in the config")
    transport = ReplayTransport(args.service_fixture) if args.service_fixture else None
    lit = LiteratureClient(
        config.literature_base_url or "https://literature.invalid",
        cache_dir=os.path.join(config.cache_dir, "literature"),
        transport=transport,
        rate_per_second=config.rate_per_second,
        api_key=config.api_key,
    )
    annot = AnnotationClient(
        config.annotation_base_url or "https://annotations.invalid",
        cache_dir=os.path.join(config.cache_dir, "annotations"),
        transport=transport,
        rate_per_second=config.rate_per_second,
        api_key=config.api_key,
    )

    def harvest(stage_terms):
        ids: list[str] = []
        for term in stage_terms:
            got = fetch_article_ids(term, config.retrieval, lit)
            log.info("term %r: %d article ids", term, len(got))
            ids.extend(got)
        unique = list(dict.fromkeys(ids))
        result = fetch_annotations(unique, annot) if unique else None
        return unique, result

    initial_ids, initial = harvest(terms)
    if initial is None:
        raise ConfigError("initial retrieval produced no articles")
    anchor_ids = {
        e.id
        for e in initial.entities
        if e.name.casefold() in {t.casefold() for t in terms}
        or {a.casefold() for a in e.aliases} & {t.casefold() for t in terms}
    }
    log.info("resolved %d anchor entities from %d terms", len(anchor_ids), len(terms))
    seeds = expand_seeds(initial.relations, anchor_ids or set(terms))
    log.info("expanded to %d secondary seed terms", len(seeds.terms))
    second_ids, second = harvest(seeds.terms)

    entities: dict[str, EntityNode] = {e.id: e for e in initial.entities}
    relations = list(initial.relations)
    seen = {(r.pair, r.kind, r.article_id) for r in relations}
    if second is not None:
        for e in second.entities:
            known = entities.get(e.id)
            if known is None:
                entities[e.id] = e
            else:
                known.aliases |= e.aliases
        for r in second.relations:
            key = (r.pair, r.kind, r.article_id)
            if key not in seen:
                seen.add(key)
                relations.append(r)

    out = config.out("ingest", "entities.json")
    _write_json(
        out,
        [
            {
                "id": e.id,
                "name": e.name,
                "category": e.category,
                "aliases": sorted(e.aliases),
                **({"parent_gene": e.parent_gene} if e.parent_gene else {}),
            }
            for e in sorted(entities.values(), key=lambda e: e.id)
        ],
    )
    _write_json(
        config.out("ingest", "relations.json"),
        [dataclasses.asdict(r) for r in relations],
    )
    _write_json(
        config.out("ingest", "ingest_report.json"),
        {
            "initial_terms": list(terms),
            "initial_articles": len(initial_ids),
            "expanded_terms": list(seeds.terms),
            "expanded_articles": len(second_ids),
            "entities": len(entities),
            "relations": len(relations),
            "batch_errors": (initial.errors + (second.errors if second else [])),
            "out_of_scope": {
                k: initial.out_of_scope.get(k, 0)
                + (second.out_of_scope.get(k, 0) if second else 0)
                for k in {*initial.out_of_scope, *(second.out_of_scope if second else {})}
            },
        },
    )
    log.info("ingest artifacts under %s", os.path.join(config.output_dir, "ingest"))
    return 0


def cmd_build(config: RunConfig, args) -> int:
    relations_path = args.relations or config.raw_relations_path
    entities_path = args.entities or config.entities_path
    if not relations_path or not entities_path:
        raise ConfigError("build needs --relations and --entities (or config paths)")
    relations = _load_relations(relations_path)
    entities = _load_entities(entities_path)
    log.info("building from %d relations over %d entities", len(relations), len(entities))
    result = run_build(
        relations,
        entities,
        config.filters,
        anchor=config.anchor,
        provenance={"anchor": config.anchor, "tool": "litkg"},
    )
    save_kg(result.extended, config.out("graphs", "extended_graph.json"))
    if result.high_confidence is not None:
        save_kg(result.high_confidence, config.out("graphs", "highconf_graph.json"))
    _write_json(config.out("reports", "build_report.json"), result.report)
    log.info(
        "extended: %d nodes / %d edges; high-confidence: %s",
        result.extended.node_count,
        result.extended.edge_count,
        "absent"
        if result.high_confidence is None
        else f"{result.high_confidence.node_count} nodes / {result.high_confidence.edge_count} edges",
    )
    return 0


def _load_reference(config: RunConfig, args, kg: KnowledgeGraph):
    gene_map, chem_map = _graph_alias_maps(kg)
    tables = config.alias_tables
    if args.gene_map or tables.get("gene_symbols"):
        gene_map.update(read_alias_table(args.gene_map or tables["gene_symbols"]))
    if args.drug_map or tables.get("drug_names"):
        chem_map.update(read_alias_table(args.drug_map or tables["drug_names"]))
    if args.kind == "gene_gene":
        return load_string(args.reference, gene_map, score_cutoff=args.score_cutoff)
    if args.kind == "drug_gene":
        return load_dgidb(args.reference, gene_map, drug_aliases=chem_map)
    compound_map = (
        read_alias_table(args.compound_map or tables["kegg_compounds"])
        if (args.compound_map or tables.get("kegg_compounds"))
        else {}
    )
    kegg_gene_map = dict(gene_map)
    if args.kegg_gene_map or tables.get("kegg_genes"):
        kegg_gene_map.update(read_alias_table(args.kegg_gene_map or tables["kegg_genes"]))
    return load_kegg(args.reference, compound_map, kegg_gene_map)


def cmd_validate(config: RunConfig, args) -> int:
    if not args.graph or not args.reference or not args.kind:
        raise ConfigError("validate needs --graph, --reference and --kind")
    kg = load_kg(args.graph)
    drift = config.verify_reference_checksums()
    for note in drift:
        log.warning("%s", note)
    ref = _load_reference(config, args, kg)
    classification = classify_edges(kg, ref)
    coverage = path_coverage(kg, classification)
    overlay = overlay_export(kg, classification, coverage)

    tag = args.kind
    payload = classification.to_dict()
    payload["reference_report"] = ref.report
    payload["path_coverage"] = {
        "average_length": coverage.average_length,
        "residual_uncovered": coverage.residual_uncovered,
    }
    if drift:
        payload["snapshot_drift"] = drift
    _write_json(config.out("reports", f"classification_{tag}.json"), payload)
    write_classification_csv(config.out("reports", f"classification_{tag}.csv"), classification)
    _write_json(config.out("reports", f"coverage_{tag}.json"), coverage.to_dict())
    write_coverage_csv(config.out("reports", f"coverage_{tag}.csv"), coverage)
    _write_json(config.out("graphs", f"overlay_{tag}.json"), overlay.to_dict())
    emit_html_view(
        overlay,
        config.out("html", f"overlay_{tag}.html"),
        seed=config.seed,
        render_cap=config.render_cap,
        title=f"validation overlay ({tag})",
    )
    counts = classification.counts()
    log.info(
        "classification (%s): %d green / %d red / %d blue; average path %.3g over %d covered",
        tag,
        counts["green"],
        counts["red"],
        counts["blue"],
        coverage.average_length or 0.0,
        len(coverage.paths),
    )
    return 0


def _analysis_tasks(args) -> set[str]:
    chosen = {
        name
        for name in ("metrics", "communities", "cohesion", "ppr", "katz", "hetesim", "similarity")
        if getattr(args, name)
    }
    return chosen or {"metrics", "communities", "cohesion", "ppr", "katz", "hetesim", "similarity"}


def cmd_analyze(config: RunConfig, args) -> dict:
    if not args.graph:
        raise ConfigError("analyze needs --graph")
    kg = load_kg(args.graph)
    anchor = config.anchor
    if anchor not in kg.nodes:
        raise ConfigError(f"anchor {anchor!r} is not in the graph; pass --anchor")
    tasks = _analysis_tasks(args)
    artifacts: dict = {"rankings": {}}
    log.info("analyzing %s (%d nodes, %d edges): %s",
             args.graph, kg.node_count, kg.edge_count, ", ".join(sorted(tasks)))

    if "metrics" in tasks:
        record = characterize(kg, anchor=anchor)
        coeff, pct = local_clustering_percentile(kg, anchor)
        summary = record.summary()
        summary["anchor"] = {
            "id": anchor,
            "local_clustering": coeff,
            "clustering_percentile": pct,
        }
        path = config.out("reports", "metrics.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(summary, fh, ensure_ascii=False, indent=1, sort_keys=True)
            fh.write("\n")
        degree_histogram_figure(record, config.out("reports", "degree_histogram.png"))
        clustering_distribution_figure(
            record, config.out("reports", "clustering_distribution.png"), highlight=anchor
        )
        artifacts["metrics"] = record
        log.info("diameter %d, %d center node(s)", record.diameter, len(record.center_nodes))

    if "communities" in tasks:
        partition = leiden(kg, resolution=args.resolution, seed=config.seed)
        _write_json(config.out("reports", "partition_leiden.json"), partition.to_dict())
        module = module_of(kg, partition, anchor)
        save_kg(module, config.out("graphs", "anchor_module.json"))
        export_gene_lists(kg, partition, os.path.join(config.output_dir, "reports", "gene_lists"))
        if module.node_count <= config.render_cap:
            emit_html_view(
                module,
                config.out("html", "anchor_module.html"),
                seed=config.seed,
                render_cap=config.render_cap,
                title="anchor community",
            )
        artifacts["partition"] = partition
        log.info("leiden: %d communities, Q=%.4f, anchor module %d nodes",
                 partition.community_count, partition.modularity, module.node_count)

    if "cohesion" in tasks:
        core = max_kcore_of(kg, anchor)
        cliques = max_cliques_containing(kg, anchor)
        save_kg(core.subgraph, config.out("graphs", "anchor_kcore.json"))
        _write_json(
            config.out("reports", "cohesion.json"),
            {
                "anchor": anchor,
                "core_index": core.k,
                "core_size": core.size,
                "max_clique_size": len(cliques[0]) if cliques else 0,
                "max_clique_count": len(cliques),
                "cliques": cliques,
            },
        )
        artifacts["cohesion"] = (core, cliques)
        log.info("k-core index %d (size %d); %d maximum clique(s) of size %d",
                 core.k, core.size, len(cliques), len(cliques[0]) if cliques else 0)

    def emit_ranking(metric, table):
        write_ranking_csv(config.out("rankings", f"{metric}.csv"), table, config.top_k)
        write_ranking_json(config.out("rankings", f"{metric}.json"), table)
        artifacts["rankings"][metric] = table

    if "ppr" in tasks:
        scores = personalized_pagerank(kg, anchor, config.centrality)
        emit_ranking("ppr", build_ranking(kg, scores, "ppr", exclude=(anchor,)))
    if "katz" in tasks:
        scores = personalized_katz(kg, anchor, config.centrality)
        emit_ranking("katz", build_ranking(kg, scores, "katz", exclude=(anchor,)))
    if "hetesim" in tasks:
        scores = hetesim(kg, anchor)
        emit_ranking("hetesim", build_ranking(kg, scores, "hetesim"))
    if "similarity" in tasks:
        emit_ranking("disease_similarity", entity_similarity(kg, "disease", anchor))
        reference_chemical = args.chemical_reference
        if reference_chemical:
            emit_ranking(
                "chemical_similarity",
                entity_similarity(kg, "chemical", reference_chemical),
            )
        else:
            log.info("no --chemical-reference given; skipping chemical similarity")

    if getattr(args, "novelty_classifications", None):
        merged = novelty_merge(
            _load_classification(args.novelty_classifications[0]),
            _load_classification(args.novelty_classifications[1]),
            kg,
        )
        partition = fast_greedy(merged)
        save_kg(merged, config.out("graphs", "novelty_merged.json"))
        _write_json(config.out("reports", "partition_novelty.json"), partition.to_dict())
        export_gene_lists(
            merged, partition, os.path.join(config.output_dir, "reports", "novelty_gene_lists")
        )
        if merged.node_count <= config.render_cap:
            emit_html_view(
                merged,
                config.out("html", "novelty_merged.html"),
                seed=config.seed,
                render_cap=config.render_cap,
                title="merged novelty network",
            )
        artifacts["novelty"] = (merged, partition)
        log.info(
            "novelty merge: giant component %d nodes, %d fast-greedy modules",
            merged.node_count,
            partition.community_count,
        )
    return artifacts


def cmd_report(config: RunConfig, args) -> int:
    artifacts = cmd_analyze(config, args)
    kg = load_kg(args.graph)
    rankings = artifacts.get("rankings", {})
    emit_figure_tables(
        os.path.join(config.output_dir, "rankings"),
        rankings,
        artifacts.get("metrics"),
        top_k=config.top_k,
    )
    for metric, table in rankings.items():
        if table.rows:
            ranking_figure(
                table, config.out("rankings", f"{metric}.png"), top_k=config.top_k
            )
    if kg.node_count <= config.render_cap:
        emit_html_view(
            kg,
            config.out("html", "network.html"),
            seed=config.seed,
            render_cap=config.render_cap,
            title="knowledge graph",
        )
    else:
        log.warning(
            "graph exceeds the render cap (%d > %d); emitting the anchor community view only",
            kg.node_count,
            config.render_cap,
        )
    log.info("report artifacts under %s", config.output_dir)
    return 0


def cmd_pipeline(config: RunConfig, args) -> int:
    cmd_build(config, args)
    extended = os.path.join(config.output_dir, "graphs", "extended_graph.json")
    highconf = os.path.join(config.output_dir, "graphs", "highconf_graph.json")
    graph_for_analysis = highconf if os.path.exists(highconf) else extended
    for snapshot in config.references:
        ns = argparse.Namespace(**vars(args))
        ns.graph = graph_for_analysis
        ns.reference = snapshot.path
        ns.kind = snapshot.kind
        cmd_validate(config, ns)
    ns = argparse.Namespace(**vars(args))
    ns.graph = graph_for_analysis
    cmd_report(config, ns)
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> Parser:
    parser = Parser(prog="litkg", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    def common(p):
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--out", help="output directory (default litkg_out)")
        p.add_argument("--anchor", help="anchor entity id")
        p.add_argument("--seed", type=int, help="random seed for layouts/communities")
        p.add_argument("--top-k", type=int, dest="top_k", help="rows per category in rankings")
        p.add_argument("--damping", type=float, help="personalized pagerank damping")

    p_ingest = sub.add_parser("ingest", help="two-stage literature retrieval")
    common(p_ingest)
    p_ingest.add_argument("--terms", nargs="+", help="initial seed terms")
    p_ingest.add_argument("--service-fixture", help="recorded responses for offline replay")

    p_build = sub.add_parser("build", help="construct extended and high-confidence networks")
    common(p_build)
    p_build.add_argument("--relations", help="raw relations JSON from ingest")
    p_build.add_argument("--entities", help="entity metadata JSON from ingest")

    def reference_flags(p):
        p.add_argument("--gene-map", help="gene symbol -> id alias TSV")
        p.add_argument("--drug-map", help="drug name -> id alias TSV")
        p.add_argument("--compound-map", help="KEGG compound -> id alias TSV")
        p.add_argument("--kegg-gene-map", help="KEGG gene -> id alias TSV")
        p.add_argument("--score-cutoff", type=float, default=0.0)

    p_validate = sub.add_parser("validate", help="compare a network against a reference export")
    common(p_validate)
    p_validate.add_argument("--graph", help="knowledge graph JSON")
    p_validate.add_argument("--reference", help="reference export (TSV or KGML)")
    p_validate.add_argument(
        "--kind", choices=("gene_gene", "drug_gene", "pathway"), help="reference kind"
    )
    reference_flags(p_validate)

    def analysis_flags(p):
        common(p)
        p.add_argument("--graph", help="knowledge graph JSON")
        for flag in ("metrics", "communities", "cohesion", "ppr", "katz", "hetesim", "similarity"):
            p.add_argument(f"--{flag}", action="store_true")
        p.add_argument("--resolution", type=float, default=1.0)
        p.add_argument("--chemical-reference", help="reference compound id for chemical similarity")
        p.add_argument(
            "--novelty-classifications",
            nargs=2,
            metavar=("CLASS_A", "CLASS_B"),
            help="two classification JSONs to merge into the novelty network",
        )

    p_analyze = sub.add_parser("analyze", help="knowledge-extraction suite")
    analysis_flags(p_analyze)

    p_report = sub.add_parser("report", help="tables, figures and HTML views")
    analysis_flags(p_report)

    p_pipeline = sub.add_parser("pipeline", help="build, validate, analyze, report")
    analysis_flags(p_pipeline)
    reference_flags(p_pipeline)
    p_pipeline.add_argument("--relations", help="raw relations JSON")
    p_pipeline.add_argument("--entities", help="entity metadata JSON")

    return parser


def main(argv=None) -> int:
    logging.basicConfig(
        stream=sys.stderr,
        level=os.environ.get("LITKG_LOG_LEVEL", "INFO"),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required")
        overrides = {
            "output_dir": getattr(args, "out", None),
            "anchor": getattr(args, "anchor", None),
            "seed": getattr(args, "seed", None),
            "top_k": getattr(args, "top_k", None),
            "damping": getattr(args, "damping", None),
        }
        config = load_config(getattr(args, "config", None), overrides=overrides)
        handler = {
            "ingest": cmd_ingest,
            "build": cmd_build,
            "validate": cmd_validate,
            "analyze": cmd_analyze,
            "report": cmd_report,
            "pipeline": cmd_pipeline,
        }[args.command]
        result = handler(config, args)
        return result if isinstance(result, int) else 0
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"litkg: error: {exc}", file=sys.stderr)
        return 1
    except LitkgError as exc:
        log.error("%s", exc)
        return 1
    except Exception:  # noqa: BLE001 - last-resort boundary
        log.exception("internal error")
        return 2


if __name__ == "__main__":
    sys.exit(main())
