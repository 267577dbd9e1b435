"""Run configuration: one JSON file, overridable by LITKG_* environment
variables and CLI flags. Paths named in the config must exist at load time;
pinned reference snapshots are checksum-verified before validation and any
drift is carried into the reports instead of aborting the run.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from importlib import resources

from .analyze.centrality import CentralityParams
from .build import FilterPolicy
from .errors import ConfigError
from .ingest import RetrievalPolicy

# Anchor entity id (namespaced, here the disease the default corpus centers on).
DEFAULT_ANCHOR = "MESH:D000474"

ENV_PREFIX = "LITKG_"


def packaged_blocklist_path() -> str:
    return str(resources.files("litkg").joinpath("resources/generic_blocklist.txt"))


def read_blocklist(path) -> frozenset[str]:
    names = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                names.append(line)
    return frozenset(names)


def sha256_of(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class ReferenceSnapshot:
    path: str
    kind: str  # gene_gene | drug_gene | pathway
    sha256: str | None = None

    def drift(self) -> str | None:
        """None when the pinned checksum matches; a description otherwise."""
        if not self.sha256:
            return None
        actual = sha256_of(self.path)
        if actual == self.sha256.lower():
            return None
        return (
            f"snapshot {self.path} drifted: pinned {self.sha256[:12]}..., "
            f"actual {actual[:12]}..."
        )


@dataclass
class RunConfig:
    literature_base_url: str = ""
    annotation_base_url: str = ""
    api_key: str | None = None
    rate_per_second: float = 3.0
    cache_dir: str = ".litkg_cache"
    output_dir: str = "litkg_out"
    anchor: str = DEFAULT_ANCHOR
    seed: int = 0
    top_k: int = 20
    render_cap: int = 5000
    seed_terms: list[str] = field(default_factory=list)
    raw_relations_path: str | None = None
    entities_path: str | None = None
    blocklist_path: str | None = None
    alias_tables: dict[str, str] = field(default_factory=dict)
    references: list[ReferenceSnapshot] = field(default_factory=list)
    retrieval: RetrievalPolicy = field(default_factory=RetrievalPolicy)
    filters: FilterPolicy = field(default_factory=FilterPolicy)
    centrality: CentralityParams = field(default_factory=CentralityParams)

    def blocklist(self) -> frozenset[str]:
        path = self.blocklist_path or packaged_blocklist_path()
        return read_blocklist(path)

    def out(self, *parts) -> str:
        path = os.path.join(self.output_dir, *parts)
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        return path

    def verify_reference_checksums(self) -> list[str]:
        return [d for snap in self.references if (d := snap.drift())]


def _apply_env(values: dict, env) -> dict:
    mapping = {
        "LITERATURE_BASE_URL": ("literature_base_url", str),
        "ANNOTATION_BASE_URL": ("annotation_base_url", str),
        "API_KEY": ("api_key", str),
        "RATE_PER_SECOND": ("rate_per_second", float),
        "CACHE_DIR": ("cache_dir", str),
        "OUTPUT_DIR": ("output_dir", str),
        "ANCHOR": ("anchor", str),
        "SEED": ("seed", int),
        "TOP_K": ("top_k", int),
        "RENDER_CAP": ("render_cap", int),
        "DAMPING": ("damping", float),
        "BLOCKLIST_PATH": ("blocklist_path", str),
    }
    for suffix, (key, cast) in mapping.items():
        raw = env.get(ENV_PREFIX + suffix)
        if raw is None:
            continue
        try:
            values[key] = cast(raw)
        except ValueError as exc:
            raise ConfigError(f"bad {ENV_PREFIX}{suffix}={raw!r}: {exc}") from exc
    return values


def load_config(path=None, env=None, overrides: dict | None = None) -> RunConfig:
    """Precedence: CLI overrides > environment > config file > defaults."""
    env = os.environ if env is None else env
    values: dict = {}
    raw: dict = {}
    if path is not None:
        if not os.path.exists(path):
            raise ConfigError(f"config file not found: {path}")
        try:
            with open(path, encoding="utf-8") as fh:
                raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc

    services = raw.get("services", {})
    for key, source in [
        ("literature_base_url", services.get("literature_base_url")),
        ("annotation_base_url", services.get("annotation_base_url")),
        ("api_key", services.get("api_key")),
        ("rate_per_second", services.get("rate_per_second")),
    ]:
        if source is not None:
            values[key] = source
    for key in (
        "cache_dir",
        "output_dir",
        "anchor",
        "seed",
        "top_k",
        "render_cap",
        "seed_terms",
        "raw_relations_path",
        "entities_path",
        "blocklist_path",
    ):
        if key in raw:
            values[key] = raw[key]
    if "alias_tables" in raw:
        values["alias_tables"] = dict(raw["alias_tables"])
    if "references" in raw:
        values["references"] = [
            ReferenceSnapshot(
                path=r["path"], kind=r["kind"], sha256=r.get("sha256")
            )
            for r in raw["references"]
        ]

    _apply_env(values, env)
    damping = values.pop("damping", None)
    if overrides:
        damping = overrides.pop("damping", damping)
        values.update({k: v for k, v in overrides.items() if v is not None})

    retrieval_kwargs = dict(raw.get("retrieval", {}))
    if isinstance(retrieval_kwargs.get("reference_date"), str):
        import datetime as dt

        retrieval_kwargs["reference_date"] = dt.date.fromisoformat(
            retrieval_kwargs["reference_date"]
        )
    filter_kwargs = dict(raw.get("filters", {}))
    if "generic_blocklist" in filter_kwargs:
        filter_kwargs["generic_blocklist"] = frozenset(filter_kwargs["generic_blocklist"])
    centrality_kwargs = dict(raw.get("centrality", {}))
    if damping is not None:
        centrality_kwargs["damping"] = damping

    config = RunConfig(
        retrieval=RetrievalPolicy(**retrieval_kwargs),
        filters=FilterPolicy(**filter_kwargs),
        centrality=CentralityParams(**centrality_kwargs),
        **values,
    )

    missing = []
    for label, candidate in [
        ("blocklist_path", config.blocklist_path),
        ("raw_relations_path", config.raw_relations_path),
        ("entities_path", config.entities_path),
        *((f"alias_tables.{k}", v) for k, v in config.alias_tables.items()),
        *((f"references[{i}].path", s.path) for i, s in enumerate(config.references)),
    ]:
        if candidate and not os.path.exists(candidate):
            missing.append(f"{label}: {candidate}")
    if missing:
        raise ConfigError("configured path(s) do not exist: " + "; ".join(missing))
    if config.filters.generic_blocklist == frozenset():
        config.filters = FilterPolicy(
            hi_conf_threshold=config.filters.hi_conf_threshold,
            lo_conf_threshold=config.filters.lo_conf_threshold,
            lo_conf_min_pubs=config.filters.lo_conf_min_pubs,
            drop_kinds=config.filters.drop_kinds,
            generic_blocklist=config.blocklist(),
            generic_degree_floor=config.filters.generic_degree_floor,
        )
    return config
