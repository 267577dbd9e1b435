"""Clients for the literature-search and annotation services, plus the
two-stage seed-expansion retrieval procedure.

Both clients share the same plumbing: a pluggable transport (url -> bytes),
an on-disk response cache keyed by request hash, token-bucket rate limiting,
and bounded retries with exponential backoff. Tests inject a fake transport;
a warm cache answers repeat requests without touching the network at all.

Wire formats (JSON over GET):

    {base}/search?term=...&retmax=N[&mindate=YYYY/MM/DD]
        -> {"count": <total hits>, "ids": ["...", ...]}
    {base}/annotations?ids=id1,id2,...
        -> {"articles": [{"id": ..., "entities": [...], "relations": [...]}]}

where an entity is {"id", "name", "category", "aliases"?, "parent_gene"?}
and a relation is {"a", "a_category", "a_name", "b", "b_category", "b_name",
"kind", "confidence"}.
"""

from __future__ import annotations

import datetime as dt
import hashlib
import json
import os
import tempfile
import time
import urllib.parse
import urllib.request
from dataclasses import dataclass, field

from .errors import IngestError, InvalidQueryError
from .model import CATEGORIES, EntityNode

# Publication-type filter appended to every literature query. Primary
# research only: reviews, editorials, letters and comments are excluded.
QUERY_FILTER_TEMPLATE = (
    "{term} AND (Journal Article[pt] OR Clinical Trial[pt] OR Case Reports[pt] "
    "OR Randomized Controlled Trial[pt] OR Observational Study[pt] "
    "OR Comparative Study[pt] OR Evaluation Study[pt]) "
    "NOT (Review[pt] OR Systematic Review[pt] OR Meta-Analysis[pt] "
    "OR Editorial[pt] OR Letter[pt] OR Comment[pt])"
)

# Generic terms never admitted into an expanded seed set.
DEFAULT_SEED_EXCLUSIONS = frozenset({"Death", "Disease"})


@dataclass
class RetrievalPolicy:
    max_articles: int = 2000
    recency_window_years: int = 5
    filter_template: str = QUERY_FILTER_TEMPLATE
    # Cap cutoff date is computed against this; None means today.
    reference_date: dt.date | None = None

    def __post_init__(self):
        if self.max_articles <= 0:
            raise InvalidQueryError("max_articles must be positive")

    def window_start(self) -> dt.date:
        ref = self.reference_date or dt.date.today()
        try:
            return ref.replace(year=ref.year - self.recency_window_years)
        except ValueError:  # Feb 29
            return ref.replace(year=ref.year - self.recency_window_years, day=28)


@dataclass
class SeedSet:
    terms: tuple[str, ...]
    stage: str = "initial"  # initial | expanded

    def __post_init__(self):
        if self.stage not in ("initial", "expanded"):
            raise InvalidQueryError(f"unknown seed stage {self.stage!r}")
        deduped = list(dict.fromkeys(self.terms))
        if deduped != list(self.terms):
            raise InvalidQueryError("seed terms contain duplicates")
        self.terms = tuple(deduped)


@dataclass(frozen=True)
class RawRelation:
    """One binary relation as reported by the annotation service."""

    a_id: str
    a_category: str
    a_name: str
    b_id: str
    b_category: str
    b_name: str
    kind: str
    article_id: str
    confidence: float

    @property
    def pair(self) -> tuple[str, str]:
        return (self.a_id, self.b_id) if self.a_id < self.b_id else (self.b_id, self.a_id)


def build_query(term: str, policy: RetrievalPolicy | None = None) -> str:
    if not term:
        raise InvalidQueryError("query term must be non-empty")
    template = policy.filter_template if policy else QUERY_FILTER_TEMPLATE
    return template.format(term=term)


# -- transport plumbing ----------------------------------------------------


def urllib_transport(timeout: float = 30.0):
    def fetch(url: str) -> bytes:
        with urllib.request.urlopen(url, timeout=timeout) as resp:
            return resp.read()

    return fetch


class DiskCache:
    """One file per request hash; atomic create-then-rename writes make the
    cache safe for concurrent writers."""

    def __init__(self, directory):
        self.directory = str(directory)
        os.makedirs(self.directory, exist_ok=True)

    def _path(self, key: str) -> str:
        digest = hashlib.sha256(key.encode("utf-8")).hexdigest()
        return os.path.join(self.directory, digest + ".response")

    def get(self, key: str) -> bytes | None:
        try:
            with open(self._path(key), "rb") as fh:
                return fh.read()
        except FileNotFoundError:
            return None

    def put(self, key: str, payload: bytes) -> None:
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(payload)
            os.replace(tmp, self._path(key))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


class TokenBucket:
    def __init__(self, rate_per_second: float = 3.0, burst: int | None = None,
                 clock=time.monotonic, sleeper=time.sleep):
        self.rate = float(rate_per_second)
        self.capacity = float(burst if burst is not None else max(1, int(rate_per_second)))
        self.tokens = self.capacity
        self.clock = clock
        self.sleeper = sleeper
        self._last = clock()

    def acquire(self):
        while True:
            now = self.clock()
            self.tokens = min(self.capacity, self.tokens + (now - self._last) * self.rate)
            self._last = now
            if self.tokens >= 1.0:
                self.tokens -= 1.0
                return
            self.sleeper((1.0 - self.tokens) / self.rate)


class ServiceClient:
    """Cached, rate-limited, retrying GET client over a pluggable transport."""

    def __init__(self, base_url: str, cache_dir=None, transport=None,
                 rate_per_second: float = 3.0, attempts: int = 3,
                 backoff: float = 0.5, sleeper=time.sleep, api_key: str | None = None):
        self.base_url = base_url.rstrip("/")
        self.cache = DiskCache(cache_dir) if cache_dir else None
        self.transport = transport or urllib_transport()
        self.bucket = TokenBucket(rate_per_second, sleeper=sleeper)
        self.attempts = max(1, attempts)
        self.backoff = backoff
        self.sleeper = sleeper
        self.api_key = api_key
        self.network_calls = 0

    def url(self, path: str, params: dict) -> str:
        if self.api_key:
            params = {**params, "api_key": self.api_key}
        query = urllib.parse.urlencode(sorted(params.items()))
        return f"{self.base_url}/{path}?{query}"

    def get_json(self, path: str, params: dict) -> dict:
        url = self.url(path, params)
        if self.cache is not None:
            hit = self.cache.get(url)
            if hit is not None:
                return self._parse(url, hit)
        payload = self._fetch_with_retries(url)
        if self.cache is not None:
            self.cache.put(url, payload)
        return self._parse(url, payload)

    def _fetch_with_retries(self, url: str) -> bytes:
        last = None
        for attempt in range(1, self.attempts + 1):
            self.bucket.acquire()
            try:
                self.network_calls += 1
                return self.transport(url)
            except Exception as exc:  # noqa: BLE001 - transport failures vary by backend
                last = exc
                if attempt < self.attempts:
                    self.sleeper(self.backoff * 2 ** (attempt - 1))
        raise IngestError(
            f"request failed after {self.attempts} attempt(s): {url} ({last})",
            retryable=True,
            attempts=self.attempts,
        )

    @staticmethod
    def _parse(url: str, payload: bytes) -> dict:
        try:
            return json.loads(payload.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise IngestError(f"malformed response from {url}: {exc}") from exc


class LiteratureClient(ServiceClient):
    def search(self, query: str, retmax: int, mindate: dt.date | None = None) -> dict:
        params = {"term": query, "retmax": retmax}
        if mindate is not None:
            params["mindate"] = mindate.strftime("%Y/%m/%d")
        result = self.get_json("search", params)
        if "count" not in result or "ids" not in result:
            raise IngestError("search response missing 'count'/'ids'")
        return result


class AnnotationClient(ServiceClient):
    batch_size = 100

    def annotate(self, article_ids: list[str]) -> dict:
        result = self.get_json("annotations", {"ids": ",".join(article_ids)})
        if "articles" not in result:
            raise IngestError("annotation response missing 'articles'")
        return result


# -- retrieval operations ---------------------------------------------------


def fetch_article_ids(term: str, policy: RetrievalPolicy, client: LiteratureClient) -> list[str]:
    """Article ids for one term, capped per policy.

    Under the cap every hit is returned; at or over it, the query is re-run
    restricted to the recency window and truncated to max_articles. Order is
    the service's default sort; duplicates keep their first position.
    """
    query = build_query(term, policy)
    first = client.search(query, retmax=policy.max_articles)
    if int(first["count"]) < policy.max_articles:
        ids = first["ids"]
    else:
        recent = client.search(query, retmax=policy.max_articles, mindate=policy.window_start())
        ids = recent["ids"]
    deduped = list(dict.fromkeys(str(i) for i in ids))
    return deduped[: policy.max_articles]


@dataclass
class AnnotationResult:
    entities: list[EntityNode] = field(default_factory=list)
    relations: list[RawRelation] = field(default_factory=list)
    errors: list[dict] = field(default_factory=list)
    # annotation services also tag species, cell lines etc.; those stay out
    # of the graph's vocabulary and are only counted here
    out_of_scope: dict[str, int] = field(default_factory=dict)

    def entity_index(self) -> dict[str, EntityNode]:
        return {e.id: e for e in self.entities}


def fetch_annotations(article_ids: list[str], client: AnnotationClient) -> AnnotationResult:
    """Entities and relations for a set of articles, fetched in batches.

    Entities are deduplicated by id (aliases merged), relations by
    (pair, kind, article_id). A failing batch is recorded and skipped;
    successful batches are always retained.
    """
    if not article_ids:
        raise InvalidQueryError("article id list must be non-empty")
    result = AnnotationResult()
    seen_entities: dict[str, EntityNode] = {}
    seen_relations: set[tuple] = set()
    ids = list(dict.fromkeys(article_ids))
    for start in range(0, len(ids), client.batch_size):
        batch = ids[start : start + client.batch_size]
        try:
            payload = client.annotate(batch)
        except IngestError as exc:
            result.errors.append(
                {"articles": batch, "error": str(exc), "retryable": exc.retryable}
            )
            continue
        for article in payload["articles"]:
            article_id = str(article["id"])
            for raw in article.get("entities", []):
                if raw.get("category") not in CATEGORIES:
                    category = str(raw.get("category"))
                    result.out_of_scope[category] = result.out_of_scope.get(category, 0) + 1
                    continue
                node = EntityNode(
                    id=str(raw["id"]),
                    name=str(raw.get("name", raw["id"])),
                    category=raw["category"],
                    aliases={str(a) for a in raw.get("aliases", [])},
                    parent_gene=raw.get("parent_gene"),
                )
                known = seen_entities.get(node.id)
                if known is None:
                    seen_entities[node.id] = node
                    result.entities.append(node)
                else:
                    known.aliases |= node.aliases
                    if known.parent_gene is None:
                        known.parent_gene = node.parent_gene
            for raw in article.get("relations", []):
                if raw.get("a_category") not in CATEGORIES or raw.get("b_category") not in CATEGORIES:
                    pair_cats = f"{raw.get('a_category')}/{raw.get('b_category')}"
                    result.out_of_scope[pair_cats] = result.out_of_scope.get(pair_cats, 0) + 1
                    continue
                rel = RawRelation(
                    a_id=str(raw["a"]),
                    a_category=raw["a_category"],
                    a_name=str(raw.get("a_name", raw["a"])),
                    b_id=str(raw["b"]),
                    b_category=raw["b_category"],
                    b_name=str(raw.get("b_name", raw["b"])),
                    kind=raw["kind"],
                    article_id=article_id,
                    confidence=float(raw["confidence"]),
                )
                key = (rel.pair, rel.kind, rel.article_id)
                if key in seen_relations:
                    continue
                seen_relations.add(key)
                result.relations.append(rel)
    return result


def expand_seeds(
    relations: list[RawRelation],
    anchors: set[str],
    threshold: float = 0.7,
    exclusions: frozenset[str] | set[str] = DEFAULT_SEED_EXCLUSIONS,
) -> SeedSet:
    """Entities directly related to an anchor whose mean confidence over all
    their anchor relations exceeds the threshold, minus anchors and excluded
    generic names. An empty result is valid."""
    if not anchors:
        raise InvalidQueryError("anchor set must be non-empty")
    if not (0.0 < threshold < 1.0):
        raise InvalidQueryError("threshold must lie in (0, 1)")
    excluded = {name.casefold() for name in exclusions}
    confidences: dict[str, list[float]] = {}
    names: dict[str, str] = {}
    for rel in relations:
        for this_id, this_name, other_id in (
            (rel.a_id, rel.a_name, rel.b_id),
            (rel.b_id, rel.b_name, rel.a_id),
        ):
            if other_id in anchors and this_id not in anchors:
                confidences.setdefault(this_id, []).append(rel.confidence)
                names.setdefault(this_id, this_name)
    terms = sorted(
        names[eid]
        for eid, confs in confidences.items()
        if sum(confs) / len(confs) > threshold and names[eid].casefold() not in excluded
    )
    return SeedSet(terms=tuple(dict.fromkeys(terms)), stage="expanded")
