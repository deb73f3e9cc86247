"""SPARQL-over-HTTP acquisition with a deterministic on-disk cache.

The pipeline: page through a SELECT for the concept's entities, take a
seeded sample, then CONSTRUCT each entity's outgoing triples, writing
every result canonically into the cache. Entity neighborhoods come from
an explicit outgoing-only CONSTRUCT rather than DESCRIBE because
DESCRIBE semantics vary by server.

Sampling is client-side (shuffle and take) after a bounded crawl; an
ORDER BY RAND() server-side sample is not portable. When the crawl
bound truncates the population the sample is biased toward the
endpoint's natural order; the bound is recorded in the manifest.

A warm cache plus the run manifest make re-runs fully offline: the
manifest pins the sampled entity list, each entity file is reused, and
no request is made.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from random import Random
from typing import Sequence

import requests

from .errors import AcquisitionFailure, EndpointError
from .graph import Graph
from .ntriples import parse_ntriples, serialize_ntriples
from .terms import RDF_TYPE, IRI, Term, Triple

logger = logging.getLogger(__name__)

SELECT_ACCEPT = "application/sparql-results+json"
CONSTRUCT_ACCEPT = "application/n-triples"

# Queries longer than this go over POST instead of a GET query string.
_GET_LIMIT = 2000


@dataclass(frozen=True)
class EndpointConfig:
    url: str
    page_size: int = 200
    max_entities: int = 1000
    timeout: float = 30.0
    max_retries: int = 3
    parallelism: int = 1
    politeness_delay: float = 0.0
    crawl_factor: int = 10
    retry_backoff: float = 0.5

    def __post_init__(self) -> None:
        if self.page_size < 1 or self.max_entities < 1:
            raise ValueError("page_size and max_entities must be positive")
        if self.page_size > self.max_entities:
            raise ValueError("page_size must not exceed max_entities")
        if self.parallelism < 1:
            raise ValueError("parallelism must be at least 1")
        if self.max_retries < 0 or self.crawl_factor < 1:
            raise ValueError("max_retries >= 0 and crawl_factor >= 1 required")

    @property
    def crawl_bound(self) -> int:
        return self.crawl_factor * self.max_entities


class _Throttle:
    """Spaces out request starts: at least `interval` seconds apart."""

    def __init__(self, interval: float) -> None:
        self.interval = interval
        self._lock = threading.Lock()
        self._next_start = 0.0

    def wait(self) -> None:
        if self.interval <= 0:
            return
        while True:
            with self._lock:
                now = time.monotonic()
                if now >= self._next_start:
                    self._next_start = now + self.interval
                    return
                pause = self._next_start - now
            time.sleep(pause)


class SparqlClient:
    """Minimal SPARQL protocol client: SELECT and CONSTRUCT with retries."""

    def __init__(self, config: EndpointConfig) -> None:
        self.config = config
        self.request_count = 0
        self._throttle = _Throttle(config.politeness_delay)
        self._session = requests.Session()
        self._lock = threading.Lock()

    def close(self) -> None:
        self._session.close()

    def _request(self, query: str, accept: str) -> requests.Response:
        cfg = self.config
        last_error: Exception | None = None
        for attempt in range(cfg.max_retries + 1):
            if attempt:
                pause = cfg.retry_backoff * (2 ** (attempt - 1))
                logger.warning(
                    "retrying %s (attempt %d/%d) after error: %s",
                    cfg.url, attempt, cfg.max_retries, last_error,
                )
                if pause > 0:
                    time.sleep(pause)
            self._throttle.wait()
            with self._lock:
                self.request_count += 1
            try:
                headers = {"Accept": accept}
                if len(query) > _GET_LIMIT:
                    resp = self._session.post(
                        cfg.url,
                        data={"query": query},
                        headers=headers,
                        timeout=cfg.timeout,
                    )
                else:
                    resp = self._session.get(
                        cfg.url,
                        params={"query": query},
                        headers=headers,
                        timeout=cfg.timeout,
                    )
                resp.raise_for_status()
                return resp
            except requests.RequestException as exc:
                last_error = exc
        raise EndpointError(
            f"{cfg.url} failed after {cfg.max_retries + 1} attempts: {last_error}"
        )

    def select(self, query: str) -> list[dict]:
        resp = self._request(query, SELECT_ACCEPT)
        try:
            return resp.json()["results"]["bindings"]
        except (ValueError, KeyError) as exc:
            raise EndpointError(f"{self.config.url}: malformed SELECT results: {exc}")

    def construct(self, query: str) -> bytes:
        return self._request(query, CONSTRUCT_ACCEPT).content


def list_entities(
    config: EndpointConfig, concept: IRI, client: SparqlClient | None = None
) -> list[IRI]:
    """Crawl entity IRIs of the concept via paged SELECT, up to the crawl bound.

    Order is the endpoint's own, kept verbatim so a seeded sample is
    reproducible against the recorded list. Non-IRI bindings are
    skipped (and counted in the log).
    """
    own = client is None
    if client is None:
        client = SparqlClient(config)
    skipped = 0
    out: list[IRI] = []
    try:
        offset = 0
        while len(out) < config.crawl_bound:
            limit = min(config.page_size, config.crawl_bound - len(out))
            query = (
                f"SELECT ?e WHERE {{ ?e <{RDF_TYPE.value}> <{concept.value}> }} "
                f"LIMIT {limit} OFFSET {offset}"
            )
            bindings = client.select(query)
            for row in bindings:
                binding = row.get("e", {})
                if binding.get("type") == "uri":
                    try:
                        out.append(IRI(binding["value"]))
                    except ValueError:
                        skipped += 1
                else:
                    skipped += 1
            offset += len(bindings)
            if len(bindings) < limit:
                break
    finally:
        if own:
            client.close()
    if skipped:
        logger.info("%s: skipped %d non-IRI bindings", config.url, skipped)
    return out


def sample_entities(candidates: Sequence[Term], n: int, seed: int) -> list[Term]:
    """Uniform sample without replacement; deterministic for (seed, input order)."""
    items = list(candidates)
    Random(seed).shuffle(items)
    return items[: max(0, n)]


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


@dataclass(frozen=True)
class CacheEntry:
    endpoint_url: str
    concept: IRI
    entity: Term
    path: Path
    fetched_at: float


class EntityCache:
    """Per-entity canonical N-Triples files under content-addressed paths."""

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)

    def path_for(self, endpoint_url: str, concept: IRI, entity: Term) -> Path:
        return (
            self.root
            / _digest(endpoint_url)
            / _digest(concept.value)
            / f"{_digest(str(entity))}.nt"
        )

    def entry_for(self, endpoint_url: str, concept: IRI, entity: Term) -> CacheEntry | None:
        path = self.path_for(endpoint_url, concept, entity)
        if not path.exists():
            return None
        return CacheEntry(endpoint_url, concept, entity, path, path.stat().st_mtime)

    def load(self, endpoint_url: str, concept: IRI, entity: Term) -> Graph | None:
        path = self.path_for(endpoint_url, concept, entity)
        if not path.exists():
            return None
        return parse_ntriples(path.read_bytes()).graph

    def store(self, endpoint_url: str, concept: IRI, entity: Term, graph: Graph) -> CacheEntry:
        path = self.path_for(endpoint_url, concept, entity)
        path.parent.mkdir(parents=True, exist_ok=True)
        data = serialize_ntriples(graph)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as handle:
                handle.write(data)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return CacheEntry(endpoint_url, concept, entity, path, path.stat().st_mtime)

    def manifest_path(self, endpoint_url: str, concept: IRI) -> Path:
        return self.root / _digest(endpoint_url) / _digest(concept.value) / "run.json"


def fetch_entity(
    config: EndpointConfig,
    entity: IRI,
    concept: IRI,
    cache: EntityCache,
    mode: str = "prefer",
    client: SparqlClient | None = None,
) -> Graph:
    """The entity's outgoing triples, from cache when allowed, else fetched.

    Modes: "prefer" uses the cache and only fetches on a miss;
    "refresh" always fetches; "offline" never touches the network and
    fails on a miss.
    """
    if mode not in ("prefer", "refresh", "offline"):
        raise ValueError(f"unknown cache mode: {mode!r}")
    if mode != "refresh":
        cached = cache.load(config.url, concept, entity)
        if cached is not None:
            return cached
        if mode == "offline":
            raise EndpointError(f"cache miss for {entity} in offline mode")
    own = client is None
    if client is None:
        client = SparqlClient(config)
    try:
        query = (
            f"CONSTRUCT {{ <{entity.value}> ?p ?o }} "
            f"WHERE {{ <{entity.value}> ?p ?o }}"
        )
        payload = client.construct(query)
    finally:
        if own:
            client.close()
    result = parse_ntriples(payload)
    for issue in result.issues:
        logger.warning("%s: discarded line in CONSTRUCT result: %s", entity, issue)
    outgoing = Graph(t for t in result.graph if t.subject == entity)
    cache.store(config.url, concept, entity, outgoing)
    return outgoing


@dataclass
class EndpointRun:
    """Outcome of acquiring one concept from one endpoint."""

    endpoint_url: str
    concept: IRI
    seed: int
    entities: list[IRI]
    failures: list[str] = field(default_factory=list)
    requests_made: int = 0
    cache_hits: int = 0
    graph: Graph = field(default_factory=Graph)

    def manifest_dict(self) -> dict:
        return {
            "endpoint": self.endpoint_url,
            "concept": self.concept.value,
            "seed": self.seed,
            "entities": [e.value for e in self.entities],
            "failures": sorted(self.failures),
            "requests_made": self.requests_made,
            "cache_hits": self.cache_hits,
        }


def _reusable_manifest(
    cache: EntityCache, config: EndpointConfig, concept: IRI, seed: int
) -> list[IRI] | None:
    path = cache.manifest_path(config.url, concept)
    if not path.exists():
        return None
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except ValueError:
        return None
    if (
        data.get("endpoint") == config.url
        and data.get("concept") == concept.value
        and data.get("seed") == seed
    ):
        return [IRI(e) for e in data["entities"]]
    return None


def acquire_endpoint(
    config: EndpointConfig,
    concept: IRI,
    cache: EntityCache,
    seed: int = 0,
    mode: str = "prefer",
) -> EndpointRun:
    """List, sample, and fetch one endpoint's entities; write the manifest.

    Per-entity fetch failures are recorded and the run continues; a
    listing failure aborts the endpoint. With a warm cache and a
    matching manifest nothing hits the network at all.
    """
    client = SparqlClient(config)
    run = EndpointRun(config.url, concept, seed, [])
    try:
        chosen: list[IRI] | None = None
        if mode != "refresh":
            chosen = _reusable_manifest(cache, config, concept, seed)
        if chosen is None:
            candidates = list_entities(config, concept, client=client)
            chosen = [
                e for e in sample_entities(candidates, config.max_entities, seed)
                if isinstance(e, IRI)
            ]
        run.entities = chosen

        graphs: dict[IRI, Graph] = {}

        def work(entity: IRI) -> None:
            try:
                before = client.request_count
                got = fetch_entity(config, entity, concept, cache, mode=mode, client=client)
                graphs[entity] = got
                if client.request_count == before:
                    run.cache_hits += 1
            except EndpointError as exc:
                run.failures.append(entity.value)
                logger.warning("fetch failed for %s: %s", entity, exc)

        if config.parallelism > 1:
            with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
                list(pool.map(work, chosen))
        else:
            for entity in chosen:
                work(entity)

        triples: set[Triple] = set()
        for entity, g in graphs.items():
            triples.update(g.triples)
            # The entity was listed by a type query, so assert membership
            # even when the CONSTRUCT result happens to omit it.
            triples.add(Triple(entity, RDF_TYPE, concept))
        run.graph = Graph(triples)
        run.requests_made = client.request_count

        manifest = cache.manifest_path(config.url, concept)
        manifest.parent.mkdir(parents=True, exist_ok=True)
        manifest.write_text(
            json.dumps(run.manifest_dict(), indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
        return run
    finally:
        client.close()


def run_acquisition(
    endpoints: Sequence[EndpointConfig],
    concept: IRI,
    cache_dir: str | Path,
    seed: int = 0,
    mode: str = "prefer",
) -> list[EndpointRun]:
    """Acquire the concept from every endpoint; fail only if all of them do."""
    cache = EntityCache(cache_dir)
    runs: list[EndpointRun] = []
    errors: list[str] = []
    for config in endpoints:
        try:
            runs.append(acquire_endpoint(config, concept, cache, seed=seed, mode=mode))
        except EndpointError as exc:
            errors.append(str(exc))
            logger.error("endpoint failed: %s", exc)
    if endpoints and not runs:
        raise AcquisitionFailure("; ".join(errors))
    return runs
