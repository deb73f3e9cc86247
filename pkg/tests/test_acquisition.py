"""SPARQL client, sampling, cache, and the acquisition driver."""

from __future__ import annotations

import json
import logging
import time

import pytest

from semrich import AcquisitionFailure, EndpointError, Graph, IRI
from semrich.acquisition import (
    EndpointConfig,
    EntityCache,
    SparqlClient,
    _Throttle,
    acquire_endpoint,
    fetch_entity,
    list_entities,
    run_acquisition,
    sample_entities,
)
from conftest import CONCEPT
from mock_endpoint import MockState, serve


def iris(n: int, prefix: str = "http://data.example/e") -> list[str]:
    return [f"{prefix}{i}" for i in range(n)]


def config(url: str, **overrides) -> EndpointConfig:
    defaults = dict(
        url=url, page_size=10, max_entities=100, timeout=5.0,
        max_retries=3, retry_backoff=0.0,
    )
    defaults.update(overrides)
    return EndpointConfig(**defaults)


class TestConfig:
    def test_invariants_enforced(self):
        with pytest.raises(ValueError):
            EndpointConfig(url="http://x", page_size=0)
        with pytest.raises(ValueError):
            EndpointConfig(url="http://x", page_size=50, max_entities=10)
        with pytest.raises(ValueError):
            EndpointConfig(url="http://x", parallelism=0)


class TestListEntities:
    def test_empty_endpoint(self):
        state = MockState()
        with serve(state) as url:
            assert list_entities(config(url), CONCEPT) == []

    def test_pagination_request_count(self):
        state = MockState()
        state.add_entities(iris(25))
        with serve(state) as url:
            got = list_entities(config(url), CONCEPT)
        assert [i.value for i in got] == iris(25)
        assert state.request_count == 3  # 10 + 10 + 5

    def test_crawl_bound_respected(self):
        state = MockState()
        state.add_entities(iris(500))
        with serve(state) as url:
            got = list_entities(config(url, max_entities=10, crawl_factor=3), CONCEPT)
        assert len(got) == 30

    def test_non_iri_bindings_skipped(self):
        state = MockState()
        state.add_entities(iris(3))
        state.bindings.insert(1, {"type": "literal", "value": "not an entity"})
        with serve(state) as url:
            got = list_entities(config(url), CONCEPT)
        assert [i.value for i in got] == iris(3)

    def test_retry_then_success(self, caplog):
        state = MockState()
        state.add_entities(iris(5))
        state.fail_next = 2
        with serve(state) as url, caplog.at_level(logging.WARNING, logger="semrich.acquisition"):
            got = list_entities(config(url), CONCEPT)
        assert len(got) == 5
        retries = [r for r in caplog.records if "retrying" in r.message]
        assert len(retries) == 2

    def test_failure_after_retries(self):
        state = MockState()
        state.fail_next = 10
        with serve(state) as url:
            with pytest.raises(EndpointError):
                list_entities(config(url, max_retries=2), CONCEPT)
        assert state.request_count == 3  # initial try + 2 retries


class TestSampling:
    def test_n_at_least_population_returns_permutation(self):
        candidates = [IRI(v) for v in iris(5)]
        got = sample_entities(candidates, 10, seed=1)
        assert sorted(got, key=str) == sorted(candidates, key=str)

    def test_deterministic_for_seed_and_order(self):
        candidates = [IRI(v) for v in iris(100)]
        assert sample_entities(candidates, 10, seed=7) == sample_entities(
            candidates, 10, seed=7
        )

    def test_different_seeds_differ(self):
        candidates = [IRI(v) for v in iris(5000)]
        a = sample_entities(candidates, 1000, seed=1)
        b = sample_entities(candidates, 1000, seed=2)
        assert len(a) == len(b) == 1000
        assert a != b


ENTITY = "http://data.example/e0"
ENTITY_LINES = [
    f'<{ENTITY}> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <{CONCEPT.value}> .',
    f'<{ENTITY}> <http://data.example/p1> <http://data.example/o1> .',
    f'<{ENTITY}> <http://data.example/p2> "v" .',
    f'<{ENTITY}> <http://data.example/p3> "w" .',
]


class TestFetchEntity:
    def test_outgoing_triples_persisted_canonically(self, tmp_path):
        state = MockState()
        state.add_entities([ENTITY], triples={ENTITY: ENTITY_LINES})
        cache = EntityCache(tmp_path)
        with serve(state) as url:
            got = fetch_entity(config(url), IRI(ENTITY), CONCEPT, cache)
        assert len(got) == 4
        path = cache.path_for(url, CONCEPT, IRI(ENTITY))
        assert path.exists()
        data = path.read_bytes()
        assert data.splitlines() == sorted(data.splitlines())

    def test_zero_triples_entity_gets_empty_file(self, tmp_path):
        state = MockState()
        state.add_entities([ENTITY])
        cache = EntityCache(tmp_path)
        with serve(state) as url:
            got = fetch_entity(config(url), IRI(ENTITY), CONCEPT, cache)
        assert len(got) == 0
        assert cache.path_for(url, CONCEPT, IRI(ENTITY)).read_bytes() == b""

    def test_prefer_mode_hits_cache_without_network(self, tmp_path):
        state = MockState()
        state.add_entities([ENTITY], triples={ENTITY: ENTITY_LINES})
        cache = EntityCache(tmp_path)
        with serve(state) as url:
            first = fetch_entity(config(url), IRI(ENTITY), CONCEPT, cache)
            before = state.request_count
            second = fetch_entity(config(url), IRI(ENTITY), CONCEPT, cache)
        assert state.request_count == before
        assert first == second

    def test_offline_mode_misses_loudly(self, tmp_path):
        cache = EntityCache(tmp_path)
        with pytest.raises(EndpointError):
            fetch_entity(
                config("http://127.0.0.1:1/sparql"), IRI(ENTITY), CONCEPT, cache,
                mode="offline",
            )


def make_state(n: int = 12) -> MockState:
    state = MockState()
    entities = iris(n)
    triples = {}
    for i, e in enumerate(entities):
        lines = [
            f'<{e}> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <{CONCEPT.value}> .',
            f'<{e}> <http://data.example/shared> <http://data.example/v> .',
        ]
        if i % 2 == 0:
            lines.append(f'<{e}> <http://data.example/even> "yes" .')
        triples[e] = lines
    state.add_entities(entities, triples=triples)
    return state


class TestAcquireEndpoint:
    def test_manifest_and_graph(self, tmp_path):
        state = make_state()
        with serve(state) as url:
            run = acquire_endpoint(config(url, max_entities=10), CONCEPT,
                                   EntityCache(tmp_path), seed=5)
        assert len(run.entities) == 10
        assert run.failures == []
        assert run.requests_made > 0
        manifest = json.loads(
            EntityCache(tmp_path).manifest_path(url, CONCEPT).read_text()
        )
        assert manifest["seed"] == 5
        assert manifest["entities"] == [e.value for e in run.entities]
        assert manifest["failures"] == []
        # every sampled entity is typed in the assembled graph
        assert run.graph.entities_of_type(CONCEPT) == frozenset(run.entities)

    def test_warm_cache_rerun_zero_requests(self, tmp_path):
        state = make_state()
        cache = EntityCache(tmp_path)
        with serve(state) as url:
            first = acquire_endpoint(config(url, max_entities=10), CONCEPT, cache, seed=5)
            server_before = state.request_count
            second = acquire_endpoint(config(url, max_entities=10), CONCEPT, cache, seed=5)
        assert state.request_count == server_before
        assert second.requests_made == 0
        assert second.graph == first.graph

    def test_parallel_fetch_same_result(self, tmp_path):
        state = make_state()
        with serve(state) as url:
            serial = acquire_endpoint(
                config(url, max_entities=12), CONCEPT, EntityCache(tmp_path / "a"), seed=1
            )
            parallel = acquire_endpoint(
                config(url, max_entities=12, parallelism=4), CONCEPT,
                EntityCache(tmp_path / "b"), seed=1,
            )
        assert serial.graph == parallel.graph


class TestRunAcquisition:
    def test_partial_endpoint_failure_tolerated(self, tmp_path):
        state = make_state()
        with serve(state) as url:
            dead = config("http://127.0.0.1:1/sparql", max_retries=0)
            runs = run_acquisition([config(url), dead], CONCEPT, tmp_path, seed=1)
        assert len(runs) == 1

    def test_all_endpoints_down_raises(self, tmp_path):
        dead = config("http://127.0.0.1:1/sparql", max_retries=0)
        with pytest.raises(AcquisitionFailure):
            run_acquisition([dead], CONCEPT, tmp_path, seed=1)


class TestThrottle:
    def test_request_starts_are_spaced(self):
        throttle = _Throttle(0.03)
        starts = []
        for _ in range(4):
            throttle.wait()
            starts.append(time.monotonic())
        gaps = [b - a for a, b in zip(starts, starts[1:])]
        assert all(gap >= 0.025 for gap in gaps)

    def test_zero_interval_is_free(self):
        throttle = _Throttle(0.0)
        t0 = time.monotonic()
        for _ in range(100):
            throttle.wait()
        assert time.monotonic() - t0 < 0.5
