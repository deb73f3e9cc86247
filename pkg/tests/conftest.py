from __future__ import annotations

from pathlib import Path

import pytest

from semrich import IRI, Pattern, build_profile, parse_ntriples

DATA = Path(__file__).parent / "data"

CONCEPT = IRI("http://example.org/C")

# The shared fixture patterns: A and B characterize the first dataset,
# C the second.
PAT_A = Pattern(IRI("http://example.org/p1"), IRI("http://example.org/o1"))
PAT_B = Pattern(IRI("http://example.org/p2"), IRI("http://example.org/o2"))
PAT_C = Pattern(IRI("http://example.org/p3"), IRI("http://example.org/o3"))


@pytest.fixture(scope="session")
def d1_path() -> Path:
    return DATA / "d1.nt"


@pytest.fixture(scope="session")
def d2_path() -> Path:
    return DATA / "d2.nt"


@pytest.fixture(scope="session")
def d1_graph(d1_path):
    result = parse_ntriples(d1_path.read_bytes())
    assert result.ok
    return result.graph


@pytest.fixture(scope="session")
def d2_graph(d2_path):
    result = parse_ntriples(d2_path.read_bytes())
    assert result.ok
    return result.graph


@pytest.fixture(scope="session")
def d1_profile(d1_graph):
    return build_profile(d1_graph, CONCEPT)


@pytest.fixture(scope="session")
def d2_profile(d2_graph):
    return build_profile(d2_graph, CONCEPT)


@pytest.fixture(scope="session")
def corpus_paths() -> list[Path]:
    return sorted(DATA.glob("*.nt"))
