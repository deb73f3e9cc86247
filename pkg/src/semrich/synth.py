"""Deterministic synthetic RDF sources and ontology trees.

Sources realize requested pattern probabilities exactly: a pattern with
target probability q over n entities is assigned to round(q*n) entities
(seeded choice of which), so re-profiling the generated graph recovers
q as round(q*n)/n with no sampling noise. A Bernoulli mode exists for
statistical experiments where noise is wanted.

Ontology trees grow richness downward by construction: every node owns
a few node-specific patterns carried by its entire subtree, so each
level inherits everything above it and adds its own. With the
mutual-exclusivity flag set, sibling concepts partition their parent's
entities; without it siblings draw from a shared pool and overlap,
which is exactly the precondition violation the merge checks reject.
Designated "feature-poor" leaves carry no patterns at all (only their
type chain), producing child concepts poorer than their parents.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from random import Random
from typing import Mapping, Sequence

from .graph import Graph
from .profile import Pattern, _object_from_dict, _object_to_dict
from .terms import RDF_TYPE, RDFS_SUBCLASS_OF, IRI, Triple

_MIX = 1_000_003  # seed mixing stride; keeps sub-generators independent


def parse_fraction(value) -> Fraction:
    """Exact fraction from "2/3", "0.5", ints, or floats (via decimal text)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(str(value).strip())


@dataclass(frozen=True)
class SourceSpec:
    """One synthetic dataset: a concept, n entities, target pattern probabilities."""

    concept: IRI
    n_entities: int
    patterns: Sequence[tuple[Pattern, Fraction]]
    seed: int = 0
    name: str | None = None
    entity_base: str = "http://synth.example/src"
    bernoulli: bool = False

    def __post_init__(self) -> None:
        if self.n_entities <= 0:
            raise ValueError("n_entities must be positive")
        for _, q in self.patterns:
            if not 0 <= q <= 1:
                raise ValueError(f"target probability {q} outside [0, 1]")

    @property
    def source_name(self) -> str:
        return self.name if self.name is not None else f"s{self.seed}"


def generate_source(spec: SourceSpec) -> Graph:
    """Build the graph realizing the spec; same spec, same graph."""
    n = spec.n_entities
    entities = [
        IRI(f"{spec.entity_base}/{spec.source_name}/e{i}") for i in range(n)
    ]
    triples = [Triple(e, RDF_TYPE, spec.concept) for e in entities]
    for k, (pattern, q) in enumerate(spec.patterns):
        rng = Random(spec.seed * _MIX + k)
        if spec.bernoulli:
            chosen = [i for i in range(n) if rng.random() < q]
        else:
            count = int(round(q * n))
            chosen = rng.sample(range(n), count)
        for i in chosen:
            triples.append(Triple(entities[i], pattern.predicate, pattern.object))
    return Graph(triples)


@dataclass(frozen=True)
class OntologySpec:
    """A subclass tree with entities at the leaves.

    patterns_per_level gives how many node-specific patterns each node
    at that depth owns (a single int applies to every level). With
    mutually_exclusive, leaves partition their parent's entities;
    otherwise sibling leaves sample from a shared pool sized so that
    overlap is guaranteed. feature_poor_leaves_per_parent marks that
    many leaves under each parent as bare: no patterns, type chain only.
    """

    depth: int
    branching: int
    entities_per_leaf: int
    patterns_per_level: int | Sequence[int] = 3
    mutually_exclusive: bool = True
    feature_poor_leaves_per_parent: int = 0
    seed: int = 0
    base_iri: str = "http://synth.example/onto"

    def __post_init__(self) -> None:
        if self.depth < 0 or self.branching < 1 or self.entities_per_leaf < 1:
            raise ValueError("depth >= 0, branching >= 1, entities_per_leaf >= 1 required")
        if self.feature_poor_leaves_per_parent >= self.branching and self.depth > 0:
            raise ValueError("at least one leaf per parent must keep its patterns")

    def level_patterns(self, depth: int) -> int:
        if isinstance(self.patterns_per_level, int):
            return self.patterns_per_level
        return self.patterns_per_level[depth]

    def node_name(self, path: tuple[int, ...]) -> str:
        return "root" if not path else "-".join(str(i) for i in path)

    def concept_iri(self, path: tuple[int, ...]) -> IRI:
        return IRI(f"{self.base_iri}/c/{self.node_name(path)}")


def _node_patterns(spec: OntologySpec, path: tuple[int, ...]) -> list[Pattern]:
    name = spec.node_name(path)
    return [
        Pattern(IRI(f"{spec.base_iri}/p/{name}/{j}"), IRI(f"{spec.base_iri}/v/{name}/{j}"))
        for j in range(spec.level_patterns(len(path)))
    ]


def generate_ontology(spec: OntologySpec) -> Graph:
    triples: list[Triple] = []
    paths_at: list[list[tuple[int, ...]]] = [[()]]
    for d in range(spec.depth):
        paths_at.append([p + (i,) for p in paths_at[d] for i in range(spec.branching)])

    for d in range(1, spec.depth + 1):
        for path in paths_at[d]:
            triples.append(
                Triple(spec.concept_iri(path), RDFS_SUBCLASS_OF, spec.concept_iri(path[:-1]))
            )

    leaves = paths_at[spec.depth]
    poor: set[tuple[int, ...]] = set()
    if spec.feature_poor_leaves_per_parent and spec.depth > 0:
        for parent in paths_at[spec.depth - 1]:
            for i in range(spec.branching - spec.feature_poor_leaves_per_parent, spec.branching):
                poor.add(parent + (i,))

    def leaf_entities(leaf: tuple[int, ...]) -> list[IRI]:
        name = spec.node_name(leaf)
        return [
            IRI(f"{spec.base_iri}/e/{name}/{i}") for i in range(spec.entities_per_leaf)
        ]

    if spec.mutually_exclusive or spec.depth == 0:
        membership = {leaf: leaf_entities(leaf) for leaf in leaves}
    else:
        # Shared per-parent pools sized at 1.5x a leaf, so any two sibling
        # leaves must overlap.
        membership = {}
        for pi, parent in enumerate(paths_at[spec.depth - 1]):
            pool_size = max(spec.entities_per_leaf, (spec.entities_per_leaf * 3 + 1) // 2)
            pool = [
                IRI(f"{spec.base_iri}/e/{spec.node_name(parent)}/pool{i}")
                for i in range(pool_size)
            ]
            for ci in range(spec.branching):
                leaf = parent + (ci,)
                rng = Random(spec.seed * _MIX + pi * spec.branching + ci + 1)
                membership[leaf] = rng.sample(pool, spec.entities_per_leaf)

    for leaf in leaves:
        ancestors = [leaf[:k] for k in range(len(leaf) + 1)]  # root .. leaf
        patterns: list[Pattern] = []
        if leaf not in poor:
            for node in ancestors:
                patterns.extend(_node_patterns(spec, node))
        for entity in membership[leaf]:
            for node in ancestors:
                triples.append(Triple(entity, RDF_TYPE, spec.concept_iri(node)))
            for pattern in patterns:
                triples.append(Triple(entity, pattern.predicate, pattern.object))

    return Graph(triples)


def source_spec_from_dict(data: Mapping) -> SourceSpec:
    patterns = [
        (
            Pattern(IRI(row["predicate"]), _object_from_dict(row["object"])),
            parse_fraction(row["probability"]),
        )
        for row in data.get("patterns", ())
    ]
    kwargs = {}
    for key in ("seed", "name", "entity_base", "bernoulli"):
        if key in data:
            kwargs[key] = data[key]
    return SourceSpec(
        concept=IRI(data["concept"]),
        n_entities=data["n_entities"],
        patterns=patterns,
        **kwargs,
    )


def ontology_spec_from_dict(data: Mapping) -> OntologySpec:
    kwargs = {}
    for key in (
        "patterns_per_level",
        "mutually_exclusive",
        "feature_poor_leaves_per_parent",
        "seed",
        "base_iri",
    ):
        if key in data:
            kwargs[key] = data[key]
    return OntologySpec(
        depth=data["depth"],
        branching=data["branching"],
        entities_per_leaf=data["entities_per_leaf"],
        **kwargs,
    )


def source_spec_to_dict(spec: SourceSpec) -> dict:
    return {
        "kind": "source",
        "concept": spec.concept.value,
        "n_entities": spec.n_entities,
        "seed": spec.seed,
        "name": spec.source_name,
        "entity_base": spec.entity_base,
        "bernoulli": spec.bernoulli,
        "patterns": [
            {
                "predicate": p.predicate.value,
                "object": _object_to_dict(p.object),
                "probability": str(q),
            }
            for p, q in spec.patterns
        ],
    }


def load_spec_file(path: str | Path):
    """Read a spec document: one source, a list of sources, or an ontology."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    kind = data.get("kind")
    if kind == "source":
        return source_spec_from_dict(data)
    if kind == "sources":
        return [source_spec_from_dict(row) for row in data["sources"]]
    if kind == "ontology":
        return ontology_spec_from_dict(data)
    raise ValueError(f"unknown spec kind: {kind!r}")
