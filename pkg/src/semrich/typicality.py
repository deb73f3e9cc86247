"""Entity typicality against a concept profile.

An entity's typicality is the fraction of the concept's characteristic
patterns it actually carries: |E ∩ Y| / |Y|. At 1/2 or above the entity
is classified typical; the boundary itself is typical, and the
comparison is exact. Adding a typical entity to the dataset tends to
maintain richness and adding an atypical one to lower it, but that is a
tendency, not a law: `richness_delta_on_add` reports the exact effect
so callers can check instead of assume.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    EmptyProfileError,
    EntityOverlapError,
    RichnessRegressionError,
    SubconceptError,
    UndefinedTypicalityError,
)
from .graph import Graph
from .profile import ConceptProfile, Pattern, build_profile, entity_features
from .richness import ONE_HALF, characteristic_set, g_from_counts
from .terms import RDF_TYPE, RDFS_SUBCLASS_OF, IRI, Term, Triple, term_sort_key


@functools.total_ordering
@dataclass(frozen=True)
class TypicalityScore:
    """How typical one entity is for a concept; ordered by delta."""

    entity: Term | None
    features: frozenset[Pattern]
    delta: Fraction
    is_typical: bool

    @property
    def classification(self) -> str:
        return "typical" if self.is_typical else "atypical"

    def __lt__(self, other: "TypicalityScore") -> bool:
        return self.delta < other.delta


def typicality(
    profile: ConceptProfile,
    features: frozenset[Pattern],
    entity: Term | None = None,
) -> TypicalityScore:
    """Score a feature set against the profile's characteristic patterns."""
    y = characteristic_set(profile)
    if not y:
        raise UndefinedTypicalityError(
            f"typicality undefined: {profile.concept} has an empty characteristic set"
        )
    delta = Fraction(len(features & y), len(y))
    return TypicalityScore(
        entity=entity,
        features=frozenset(features),
        delta=delta,
        is_typical=delta >= ONE_HALF,
    )


def more_typical(a: TypicalityScore, b: TypicalityScore) -> bool:
    """True when a is strictly more typical than b (equal deltas tie)."""
    return a.delta > b.delta


def richness_delta_on_add(
    profile: ConceptProfile,
    features: frozenset[Pattern],
    entity: Term | None = None,
) -> Fraction:
    """Exact change in G if an entity with these features joined the dataset.

    Features are taken as already normalized (no blank objects, no
    membership triple for this concept); anything matching the
    membership pattern is dropped defensively. When the entity term is
    supplied, adding one that is already in the profile is an error.
    """
    if profile.is_empty:
        raise EmptyProfileError(
            f"richness undefined: {profile.concept} has no entities"
        )
    if entity is not None and entity in profile.entities:
        raise EntityOverlapError(
            f"entity is already in the profile: {entity}", frozenset({entity})
        )
    membership = Pattern(RDF_TYPE, profile.concept)
    added = {f for f in features if f != membership}
    new_counts = dict(profile.counts)
    for pattern in added:
        new_counts[pattern] = new_counts.get(pattern, 0) + 1
    before = g_from_counts(profile.counts, profile.total)
    after = g_from_counts(new_counts, profile.total + 1)
    return after - before


@dataclass(frozen=True)
class CandidateScore:
    """One row of a typicality batch: score plus predicted richness effect."""

    entity: Term
    score: TypicalityScore
    richness_delta: Fraction | None
    note: str = ""


def score_candidates(
    graph: Graph,
    concept: IRI,
    candidates: list[Term],
    profile: ConceptProfile | None = None,
) -> list[CandidateScore]:
    """Score candidate entities (features read from the graph) in order.

    Candidates already counted in the profile get a typicality score
    but no richness delta, with a note saying why.
    """
    if profile is None:
        profile = build_profile(graph, concept)
    rows: list[CandidateScore] = []
    for entity in candidates:
        features = entity_features(graph, entity, concept)
        score = typicality(profile, features, entity=entity)
        if entity in profile.entities:
            rows.append(
                CandidateScore(entity, score, None, note="already in profile")
            )
        else:
            delta = richness_delta_on_add(profile, features, entity=entity)
            rows.append(CandidateScore(entity, score, delta))
    return rows


def induce_subconcept(graph: Graph, concept: IRI, new_concept: IRI) -> Graph:
    """Group the concept's typical entities under a fresh subclass.

    Returns the input graph plus one (new_concept, rdfs:subClassOf,
    concept) triple and one membership triple per typical entity. The
    new name must not already be in use as a class. As a diagnostic,
    the induced subclass must come out at least as rich as the parent
    was in the input graph; a violation raises rather than silently
    producing a poorer grouping.
    """
    if (
        graph.entities_of_type(new_concept)
        or any(
            t.predicate == RDFS_SUBCLASS_OF
            and new_concept in (t.subject, t.object)
            for t in graph
        )
        or new_concept in graph.classes()
    ):
        raise SubconceptError(f"{new_concept} is already used as a class")

    profile = build_profile(graph, concept)
    if profile.is_empty:
        raise EmptyProfileError(f"no entities of {concept}")
    y = characteristic_set(profile)
    if not y:
        raise UndefinedTypicalityError(
            f"cannot induce a sub-concept: {concept} has an empty characteristic set"
        )

    typical = [
        entity
        for entity in sorted(profile.entities, key=term_sort_key)
        if typicality(profile, entity_features(graph, entity, concept)).is_typical
    ]
    extra = [Triple(new_concept, RDFS_SUBCLASS_OF, concept)]
    extra.extend(Triple(e, RDF_TYPE, new_concept) for e in typical)
    out = graph.with_triples(extra)

    if typical:
        parent_g = g_from_counts(profile.counts, profile.total)
        sub_profile = build_profile(out, new_concept)
        sub_g = g_from_counts(sub_profile.counts, sub_profile.total)
        if sub_g < parent_g:
            raise RichnessRegressionError(
                f"induced {new_concept} has G={sub_g} below parent G={parent_g}"
            )
    return out
