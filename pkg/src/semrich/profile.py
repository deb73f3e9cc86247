"""Concept profiles: which predicate/object pairs a concept's entities carry.

A pattern is a single ⟨predicate, object⟩ pair; an entity matches it
when the corresponding outgoing triple is asserted. A profile counts,
for one concept in one dataset, how many of its entities match each
pattern. Probabilities derived from a profile are exact rationals
(`fractions.Fraction`): every threshold in this library sits exactly at
1/2, where floating point cannot be trusted.

Two conventions keep counts comparable across datasets:

* the membership triple (entity, rdf:type, concept) for the concept
  under analysis is never a pattern — it would add a constant to every
  measure; other rdf:type triples do count;
* blank-node objects are never patterns — their identity is document
  scoped and would silently never match across sources.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import ConceptMismatchError, EmptyProfileError, EntityOverlapError
from .graph import Graph
from .ntriples import format_term, parse_term
from .terms import RDF_TYPE, BlankNode, IRI, Literal, Term, term_sort_key

Probability = Fraction


@dataclass(frozen=True, slots=True)
class Pattern:
    """A ⟨predicate, object⟩ pair. Objects are IRIs or literals, never blank."""

    predicate: IRI
    object: IRI | Literal

    def __post_init__(self) -> None:
        if not isinstance(self.predicate, IRI):
            raise TypeError("pattern predicate must be an IRI")
        if isinstance(self.object, BlankNode) or not isinstance(self.object, (IRI, Literal)):
            raise TypeError("pattern object must be an IRI or literal")

    def sort_key(self) -> tuple:
        return (self.predicate.value, term_sort_key(self.object))


@dataclass(frozen=True)
class ConceptProfile:
    """Per-pattern match counts for one concept's entities in one dataset.

    Patterns with zero matches are absent; every stored count c obeys
    0 < c <= total. The empty profile (no entities) is the distinguished
    error value for a concept absent from a dataset.
    """

    concept: IRI
    entities: frozenset[Term] = field(default_factory=frozenset)
    counts: Mapping[Pattern, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        total = len(self.entities)
        for pattern, count in self.counts.items():
            if not 0 < count <= total:
                raise ValueError(
                    f"pattern count {count} outside (0, {total}] for {pattern}"
                )

    @property
    def total(self) -> int:
        return len(self.entities)

    @property
    def is_empty(self) -> bool:
        return not self.entities

    def probability(self, pattern: Pattern) -> Fraction:
        return pattern_probability(self, pattern)

    def sorted_patterns(self) -> list[Pattern]:
        return sorted(self.counts, key=Pattern.sort_key)


def entity_features(graph: Graph, entity: Term, concept: IRI) -> frozenset[Pattern]:
    """The entity's pattern set: outgoing triples minus the membership triple.

    (entity, rdf:type, concept) is excluded; rdf:type triples to other
    classes count. Blank-node objects are dropped.
    """
    found = set()
    for t in graph.triples_for(entity):
        if isinstance(t.object, BlankNode):
            continue
        if t.predicate == RDF_TYPE and t.object == concept:
            continue
        found.add(Pattern(t.predicate, t.object))
    return frozenset(found)


def build_profile(
    graph: Graph, concept: IRI, entities: Iterable[Term] | None = None
) -> ConceptProfile:
    """Count pattern matches over the concept's entities.

    `entities` restricts the profile to a subset (used for capped
    sampling); anything not actually typed with the concept is ignored.
    Entities with no features still count toward the total.
    """
    members = graph.entities_of_type(concept)
    if entities is not None:
        members = frozenset(entities) & members
    counts: dict[Pattern, int] = {}
    for entity in members:
        for pattern in entity_features(graph, entity, concept):
            counts[pattern] = counts.get(pattern, 0) + 1
    return ConceptProfile(concept, members, counts)


def pattern_probability(profile: ConceptProfile, pattern: Pattern) -> Fraction:
    """Exact fraction of the concept's entities matching the pattern."""
    if profile.is_empty:
        raise EmptyProfileError(
            f"probability undefined: no entities of {profile.concept} in profile"
        )
    return Fraction(profile.counts.get(pattern, 0), profile.total)


def merge_profiles(
    a: ConceptProfile, b: ConceptProfile, allow_overlap: bool = False
) -> ConceptProfile:
    """Combine two profiles of the same concept from disjoint entity sets.

    Counts add per pattern, so the merged probability of pattern i is
    exactly (n_a*p_a + n_b*p_b) / (n_a + n_b).

    Overlapping entity sets are an error by default. With
    `allow_overlap`, counts are summed and capped at the union's size;
    that is an upper bound, not the exact union profile (aggregates
    cannot say which shared entities matched on both sides), and the
    merge-decay guarantee no longer applies. For exact results with
    shared entities, union the graphs and rebuild.
    """
    if a.concept != b.concept:
        raise ConceptMismatchError(
            f"cannot merge profiles of {a.concept} and {b.concept}"
        )
    overlap = a.entities & b.entities
    if overlap and not allow_overlap:
        names = ", ".join(format_term(e) for e in sorted(overlap, key=term_sort_key)[:5])
        more = "" if len(overlap) <= 5 else f" (+{len(overlap) - 5} more)"
        raise EntityOverlapError(
            f"entity sets overlap on {len(overlap)} entities: {names}{more}",
            overlap=frozenset(overlap),
        )
    entities = a.entities | b.entities
    total = len(entities)
    counts: dict[Pattern, int] = dict(a.counts)
    for pattern, count in b.counts.items():
        counts[pattern] = counts.get(pattern, 0) + count
    if overlap:
        counts = {p: min(c, total) for p, c in counts.items()}
    return ConceptProfile(a.concept, entities, counts)


def _object_to_dict(obj: IRI | Literal) -> dict:
    if isinstance(obj, IRI):
        return {"kind": "iri", "value": obj.value}
    out: dict = {"kind": "literal", "value": obj.lexical}
    if obj.datatype is not None:
        out["datatype"] = obj.datatype.value
    if obj.language is not None:
        out["language"] = obj.language
    return out


def _object_from_dict(data: Mapping) -> IRI | Literal:
    if data["kind"] == "iri":
        return IRI(data["value"])
    if data["kind"] == "literal":
        datatype = IRI(data["datatype"]) if "datatype" in data else None
        return Literal(data["value"], datatype=datatype, language=data.get("language"))
    raise ValueError(f"unknown object kind: {data.get('kind')!r}")


def profile_to_dict(profile: ConceptProfile) -> dict:
    """JSON-ready form with deterministic ordering."""
    return {
        "concept": profile.concept.value,
        "total": profile.total,
        "entities": sorted(
            (format_term(e) for e in profile.entities),
        ),
        "patterns": [
            {
                "predicate": p.predicate.value,
                "object": _object_to_dict(p.object),
                "count": profile.counts[p],
            }
            for p in profile.sorted_patterns()
        ],
    }


def profile_from_dict(data: Mapping) -> ConceptProfile:
    entities = frozenset(parse_term(e) for e in data.get("entities", ()))
    counts = {
        Pattern(IRI(row["predicate"]), _object_from_dict(row["object"])): row["count"]
        for row in data["patterns"]
    }
    profile = ConceptProfile(IRI(data["concept"]), entities, counts)
    if profile.total != data["total"]:
        raise ValueError(
            f"profile document total {data['total']} does not match "
            f"{profile.total} listed entities"
        )
    return profile


def dump_profile(profile: ConceptProfile) -> str:
    return json.dumps(profile_to_dict(profile), indent=2, sort_keys=True)


def load_profile(text: str) -> ConceptProfile:
    return profile_from_dict(json.loads(text))
