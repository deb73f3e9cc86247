"""Experiment drivers: richness decay under merging, and subclass trees.

The decay driver starts from each source in turn and folds in the other
sources' entities in seeded random order, recomputing G at chunk
boundaries on a working copy of the counts. Every curve ends at the
same value: G of the full merge, which never exceeds the entity-
weighted average of the sources' own G.

The tree driver profiles every concept reachable below a root through
subclass edges (sampling big ones down to a cap) and compares each
parent against its children, edge by edge and against their weighted
mean.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from random import Random

from .acquisition import sample_entities
from .errors import EntityOverlapError, SemrichError
from .graph import Graph
from .ntriples import format_term
from .profile import ConceptProfile, Pattern, build_profile, entity_features
from .richness import g_from_counts
from .terms import RDFS_SUBCLASS_OF, IRI, Term, term_sort_key

_MIX = 1_000_003


@dataclass(frozen=True)
class DecayStep:
    entities_added: int
    total_entities: int
    g: Fraction


@dataclass(frozen=True)
class DecayCurve:
    base: str
    initial_g: Fraction
    steps: tuple[DecayStep, ...]

    @property
    def final_g(self) -> Fraction:
        return self.steps[-1].g


@dataclass(frozen=True)
class DecayResult:
    concept: IRI
    curves: tuple[DecayCurve, ...]
    initial: dict[str, Fraction]
    sizes: dict[str, int]
    weighted_average: Fraction
    merged_g: Fraction


def _check_disjoint(named: list[tuple[str, ConceptProfile]]) -> None:
    owner: dict[Term, str] = {}
    clashes: list[str] = []
    overlap: set[Term] = set()
    for name, profile in named:
        for entity in sorted(profile.entities, key=term_sort_key):
            if entity in owner and owner[entity] != name:
                overlap.add(entity)
                if len(clashes) < 5:
                    clashes.append(
                        f"{format_term(entity)} in {owner[entity]} and {name}"
                    )
            else:
                owner[entity] = name
    if overlap:
        more = "" if len(overlap) <= 5 else f" (+{len(overlap) - 5} more)"
        raise EntityOverlapError(
            f"sources share {len(overlap)} entities: {'; '.join(clashes)}{more}",
            overlap=frozenset(overlap),
        )


def decay_curves(
    sources: list[tuple[str, Graph]],
    concept: IRI,
    chunk_size: int = 100,
    seed: int = 0,
) -> DecayResult:
    """One decay curve per base source, plus the shared reference values.

    Sources must have pairwise disjoint entity sets. Steps are taken
    every `chunk_size` added entities (and at the end); step 0 is the
    base source alone.
    """
    if len(sources) < 2:
        raise SemrichError("decay needs at least two sources")
    if chunk_size < 1:
        raise SemrichError("chunk size must be positive")

    profiles: list[tuple[str, ConceptProfile]] = []
    features: dict[str, list[tuple[Term, frozenset[Pattern]]]] = {}
    for name, graph in sources:
        profile = build_profile(graph, concept)
        if profile.is_empty:
            raise SemrichError(f"source {name!r} has no entities of {concept}")
        profiles.append((name, profile))
        features[name] = [
            (e, entity_features(graph, e, concept))
            for e in sorted(profile.entities, key=term_sort_key)
        ]
    _check_disjoint(profiles)

    initial = {name: g_from_counts(p.counts, p.total) for name, p in profiles}
    sizes = {name: p.total for name, p in profiles}
    grand_total = sum(sizes.values())
    weighted_average = (
        sum(sizes[name] * initial[name] for name, _ in profiles) / Fraction(grand_total)
    )

    merged_counts: dict[Pattern, int] = {}
    for _, profile in profiles:
        for pattern, count in profile.counts.items():
            merged_counts[pattern] = merged_counts.get(pattern, 0) + count
    merged_g = g_from_counts(merged_counts, grand_total)

    curves: list[DecayCurve] = []
    for index, (base, base_profile) in enumerate(profiles):
        foreign: list[tuple[Term, frozenset[Pattern]]] = []
        for name, _ in profiles:
            if name != base:
                foreign.extend(features[name])
        Random(seed * _MIX + index).shuffle(foreign)

        counts = dict(base_profile.counts)
        total = base_profile.total
        steps = [DecayStep(0, total, initial[base])]
        added = 0
        for entity, feats in foreign:
            for pattern in feats:
                counts[pattern] = counts.get(pattern, 0) + 1
            total += 1
            added += 1
            if added % chunk_size == 0:
                steps.append(DecayStep(added, total, g_from_counts(counts, total)))
        if added % chunk_size != 0:
            steps.append(DecayStep(added, total, g_from_counts(counts, total)))
        curves.append(DecayCurve(base, initial[base], tuple(steps)))

    return DecayResult(
        concept=concept,
        curves=tuple(curves),
        initial=initial,
        sizes=sizes,
        weighted_average=weighted_average,
        merged_g=merged_g,
    )


def decay_result_to_dict(result: DecayResult) -> dict:
    return {
        "concept": result.concept.value,
        "weighted_average": {"exact": str(result.weighted_average), "float": float(result.weighted_average)},
        "merged_g": {"exact": str(result.merged_g), "float": float(result.merged_g)},
        "sources": [
            {
                "id": name,
                "entities": result.sizes[name],
                "initial_g": {"exact": str(g), "float": float(g)},
            }
            for name, g in sorted(result.initial.items())
        ],
        "curves": [
            {
                "base": curve.base,
                "final_g": {"exact": str(curve.final_g), "float": float(curve.final_g)},
                "steps": [
                    {
                        "entities_added": s.entities_added,
                        "total_entities": s.total_entities,
                        "g": {"exact": str(s.g), "float": float(s.g)},
                    }
                    for s in curve.steps
                ],
            }
            for curve in result.curves
        ],
    }


@dataclass(frozen=True)
class EdgeDelta:
    child: IRI
    parent: IRI
    child_g: Fraction
    parent_g: Fraction

    @property
    def delta(self) -> Fraction:
        return self.child_g - self.parent_g


@dataclass(frozen=True)
class ParentComparison:
    parent: IRI
    parent_g: Fraction
    children_mean: Fraction

    @property
    def holds(self) -> bool:
        return self.parent_g <= self.children_mean


@dataclass(frozen=True)
class TreeReport:
    root: IRI
    concept_g: dict[IRI, Fraction]
    concept_totals: dict[IRI, int]
    edges: tuple[EdgeDelta, ...]
    parents: tuple[ParentComparison, ...]
    fraction_increasing: Fraction | None = field(default=None)


def _concept_seed(seed: int, concept: IRI) -> int:
    digest = hashlib.sha256(concept.value.encode("utf-8")).hexdigest()[:8]
    return seed * _MIX + int(digest, 16)


def tree_report(graph: Graph, root: IRI, cap: int = 1000, seed: int = 0) -> TreeReport:
    """Per-concept richness below a subclass root, with edge deltas.

    Concepts larger than `cap` entities are profiled over a seeded
    sample of that size. Edges count only between concepts that both
    have entities; with no such edges the increasing fraction is
    undefined (None).
    """
    children_of: dict[IRI, set[IRI]] = {}
    known: set[IRI] = {root}
    for t in graph:
        if (
            t.predicate == RDFS_SUBCLASS_OF
            and isinstance(t.subject, IRI)
            and isinstance(t.object, IRI)
        ):
            children_of.setdefault(t.object, set()).add(t.subject)
            known.update((t.subject, t.object))
    if root not in known and not graph.entities_of_type(root):
        raise SemrichError(f"root concept not present: {root}")

    reachable: list[IRI] = []
    queue = [root]
    seen = {root}
    while queue:
        node = queue.pop(0)
        reachable.append(node)
        for child in sorted(children_of.get(node, ()), key=lambda c: c.value):
            if child not in seen:
                seen.add(child)
                queue.append(child)

    concept_g: dict[IRI, Fraction] = {}
    concept_totals: dict[IRI, int] = {}
    for concept in reachable:
        members = graph.entities_of_type(concept)
        if not members:
            continue
        restricted = None
        if len(members) > cap:
            ordered = sorted(members, key=term_sort_key)
            restricted = sample_entities(ordered, cap, _concept_seed(seed, concept))
        profile = build_profile(graph, concept, entities=restricted)
        concept_g[concept] = g_from_counts(profile.counts, profile.total)
        concept_totals[concept] = profile.total

    edges: list[EdgeDelta] = []
    parents: list[ParentComparison] = []
    for parent in reachable:
        if parent not in concept_g:
            continue
        kids = [
            c for c in sorted(children_of.get(parent, ()), key=lambda c: c.value)
            if c in concept_g and c in seen
        ]
        for child in kids:
            edges.append(EdgeDelta(child, parent, concept_g[child], concept_g[parent]))
        if kids:
            weight = sum(concept_totals[c] for c in kids)
            mean = (
                sum(concept_totals[c] * concept_g[c] for c in kids) / Fraction(weight)
            )
            parents.append(ParentComparison(parent, concept_g[parent], mean))

    fraction = None
    if edges:
        fraction = Fraction(sum(1 for e in edges if e.delta > 0), len(edges))
    return TreeReport(
        root=root,
        concept_g=concept_g,
        concept_totals=concept_totals,
        edges=tuple(edges),
        parents=tuple(parents),
        fraction_increasing=fraction,
    )


def tree_report_to_dict(report: TreeReport) -> dict:
    return {
        "root": report.root.value,
        "fraction_increasing": (
            None
            if report.fraction_increasing is None
            else {
                "exact": str(report.fraction_increasing),
                "float": float(report.fraction_increasing),
            }
        ),
        "concepts": [
            {
                "concept": c.value,
                "entities": report.concept_totals[c],
                "g": {"exact": str(g), "float": float(g)},
            }
            for c, g in sorted(report.concept_g.items(), key=lambda kv: kv[0].value)
        ],
        "edges": [
            {
                "child": e.child.value,
                "parent": e.parent.value,
                "child_g": {"exact": str(e.child_g), "float": float(e.child_g)},
                "parent_g": {"exact": str(e.parent_g), "float": float(e.parent_g)},
                "delta": {"exact": str(e.delta), "float": float(e.delta)},
                "increasing": e.delta > 0,
            }
            for e in report.edges
        ],
        "parents": [
            {
                "parent": p.parent.value,
                "parent_g": {"exact": str(p.parent_g), "float": float(p.parent_g)},
                "children_mean": {
                    "exact": str(p.children_mean),
                    "float": float(p.children_mean),
                },
                "holds": p.holds,
            }
            for p in report.parents
        ],
    }
