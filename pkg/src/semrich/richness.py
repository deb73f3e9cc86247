"""Richness measures over concept profiles, all in exact arithmetic.

For a concept with n entities and per-pattern match counts c_i:

* mu: the expected number of observed patterns per entity, the mean of
  the Poisson binomial distribution over the pattern indicators,
  sum of c_i / n.
* characteristic set Y: the patterns held by a strict majority of
  entities (c_i / n > 1/2; a tie at exactly half is out).
* richness G: expected correct minus incorrect inferences when every
  pattern in Y is asserted of a fresh entity. Per pattern that is
  2p - 1 for p > 1/2 and 0 otherwise; G is the sum.

Merging two disjoint datasets can only lose richness: G of the merge
never exceeds the entity-weighted average of the parts. `verify_decay`
checks that inequality exactly and labels every pattern with which
branch of the case analysis it falls into.

The information-content baseline (-log2 of the concept's share of typed
entities) is included for comparison; it collapses to zero on any
single-type dataset, which is precisely what G does not do.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import EmptyProfileError
from .graph import Graph
from .profile import ConceptProfile, Pattern, merge_profiles
from .terms import IRI

ONE_HALF = Fraction(1, 2)

CASE_BOTH_INFREQUENT = "both-infrequent"
CASE_BOTH_FREQUENT = "both-frequent"
CASE_ONE_FREQUENT_MERGED_INFREQUENT = "one-frequent-merged-infrequent"
CASE_ONE_FREQUENT_MERGED_FREQUENT = "one-frequent-merged-frequent"

ALL_CASES = (
    CASE_BOTH_INFREQUENT,
    CASE_BOTH_FREQUENT,
    CASE_ONE_FREQUENT_MERGED_INFREQUENT,
    CASE_ONE_FREQUENT_MERGED_FREQUENT,
)


def pattern_richness(p: Fraction) -> Fraction:
    """Single-pattern contribution: 2p - 1 above the majority line, else 0."""
    if p > ONE_HALF:
        return 2 * p - 1
    return Fraction(0)


def g_from_counts(counts: Mapping[Pattern, int], total: int) -> Fraction:
    """G computed directly from raw counts; shared by the incremental drivers."""
    if total <= 0:
        raise EmptyProfileError("richness undefined over zero entities")
    g = Fraction(0)
    for count in counts.values():
        if 2 * count > total:
            g += Fraction(2 * count - total, total)
    return g


def expected_pattern_count(profile: ConceptProfile) -> Fraction:
    """mu: the exact sum of all pattern probabilities."""
    if profile.is_empty:
        raise EmptyProfileError(f"mu undefined: {profile.concept} has no entities")
    return Fraction(sum(profile.counts.values()), profile.total)


def characteristic_set(profile: ConceptProfile) -> frozenset[Pattern]:
    """Patterns matched by a strict majority of entities. p = 1/2 is excluded."""
    if profile.is_empty:
        raise EmptyProfileError(
            f"characteristic set undefined: {profile.concept} has no entities"
        )
    total = profile.total
    return frozenset(p for p, c in profile.counts.items() if 2 * c > total)


@dataclass(frozen=True)
class RichnessReport:
    """mu, Y, G, and the per-pattern breakdown for one (concept, dataset)."""

    concept: IRI
    total_entities: int
    mu: Fraction
    characteristic_set: frozenset[Pattern]
    per_pattern: Mapping[Pattern, Fraction]
    g_value: Fraction


def richness(profile: ConceptProfile) -> RichnessReport:
    if profile.is_empty:
        raise EmptyProfileError(f"richness undefined: {profile.concept} has no entities")
    total = profile.total
    per_pattern: dict[Pattern, Fraction] = {}
    g = Fraction(0)
    for pattern, count in profile.counts.items():
        if 2 * count > total:
            value = Fraction(2 * count - total, total)
            per_pattern[pattern] = value
            g += value
    return RichnessReport(
        concept=profile.concept,
        total_entities=total,
        mu=expected_pattern_count(profile),
        characteristic_set=frozenset(per_pattern),
        per_pattern=per_pattern,
        g_value=g,
    )


def weighted_average_richness(a: ConceptProfile, b: ConceptProfile) -> Fraction:
    """Entity-weighted mean of the two datasets' G values."""
    ga = richness(a).g_value
    gb = richness(b).g_value
    return Fraction(a.total * ga + b.total * gb, a.total + b.total)


@dataclass(frozen=True)
class MergeCase:
    """How one pattern behaves under a merge: its two source probabilities,
    the merged probability, the case label, and both sides of the
    per-pattern inequality."""

    w1: Fraction
    w2: Fraction
    merged: Fraction
    case: str
    merged_richness: Fraction
    average_richness: Fraction

    @property
    def holds(self) -> bool:
        return self.merged_richness <= self.average_richness


@dataclass(frozen=True)
class TheoremCheck:
    """Exact check that merging loses (or preserves) richness.

    lhs is G of the merged profile, rhs the entity-weighted average of
    the sources' G. `holds` is the exact comparison lhs <= rhs together
    with the same inequality for every individual pattern.
    """

    concept: IRI
    lhs: Fraction
    rhs: Fraction
    holds: bool
    cases: Mapping[Pattern, MergeCase]

    def case_counts(self) -> dict[str, int]:
        out = {name: 0 for name in ALL_CASES}
        for case in self.cases.values():
            out[case.case] += 1
        return out


def _classify(w1: Fraction, w2: Fraction, merged: Fraction) -> str:
    f1 = w1 > ONE_HALF
    f2 = w2 > ONE_HALF
    if not f1 and not f2:
        return CASE_BOTH_INFREQUENT
    if f1 and f2:
        return CASE_BOTH_FREQUENT
    if merged > ONE_HALF:
        return CASE_ONE_FREQUENT_MERGED_FREQUENT
    return CASE_ONE_FREQUENT_MERGED_INFREQUENT


def verify_decay(a: ConceptProfile, b: ConceptProfile) -> TheoremCheck:
    """Merge two disjoint same-concept profiles and verify the decay bound.

    The merged G must not exceed the weighted average of the sources'
    G, overall and pattern by pattern. Each pattern is labelled with
    its branch of the case analysis: infrequent on both sides,
    frequent on both (where the inequality is an exact tie), or
    frequent on one side with the merged probability landing on either
    side of 1/2.
    """
    merged = merge_profiles(a, b)
    na, nb = a.total, b.total
    lhs = g_from_counts(merged.counts, merged.total)
    rhs = weighted_average_richness(a, b)

    cases: dict[Pattern, MergeCase] = {}
    all_holds = lhs <= rhs
    for pattern in set(a.counts) | set(b.counts):
        w1 = Fraction(a.counts.get(pattern, 0), na)
        w2 = Fraction(b.counts.get(pattern, 0), nb)
        pm = Fraction(merged.counts.get(pattern, 0), merged.total)
        case = MergeCase(
            w1=w1,
            w2=w2,
            merged=pm,
            case=_classify(w1, w2, pm),
            merged_richness=pattern_richness(pm),
            average_richness=Fraction(
                na * pattern_richness(w1) + nb * pattern_richness(w2), na + nb
            ),
        )
        cases[pattern] = case
        if not case.holds:
            all_holds = False
    return TheoremCheck(concept=a.concept, lhs=lhs, rhs=rhs, holds=all_holds, cases=cases)


@dataclass(frozen=True)
class ICReport:
    """Information-content baseline for a concept within a graph."""

    concept: IRI
    p_alpha: Fraction
    ic_value: float


def information_content(graph: Graph, concept: IRI) -> ICReport:
    """-log2 of the concept's share of typed entities.

    The denominator is the number of subjects bearing at least one
    rdf:type assertion. Deliberately degenerate on single-type data:
    if every typed entity is of the concept, the value is exactly 0.
    """
    members = graph.entities_of_type(concept)
    typed = graph.typed_subjects()
    if not typed:
        raise EmptyProfileError("information content undefined: no typed entities")
    if not members:
        raise EmptyProfileError(
            f"information content undefined: no entities of {concept}"
        )
    p_alpha = Fraction(len(members), len(typed))
    ic = 0.0 if p_alpha == 1 else -math.log2(p_alpha)
    return ICReport(concept=concept, p_alpha=p_alpha, ic_value=ic)


def _rational_pair(value: Fraction) -> dict:
    return {"exact": str(value), "float": float(value)}


def richness_report_to_dict(report: RichnessReport) -> dict:
    from .profile import _object_to_dict  # deterministic object rendering

    rows = []
    for pattern in sorted(report.per_pattern, key=Pattern.sort_key):
        rows.append(
            {
                "predicate": pattern.predicate.value,
                "object": _object_to_dict(pattern.object),
                "richness": _rational_pair(report.per_pattern[pattern]),
            }
        )
    return {
        "concept": report.concept.value,
        "total_entities": report.total_entities,
        "mu": _rational_pair(report.mu),
        "characteristic_set_size": len(report.characteristic_set),
        "g": _rational_pair(report.g_value),
        "per_pattern": rows,
    }


def theorem_check_to_dict(check: TheoremCheck) -> dict:
    from .profile import _object_to_dict

    rows = []
    for pattern in sorted(check.cases, key=Pattern.sort_key):
        case = check.cases[pattern]
        rows.append(
            {
                "predicate": pattern.predicate.value,
                "object": _object_to_dict(pattern.object),
                "w1": _rational_pair(case.w1),
                "w2": _rational_pair(case.w2),
                "merged_p": _rational_pair(case.merged),
                "case": case.case,
                "merged_richness": _rational_pair(case.merged_richness),
                "average_richness": _rational_pair(case.average_richness),
                "holds": case.holds,
            }
        )
    return {
        "concept": check.concept.value,
        "lhs": _rational_pair(check.lhs),
        "rhs": _rational_pair(check.rhs),
        "holds": check.holds,
        "case_counts": check.case_counts(),
        "patterns": rows,
    }


def ic_report_to_dict(report: ICReport) -> dict:
    return {
        "concept": report.concept.value,
        "p_alpha": _rational_pair(report.p_alpha),
        "ic": report.ic_value,
    }
