"""Decay-curve and tree-report drivers."""

from __future__ import annotations

from fractions import Fraction

import pytest

from semrich import EntityOverlapError, Graph, IRI, RDF_TYPE, SemrichError, Triple
from semrich.experiments import decay_curves, decay_result_to_dict, tree_report
from semrich.synth import OntologySpec, SourceSpec, generate_source
from conftest import CONCEPT, PAT_A, PAT_B, PAT_C


class TestDecayCurves:
    def test_d1_d2_chunk3(self, d1_graph, d2_graph):
        result = decay_curves(
            [("d1", d1_graph), ("d2", d2_graph)], CONCEPT, chunk_size=3, seed=0
        )
        by_base = {c.base: c for c in result.curves}
        assert [(s.entities_added, s.g) for s in by_base["d1"].steps] == [
            (0, Fraction(4, 3)),
            (3, Fraction(1, 3)),
        ]
        assert [(s.entities_added, s.g) for s in by_base["d2"].steps] == [
            (0, Fraction(1, 3)),
            (3, Fraction(1, 3)),
        ]
        assert result.merged_g == Fraction(1, 3)
        assert result.weighted_average == Fraction(5, 6)

    def test_every_curve_ends_at_merged_g(self, d1_graph, d2_graph):
        for chunk in (1, 2, 5):
            for seed in (0, 1, 42):
                result = decay_curves(
                    [("d1", d1_graph), ("d2", d2_graph)],
                    CONCEPT, chunk_size=chunk, seed=seed,
                )
                assert {c.final_g for c in result.curves} == {result.merged_g}

    def test_single_source_rejected(self, d1_graph):
        with pytest.raises(SemrichError):
            decay_curves([("d1", d1_graph)], CONCEPT)

    def test_source_without_concept_rejected(self, d1_graph):
        with pytest.raises(SemrichError):
            decay_curves([("d1", d1_graph), ("empty", Graph())], CONCEPT)

    def test_overlap_names_offenders(self, d1_graph):
        with pytest.raises(EntityOverlapError) as err:
            decay_curves([("a", d1_graph), ("b", d1_graph)], CONCEPT)
        assert "e1" in str(err.value)

    def test_incremental_matches_graph_rebuild(self, d1_graph, d2_graph):
        # Chunk size 1 gives a G value after every single addition; each
        # prefix must agree with a from-scratch profile over those graphs.
        from random import Random

        from semrich import build_profile, entity_features, richness
        from semrich.experiments import _MIX
        from semrich.terms import term_sort_key

        result = decay_curves(
            [("d1", d1_graph), ("d2", d2_graph)], CONCEPT, chunk_size=1, seed=3
        )
        curve = result.curves[0]
        base_profile = build_profile(d1_graph, CONCEPT)
        foreign_profile = build_profile(d2_graph, CONCEPT)
        foreign = [
            (e, entity_features(d2_graph, e, CONCEPT))
            for e in sorted(foreign_profile.entities, key=term_sort_key)
        ]
        Random(3 * _MIX + 0).shuffle(foreign)
        for step in curve.steps:
            counts = dict(base_profile.counts)
            for _, feats in foreign[: step.entities_added]:
                for pattern in feats:
                    counts[pattern] = counts.get(pattern, 0) + 1
            from semrich import g_from_counts

            assert step.g == g_from_counts(counts, base_profile.total + step.entities_added)

    def test_json_export_shape(self, d1_graph, d2_graph):
        result = decay_curves(
            [("d1", d1_graph), ("d2", d2_graph)], CONCEPT, chunk_size=3
        )
        doc = decay_result_to_dict(result)
        assert doc["merged_g"]["exact"] == "1/3"
        assert doc["weighted_average"]["exact"] == "5/6"
        assert {c["base"] for c in doc["curves"]} == {"d1", "d2"}


def synth_sources(count: int, entities: int = 50) -> list[tuple[str, Graph]]:
    shared = [PAT_A, PAT_B, PAT_C]
    sources = []
    for k in range(count):
        patterns = [(shared[k % 3], Fraction(9, 10)), (shared[(k + 1) % 3], Fraction(1, 4))]
        unique = SourceSpec(
            concept=CONCEPT,
            n_entities=entities,
            patterns=patterns
            + [
                (
                    __import__("semrich").Pattern(
                        IRI(f"http://t.example/u{k}"), IRI("http://t.example/v")
                    ),
                    Fraction(1),
                )
            ],
            seed=100 + k,
            name=f"src{k}",
        )
        sources.append((f"src{k}", generate_source(unique)))
    return sources


class TestDecayOnSyntheticSources:
    def test_common_final_below_weighted_average(self):
        result = decay_curves(synth_sources(4), CONCEPT, chunk_size=25, seed=9)
        finals = {c.final_g for c in result.curves}
        assert finals == {result.merged_g}
        assert result.merged_g < result.weighted_average


class TestTreeReport:
    def test_missing_root_rejected(self, d1_graph):
        with pytest.raises(SemrichError):
            tree_report(d1_graph, IRI("http://example.org/absent"))

    def test_single_node_tree(self, d1_graph):
        report = tree_report(d1_graph, CONCEPT)
        assert report.edges == ()
        assert report.fraction_increasing is None
        assert report.concept_g[CONCEPT] == Fraction(4, 3)

    def test_capped_sampling_is_deterministic(self):
        spec = OntologySpec(depth=1, branching=2, entities_per_leaf=30, seed=2)
        from semrich.synth import generate_ontology

        g = generate_ontology(spec)
        root = spec.concept_iri(())
        first = tree_report(g, root, cap=10, seed=4)
        second = tree_report(g, root, cap=10, seed=4)
        assert first.concept_g == second.concept_g
        assert all(total <= 10 for total in first.concept_totals.values())

    def test_edges_need_entities_on_both_ends(self):
        empty_child = IRI("http://example.org/childless")
        g = Graph(
            [
                Triple(IRI("http://example.org/e1"), RDF_TYPE, CONCEPT),
                Triple(IRI("http://example.org/e1"), PAT_A.predicate, PAT_A.object),
                Triple(empty_child, IRI("http://www.w3.org/2000/01/rdf-schema#subClassOf"), CONCEPT),
            ]
        )
        report = tree_report(g, CONCEPT)
        assert report.edges == ()
        assert report.fraction_increasing is None
