"""Terms, triples, and the immutable graph."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semrich import (
    RDF_TYPE,
    BlankNode,
    Graph,
    IRI,
    Literal,
    Triple,
    isomorphic,
)

C = IRI("http://example.org/C")
D = IRI("http://example.org/D")
P = IRI("http://example.org/p")
O = IRI("http://example.org/o")


class TestTerms:
    def test_iri_rejects_whitespace_and_brackets(self):
        for bad in ("", "a b", "a\tb", "a<b", "a>b", 'a"b'):
            with pytest.raises(ValueError):
                IRI(bad)

    def test_literal_equality_is_lexical(self):
        assert Literal("01") != Literal("1")
        assert Literal("x", language="en") != Literal("x")
        assert Literal("x") == Literal("x")

    def test_literal_rejects_datatype_plus_language(self):
        with pytest.raises(ValueError):
            Literal("x", datatype=IRI("http://example.org/dt"), language="en")

    def test_xsd_string_is_the_plain_literal(self):
        typed = Literal("x", datatype=IRI("http://www.w3.org/2001/XMLSchema#string"))
        assert typed == Literal("x")
        assert typed.datatype is None

    def test_predicate_must_be_iri(self):
        with pytest.raises(TypeError):
            Triple(C, BlankNode("b"), O)
        with pytest.raises(TypeError):
            Triple(C, Literal("p"), O)

    def test_literal_subject_rejected(self):
        with pytest.raises(TypeError):
            Triple(Literal("s"), P, O)


def entity(name: str) -> IRI:
    return IRI(f"http://example.org/{name}")


class TestGraph:
    def test_duplicate_insertion_is_noop(self):
        t = Triple(entity("e"), P, O)
        assert Graph([t, t, t]) == Graph([t])
        assert len(Graph([t, t])) == 1

    def test_entities_of_type(self):
        triples = [Triple(entity(f"e{i}"), RDF_TYPE, C) for i in range(3)]
        triples.append(Triple(entity("x"), RDF_TYPE, D))
        g = Graph(triples)
        assert g.entities_of_type(C) == {entity("e0"), entity("e1"), entity("e2")}
        assert g.entities_of_type(D) == {entity("x")}

    def test_missing_concept_yields_empty_set(self):
        g = Graph([Triple(entity("e"), P, O)])
        assert g.entities_of_type(C) == frozenset()

    def test_multi_typed_entity_appears_in_both(self):
        e = entity("both")
        g = Graph([Triple(e, RDF_TYPE, C), Triple(e, RDF_TYPE, D)])
        assert e in g.entities_of_type(C)
        assert e in g.entities_of_type(D)

    def test_union_identity_and_idempotence(self):
        g = Graph([Triple(entity("e"), P, O)])
        assert g.union(Graph()) == g
        assert g.union(g) == g

    def test_union_counts_shared_triples_once(self):
        shared = Triple(entity("s"), P, O)
        g1 = Graph([shared, Triple(entity("a"), P, O), Triple(entity("b"), P, O)])
        g2 = Graph([shared, Triple(entity("c"), P, O), Triple(entity("d"), P, O)])
        assert len(g1.union(g2)) == 5

    def test_typed_subjects(self):
        e, f = entity("e"), entity("f")
        g = Graph([Triple(e, RDF_TYPE, C), Triple(f, P, O)])
        assert g.typed_subjects() == {e}

    def test_with_triples_leaves_original_untouched(self):
        g = Graph()
        g2 = g.with_triples([Triple(entity("e"), P, O)])
        assert len(g) == 0 and len(g2) == 1


def _small_graphs():
    subjects = st.sampled_from([entity(n) for n in "abc"])
    predicates = st.sampled_from([P, IRI("http://example.org/q")])
    objects = st.sampled_from([O, Literal("1"), Literal("x", language="en")])
    triples = st.builds(Triple, subjects, predicates, objects)
    return st.lists(triples, max_size=8).map(Graph)


@given(_small_graphs(), _small_graphs(), _small_graphs())
def test_union_is_commutative_and_associative(g1, g2, g3):
    assert g1.union(g2) == g2.union(g1)
    assert g1.union(g2).union(g3) == g1.union(g2.union(g3))


class TestIsomorphism:
    def test_equal_ground_graphs(self):
        g = Graph([Triple(entity("e"), P, O)])
        assert isomorphic(g, g)

    def test_blank_relabeling_is_isomorphic(self):
        g1 = Graph([Triple(BlankNode("a"), P, O), Triple(entity("e"), P, BlankNode("a"))])
        g2 = Graph([Triple(BlankNode("z"), P, O), Triple(entity("e"), P, BlankNode("z"))])
        assert isomorphic(g1, g2)

    def test_structure_difference_detected(self):
        g1 = Graph([Triple(BlankNode("a"), P, O), Triple(BlankNode("b"), P, O)])
        g2 = Graph([Triple(BlankNode("a"), P, O), Triple(BlankNode("a"), RDF_TYPE, C)])
        assert not isomorphic(g1, g2)

    def test_ground_mismatch_detected(self):
        g1 = Graph([Triple(entity("e"), P, O)])
        g2 = Graph([Triple(entity("f"), P, O)])
        assert not isomorphic(g1, g2)
