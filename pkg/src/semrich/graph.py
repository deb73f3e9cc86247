"""Immutable in-memory triple store with subject and class indexes.

A Graph is a set of triples: inserting a duplicate changes nothing.
After construction it never mutates, so it is safe to share between
threads; "updates" (union, with_triples) build new graphs.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .terms import RDF_TYPE, BlankNode, IRI, Term, Triple


class Graph:
    __slots__ = ("_triples", "_by_subject", "_type_index", "_typed")

    def __init__(self, triples: Iterable[Triple] = ()) -> None:
        tset = frozenset(triples)
        by_subject: dict[Term, list[Triple]] = {}
        type_index: dict[Term, set[Term]] = {}
        for t in tset:
            by_subject.setdefault(t.subject, []).append(t)
            if t.predicate == RDF_TYPE:
                type_index.setdefault(t.object, set()).add(t.subject)
        self._triples = tset
        self._by_subject = {s: tuple(ts) for s, ts in by_subject.items()}
        self._type_index = {c: frozenset(ss) for c, ss in type_index.items()}
        typed: set[Term] = set()
        for ss in self._type_index.values():
            typed.update(ss)
        self._typed = frozenset(typed)

    @property
    def triples(self) -> frozenset[Triple]:
        return self._triples

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def __hash__(self) -> int:
        return hash(self._triples)

    def __repr__(self) -> str:
        return f"Graph({len(self._triples)} triples)"

    def triples_for(self, subject: Term) -> tuple[Triple, ...]:
        """All triples with the given subject (the entity's outgoing edges)."""
        return self._by_subject.get(subject, ())

    def entities_of_type(self, concept: IRI) -> frozenset[Term]:
        """Subjects of (?, rdf:type, concept) triples; asserted types only."""
        return self._type_index.get(concept, frozenset())

    def typed_subjects(self) -> frozenset[Term]:
        """Subjects bearing at least one rdf:type assertion."""
        return self._typed

    def classes(self) -> frozenset[Term]:
        """Every term used as the object of an rdf:type triple."""
        return frozenset(self._type_index)

    def union(self, other: Graph) -> Graph:
        """Set union of two graphs.

        Blank node label spaces must already be distinct (the parser
        guarantees this for separately parsed files).
        """
        return Graph(self._triples | other._triples)

    def with_triples(self, extra: Iterable[Triple]) -> Graph:
        return Graph(self._triples.union(extra))


def _has_bnode(t: Triple) -> bool:
    return isinstance(t.subject, BlankNode) or isinstance(t.object, BlankNode)


def _bnode_signature(node: BlankNode, triples: list[Triple]) -> tuple:
    sig = []
    for t in triples:
        s = "*" if isinstance(t.subject, BlankNode) else t.subject
        o = "*" if isinstance(t.object, BlankNode) else t.object
        if t.subject == node:
            sig.append(("s", t.predicate, o))
        if t.object == node:
            sig.append(("o", t.predicate, s))
    return tuple(sorted(sig, key=repr))


def isomorphic(a: Graph, b: Graph) -> bool:
    """Graph equality up to a bijective renaming of blank nodes.

    Ground triples must match exactly. Intended for test-scale graphs:
    the blank node matching backtracks and is exponential in the worst
    case.
    """
    ground_a = {t for t in a if not _has_bnode(t)}
    ground_b = {t for t in b if not _has_bnode(t)}
    if ground_a != ground_b:
        return False
    rest_a = [t for t in a if _has_bnode(t)]
    rest_b = [t for t in b if _has_bnode(t)]
    if len(rest_a) != len(rest_b):
        return False
    if not rest_a:
        return True

    def bnodes(triples: list[Triple]) -> list[BlankNode]:
        seen: dict[BlankNode, None] = {}
        for t in triples:
            if isinstance(t.subject, BlankNode):
                seen.setdefault(t.subject, None)
            if isinstance(t.object, BlankNode):
                seen.setdefault(t.object, None)
        return list(seen)

    nodes_a = bnodes(rest_a)
    nodes_b = bnodes(rest_b)
    if len(nodes_a) != len(nodes_b):
        return False

    sig_a = {n: _bnode_signature(n, rest_a) for n in nodes_a}
    sig_b = {n: _bnode_signature(n, rest_b) for n in nodes_b}
    candidates = {n: [m for m in nodes_b if sig_b[m] == sig_a[n]] for n in nodes_a}
    if any(not c for c in candidates.values()):
        return False

    target = set(rest_b)
    order = sorted(nodes_a, key=lambda n: len(candidates[n]))

    def rename(t: Triple, mapping: dict[BlankNode, BlankNode]) -> Triple:
        s = mapping.get(t.subject, t.subject) if isinstance(t.subject, BlankNode) else t.subject
        o = mapping.get(t.object, t.object) if isinstance(t.object, BlankNode) else t.object
        return Triple(s, t.predicate, o)

    def assign(i: int, mapping: dict[BlankNode, BlankNode], used: set[BlankNode]) -> bool:
        if i == len(order):
            return {rename(t, mapping) for t in rest_a} == target
        n = order[i]
        for m in candidates[n]:
            if m in used:
                continue
            mapping[n] = m
            used.add(m)
            if assign(i + 1, mapping, used):
                return True
            del mapping[n]
            used.discard(m)
        return False

    return assign(0, {}, set())
