"""RDF terms and triples.

The data model follows N-Triples: IRIs, blank nodes, and literals.
Term equality is lexical throughout ("01" and "1" are different
literals); no value-space normalization happens anywhere, so pattern
counts stay deterministic across serializations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

XSD_STRING = "http://www.w3.org/2001/XMLSchema#string"

# Characters that may never appear in an IRI: whitespace, angle brackets,
# quotes, and the other IRIREF exclusions.
_IRI_BAD = re.compile("[" + re.escape("".join(map(chr, range(0x21))) + '<>"{}|^`' + chr(0x5C)) + "]")

_LANG_TAG = re.compile(r"^[A-Za-z]{1,8}(-[A-Za-z0-9]{1,8})*$")

_BNODE_LABEL = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_.-]*$")


@dataclass(frozen=True, slots=True)
class IRI:
    """An absolute IRI reference."""

    value: str

    def __post_init__(self) -> None:
        if not self.value:
            raise ValueError("IRI must be non-empty")
        bad = _IRI_BAD.search(self.value)
        if bad:
            raise ValueError(
                f"IRI contains forbidden character {bad.group(0)!r}: {self.value!r}"
            )

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class BlankNode:
    """A blank node with a document-scoped label.

    Labels carry no identity beyond the document they were read from;
    the parser rewrites them so two separately parsed files can never
    collide on a label.
    """

    label: str

    def __post_init__(self) -> None:
        if not _BNODE_LABEL.match(self.label) or self.label.endswith("."):
            raise ValueError(f"invalid blank node label: {self.label!r}")

    def __str__(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True, slots=True)
class Literal:
    """A literal with a lexical form and at most one of datatype/language.

    An explicit xsd:string datatype is normalized away: a plain literal
    and one typed xsd:string are the same term.
    """

    lexical: str
    datatype: IRI | None = None
    language: str | None = None

    def __post_init__(self) -> None:
        if self.language is not None:
            if self.datatype is not None:
                raise ValueError("literal cannot carry both a datatype and a language tag")
            if not _LANG_TAG.match(self.language):
                raise ValueError(f"invalid language tag: {self.language!r}")
        elif self.datatype is not None and self.datatype.value == XSD_STRING:
            object.__setattr__(self, "datatype", None)

    def __str__(self) -> str:
        if self.language:
            return f'"{self.lexical}"@{self.language}'
        if self.datatype:
            return f'"{self.lexical}"^^{self.datatype}'
        return f'"{self.lexical}"'


Term = IRI | BlankNode | Literal

RDF_TYPE = IRI("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")
RDFS_SUBCLASS_OF = IRI("http://www.w3.org/2000/01/rdf-schema#subClassOf")


@dataclass(frozen=True, slots=True)
class Triple:
    """One RDF statement. The predicate is always an IRI."""

    subject: IRI | BlankNode
    predicate: IRI
    object: Term

    def __post_init__(self) -> None:
        if not isinstance(self.subject, (IRI, BlankNode)):
            raise TypeError(f"triple subject must be an IRI or blank node, got {self.subject!r}")
        if not isinstance(self.predicate, IRI):
            raise TypeError(f"triple predicate must be an IRI, got {self.predicate!r}")
        if not isinstance(self.object, (IRI, BlankNode, Literal)):
            raise TypeError(f"triple object must be a term, got {self.object!r}")


def term_sort_key(term: Term) -> tuple:
    """Deterministic total order over terms: IRIs, then blank nodes, then literals."""
    if isinstance(term, IRI):
        return (0, term.value)
    if isinstance(term, BlankNode):
        return (1, term.label)
    return (2, term.lexical, term.datatype.value if term.datatype else "", term.language or "")


def triple_sort_key(triple: Triple) -> tuple:
    return (
        term_sort_key(triple.subject),
        term_sort_key(triple.predicate),
        term_sort_key(triple.object),
    )
