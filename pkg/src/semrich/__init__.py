"""Exact semantic-richness measures for RDF concepts.

The library profiles which ⟨predicate, object⟩ patterns a concept's
entities carry, measures how well the frequent ones characterize the
concept (all in exact rational arithmetic), verifies that merging
disjoint datasets never increases that measure, and scores how typical
individual entities are. Supporting pieces: an N-Triples parser and
canonical writer, a SPARQL acquisition client with an on-disk cache,
deterministic synthetic data generators, and a CLI.
"""

from .errors import (
    AcquisitionFailure,
    ConceptMismatchError,
    EmptyProfileError,
    EndpointError,
    EntityOverlapError,
    RichnessRegressionError,
    SemrichError,
    SubconceptError,
    UndefinedTypicalityError,
)
from .graph import Graph, isomorphic
from .ntriples import (
    NTriplesParseError,
    ParseIssue,
    ParseResult,
    format_term,
    format_triple,
    parse_ntriples,
    parse_term,
    serialize_ntriples,
)
from .profile import (
    ConceptProfile,
    Pattern,
    Probability,
    build_profile,
    dump_profile,
    entity_features,
    load_profile,
    merge_profiles,
    pattern_probability,
)
from .richness import (
    ICReport,
    MergeCase,
    RichnessReport,
    TheoremCheck,
    characteristic_set,
    expected_pattern_count,
    g_from_counts,
    information_content,
    pattern_richness,
    richness,
    verify_decay,
    weighted_average_richness,
)
from .terms import RDF_TYPE, RDFS_SUBCLASS_OF, BlankNode, IRI, Literal, Term, Triple
from .typicality import (
    CandidateScore,
    TypicalityScore,
    induce_subconcept,
    more_typical,
    richness_delta_on_add,
    score_candidates,
    typicality,
)

__version__ = "0.1.0"

__all__ = [
    "AcquisitionFailure",
    "BlankNode",
    "CandidateScore",
    "ConceptMismatchError",
    "ConceptProfile",
    "EmptyProfileError",
    "EndpointError",
    "EntityOverlapError",
    "Graph",
    "ICReport",
    "IRI",
    "Literal",
    "MergeCase",
    "NTriplesParseError",
    "ParseIssue",
    "ParseResult",
    "Pattern",
    "Probability",
    "RDF_TYPE",
    "RDFS_SUBCLASS_OF",
    "RichnessRegressionError",
    "RichnessReport",
    "SemrichError",
    "SubconceptError",
    "Term",
    "TheoremCheck",
    "Triple",
    "TypicalityScore",
    "UndefinedTypicalityError",
    "build_profile",
    "characteristic_set",
    "dump_profile",
    "entity_features",
    "expected_pattern_count",
    "format_term",
    "format_triple",
    "g_from_counts",
    "induce_subconcept",
    "information_content",
    "isomorphic",
    "load_profile",
    "merge_profiles",
    "more_typical",
    "parse_ntriples",
    "parse_term",
    "pattern_probability",
    "pattern_richness",
    "richness",
    "richness_delta_on_add",
    "score_candidates",
    "serialize_ntriples",
    "typicality",
    "verify_decay",
    "weighted_average_richness",
]
