"""Shared exception types."""

from __future__ import annotations


class SemrichError(Exception):
    """Base class for all library errors."""


class EmptyProfileError(SemrichError):
    """An operation needed entities but the profile (or concept) has none."""


class ConceptMismatchError(SemrichError):
    """Two profiles for different concepts cannot be merged."""


class EntityOverlapError(SemrichError):
    """Entity sets were required to be disjoint but share members."""

    def __init__(self, message: str, overlap: frozenset = frozenset()) -> None:
        super().__init__(message)
        self.overlap = overlap


class UndefinedTypicalityError(SemrichError):
    """Typicality is undefined when the characteristic set is empty."""


class SubconceptError(SemrichError):
    """Sub-concept induction could not proceed (name in use, empty basis)."""


class RichnessRegressionError(SemrichError):
    """Diagnostic: an induced sub-concept came out poorer than its parent."""


class EndpointError(SemrichError):
    """A SPARQL endpoint kept failing after all retries."""


class AcquisitionFailure(SemrichError):
    """Every configured endpoint failed; nothing was acquired."""
