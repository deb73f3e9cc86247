"""Streaming N-Triples reader and canonical writer.

The reader works line by line: every line is an independent statement,
so one bad line never poisons the rest of the file. In lenient mode
(the default) problems are collected as `ParseIssue` records with their
line numbers; strict mode raises on the first one.

Blank node labels are rewritten on parse to fresh document-scoped
names. The rewrite is deterministic for a fixed sequence of parse
calls, so repeated runs over the same inputs produce identical graphs.

The writer is canonical: one statement per line, UTF-8, lines sorted
bytewise. This keeps cache files diffable and fixtures stable.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator, Union

from .errors import SemrichError
from .graph import Graph
from .terms import BlankNode, IRI, Literal, Term, Triple

Source = Union[bytes, str, IO[bytes], IO[str]]

_WS = " \t"
_ECHAR = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}
_LANG_AT = re.compile(r"@([A-Za-z]{1,8}(?:-[A-Za-z0-9]{1,8})*)")

# Every parse call takes the next id; labels become "d<doc>b<n>".
_doc_counter = itertools.count()


@dataclass(frozen=True, slots=True)
class ParseIssue:
    """One rejected line: where, what category, and why."""

    line: int
    category: str
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.category}: {self.message}"


class NTriplesParseError(SemrichError):
    def __init__(self, issue: ParseIssue) -> None:
        super().__init__(str(issue))
        self.issue = issue


@dataclass(slots=True)
class ParseResult:
    graph: Graph
    issues: list[ParseIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues


class _LineError(Exception):
    def __init__(self, category: str, message: str) -> None:
        super().__init__(message)
        self.category = category
        self.message = message


def _skip_ws(line: str, i: int) -> int:
    n = len(line)
    while i < n and line[i] in _WS:
        i += 1
    return i


def _scan_uchar(line: str, i: int, category: str) -> tuple[str, int]:
    # line[i] is the backslash
    if i + 1 >= len(line):
        raise _LineError("bad-escape", "dangling backslash")
    kind = line[i + 1]
    width = 4 if kind == "u" else 8 if kind == "U" else 0
    if not width:
        raise _LineError("bad-escape", f"\\{kind} is not a valid escape here")
    digits = line[i + 2 : i + 2 + width]
    if len(digits) < width or any(c not in "0123456789abcdefABCDEF" for c in digits):
        raise _LineError("bad-escape", f"malformed \\{kind} escape")
    code = int(digits, 16)
    if code > 0x10FFFF:
        raise _LineError("bad-escape", f"code point U+{digits} out of range")
    return chr(code), i + 2 + width


def _scan_iri(line: str, i: int) -> tuple[IRI, int]:
    # line[i] == '<'
    j = i + 1
    out: list[str] = []
    n = len(line)
    while j < n:
        ch = line[j]
        if ch == ">":
            try:
                return IRI("".join(out)), j + 1
            except ValueError as exc:
                raise _LineError("malformed-iri", str(exc)) from None
        if ch == "\\":
            decoded, j = _scan_uchar(line, j, "malformed-iri")
            out.append(decoded)
            continue
        if ch in ' \t"<{}|^`' or ord(ch) <= 0x20:
            raise _LineError("malformed-iri", f"character {ch!r} not allowed in IRI")
        out.append(ch)
        j += 1
    raise _LineError("malformed-iri", "unterminated IRI (missing '>')")


def _scan_bnode(line: str, i: int) -> tuple[BlankNode, int]:
    if line[i : i + 2] != "_:":
        raise _LineError("malformed-statement", "expected blank node '_:'")
    m = re.match(r"[A-Za-z0-9_][A-Za-z0-9_.-]*", line[i + 2 :])
    if not m:
        raise _LineError("malformed-statement", "blank node without a label")
    label = m.group(0)
    # A trailing dot belongs to the statement, not the label.
    while label.endswith("."):
        label = label[:-1]
    if not label:
        raise _LineError("malformed-statement", "blank node without a label")
    return BlankNode(label), i + 2 + len(label)


def _scan_literal(line: str, i: int) -> tuple[Literal, int]:
    # line[i] == '"'
    j = i + 1
    out: list[str] = []
    n = len(line)
    while j < n:
        ch = line[j]
        if ch == '"':
            lexical = "".join(out)
            j += 1
            if j < n and line[j] == "@":
                m = _LANG_AT.match(line, j)
                if not m:
                    raise _LineError("malformed-statement", "invalid language tag")
                return Literal(lexical, language=m.group(1)), m.end()
            if line[j : j + 2] == "^^":
                if j + 2 >= n or line[j + 2] != "<":
                    raise _LineError("malformed-iri", "datatype must be an IRI")
                dtype, j = _scan_iri(line, j + 2)
                return Literal(lexical, datatype=dtype), j
            return Literal(lexical), j
        if ch == "\\":
            nxt = line[j + 1] if j + 1 < n else ""
            if nxt in _ECHAR:
                out.append(_ECHAR[nxt])
                j += 2
            elif nxt in "uU":
                decoded, j = _scan_uchar(line, j, "bad-escape")
                out.append(decoded)
            else:
                raise _LineError("bad-escape", f"\\{nxt} is not a valid string escape")
        else:
            out.append(ch)
            j += 1
    raise _LineError("unterminated-literal", "literal missing closing quote")


def _parse_statement(line: str) -> Triple | None:
    """One line -> Triple, or None for blank/comment lines."""
    i = _skip_ws(line, 0)
    n = len(line)
    if i >= n or line[i] == "#":
        return None

    if line[i] == "<":
        subject, i = _scan_iri(line, i)
    elif line[i] == "_":
        subject, i = _scan_bnode(line, i)
    else:
        raise _LineError("malformed-statement", "subject must be an IRI or blank node")

    i = _skip_ws(line, i)
    if i >= n:
        raise _LineError("malformed-statement", "statement ends after subject")
    if line[i] == "<":
        predicate, i = _scan_iri(line, i)
    elif line[i] == "_" or line[i] == '"':
        raise _LineError("non-iri-predicate", "predicate must be an IRI")
    else:
        raise _LineError("malformed-statement", "expected predicate IRI")

    i = _skip_ws(line, i)
    if i >= n:
        raise _LineError("malformed-statement", "statement ends after predicate")
    if line[i] == "<":
        obj, i = _scan_iri(line, i)
    elif line[i] == "_":
        obj, i = _scan_bnode(line, i)
    elif line[i] == '"':
        obj, i = _scan_literal(line, i)
    else:
        raise _LineError("malformed-statement", "object must be an IRI, blank node, or literal")

    i = _skip_ws(line, i)
    if i >= n or line[i] != ".":
        raise _LineError("malformed-statement", "missing terminating '.'")
    i = _skip_ws(line, i + 1)
    if i < n and line[i] != "#":
        raise _LineError("malformed-statement", "unexpected content after '.'")

    return Triple(subject, predicate, obj)


def _iter_lines(source: Source) -> Iterator[str]:
    if isinstance(source, bytes):
        yield from source.decode("utf-8").splitlines()
        return
    if isinstance(source, str):
        yield from source.splitlines()
        return
    for raw in source:
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        yield raw.rstrip("\r\n")


def parse_ntriples(source: Source, strict: bool = False) -> ParseResult:
    """Parse N-Triples from bytes, text, or a file object.

    Lenient mode returns every well-formed statement plus a list of
    per-line issues; strict mode raises NTriplesParseError at the first
    bad line.
    """
    doc = next(_doc_counter)
    relabel: dict[str, BlankNode] = {}

    def fresh(node: BlankNode) -> BlankNode:
        got = relabel.get(node.label)
        if got is None:
            got = BlankNode(f"d{doc}b{len(relabel)}")
            relabel[node.label] = got
        return got

    triples: list[Triple] = []
    issues: list[ParseIssue] = []
    for lineno, line in enumerate(_iter_lines(source), start=1):
        try:
            t = _parse_statement(line)
        except _LineError as exc:
            issue = ParseIssue(lineno, exc.category, exc.message)
            if strict:
                raise NTriplesParseError(issue) from None
            issues.append(issue)
            continue
        except UnicodeDecodeError as exc:
            issue = ParseIssue(lineno, "bad-encoding", str(exc))
            if strict:
                raise NTriplesParseError(issue) from None
            issues.append(issue)
            continue
        if t is None:
            continue
        if isinstance(t.subject, BlankNode) or isinstance(t.object, BlankNode):
            s = fresh(t.subject) if isinstance(t.subject, BlankNode) else t.subject
            o = fresh(t.object) if isinstance(t.object, BlankNode) else t.object
            t = Triple(s, t.predicate, o)
        triples.append(t)
    return ParseResult(Graph(triples), issues)


def parse_term(text: str) -> Term:
    """Parse a single N-Triples term ("<iri>", "_:b", or a literal)."""
    text = text.strip()
    if not text:
        raise ValueError("empty term")
    try:
        if text[0] == "<":
            term, end = _scan_iri(text, 0)
        elif text[0] == "_":
            term, end = _scan_bnode(text, 0)
        elif text[0] == '"':
            term, end = _scan_literal(text, 0)
        else:
            raise _LineError("malformed-statement", f"not a term: {text!r}")
    except _LineError as exc:
        raise ValueError(f"{exc.category}: {exc.message}") from None
    if text[end:].strip():
        raise ValueError(f"trailing content after term: {text!r}")
    return term


def _escape_literal(text: str) -> str:
    out: list[str] = []
    for ch in text:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def format_term(term: Term) -> str:
    if isinstance(term, IRI):
        return f"<{term.value}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    body = f'"{_escape_literal(term.lexical)}"'
    if term.language:
        return f"{body}@{term.language}"
    if term.datatype:
        return f"{body}^^<{term.datatype.value}>"
    return body


def format_triple(triple: Triple) -> str:
    return f"{format_term(triple.subject)} {format_term(triple.predicate)} {format_term(triple.object)} ."


def serialize_ntriples(graph_or_triples: Graph | Iterable[Triple]) -> bytes:
    """Canonical N-Triples bytes: sorted lines, one statement each."""
    lines = sorted(format_triple(t).encode("utf-8") for t in graph_or_triples)
    if not lines:
        return b""
    return b"\n".join(lines) + b"\n"
