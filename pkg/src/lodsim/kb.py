"""In-memory RDF knowledge base with full subject/object/typing indexes.

Triples are read from N-Triples files (one triple per line, UTF-8) and held
in an immutable, dictionary-encoded store: every term is interned to a
compact integer id assigned in canonical term order, so set and distance
computations downstream run on integers. Typing (``rdf:type``) and
subsumption (``rdfs:subClassOf``) edges are indexed separately from the
ordinary properties ``Pr``.

Blank nodes are compared by label within one load; identity of blank nodes
across files is undefined.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
RDFS_SUBCLASSOF = "http://www.w3.org/2000/01/rdf-schema#subClassOf"


@dataclass(frozen=True, slots=True)
class IRI:
    """An absolute IRI. Must be non-empty and contain no whitespace."""

    value: str

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class BlankNode:
    label: str

    def __str__(self) -> str:
        return "_:" + self.label


@dataclass(frozen=True, slots=True)
class Literal:
    """A literal value: lexical form plus optional datatype IRI or language tag."""

    lexical: str
    datatype: str | None = None
    language: str | None = None

    def __str__(self) -> str:
        return self.lexical


Term = IRI | BlankNode | Literal


class Triple(NamedTuple):
    subject: Term
    predicate: Term
    object: Term


def term_sort_key(term: Term) -> tuple:
    """Canonical ordering: IRIs, then blank nodes, then literals."""
    if isinstance(term, IRI):
        return (0, term.value)
    if isinstance(term, BlankNode):
        return (1, term.label)
    return (2, term.lexical, term.datatype or "", term.language or "")


# --- N-Triples parsing ----------------------------------------------------

@dataclass(frozen=True)
class ParseDiagnostic:
    """One problem found while parsing; ``line`` is 1-based."""

    line: int
    reason: str
    text: str = ""

    def __str__(self) -> str:
        return f"line {self.line}: {self.reason}"


class ParseError(Exception):
    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = diagnostics
        first = diagnostics[0] if diagnostics else None
        super().__init__(
            f"{len(diagnostics)} parse error(s); first: {first}" if first else "parse error"
        )


_IRIREF = re.compile(r'<([^\x00-\x20<>"{}|^`\\]*)>')
_BNODE = re.compile(r"_:([A-Za-z0-9_][A-Za-z0-9_.\-]*)")
_STRING = re.compile(r'"((?:[^"\\\n\r]|\\.)*)"')
_LANGTAG = re.compile(r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)")
_UCHAR = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8}))")
_ECHARS = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def _unescape_iri(raw: str) -> str:
    return _UCHAR.sub(lambda m: chr(int(m.group(1) or m.group(2), 16)), raw)


def _unescape_literal(raw: str) -> str:
    out: list[str] = []
    i = 0
    while i < len(raw):
        ch = raw[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(raw):
            raise ValueError("dangling backslash in literal")
        nxt = raw[i + 1]
        if nxt in _ECHARS:
            out.append(_ECHARS[nxt])
            i += 2
        elif nxt in ("u", "U"):
            m = _UCHAR.match(raw, i)
            if not m:
                raise ValueError(f"bad unicode escape at offset {i}")
            out.append(chr(int(m.group(1) or m.group(2), 16)))
            i = m.end()
        else:
            raise ValueError(f"unknown escape \\{nxt}")
    return "".join(out)


def _skip_ws(line: str, pos: int) -> int:
    while pos < len(line) and line[pos] in " \t":
        pos += 1
    return pos


def _parse_term(line: str, pos: int, *, what: str) -> tuple[Term, int]:
    """Parse one term starting at ``pos``; returns (term, next position)."""
    if pos >= len(line):
        raise ValueError(f"missing {what}")
    ch = line[pos]
    if ch == "<":
        m = _IRIREF.match(line, pos)
        if not m:
            raise ValueError(f"malformed IRI in {what}")
        value = _unescape_iri(m.group(1))
        if not value or any(c.isspace() for c in value):
            raise ValueError(f"empty or whitespace-containing IRI in {what}")
        return IRI(value), m.end()
    if ch == "_":
        m = _BNODE.match(line, pos)
        if not m:
            raise ValueError(f"malformed blank node label in {what}")
        label = m.group(1)
        if label.endswith("."):
            label = label.rstrip(".")
            return BlankNode(label), pos + 2 + len(label)
        return BlankNode(label), m.end()
    if ch == '"':
        m = _STRING.match(line, pos)
        if not m:
            raise ValueError(f"malformed string literal in {what}")
        lexical = _unescape_literal(m.group(1))
        end = m.end()
        if line.startswith("^^", end):
            dt = _IRIREF.match(line, end + 2)
            if not dt:
                raise ValueError("malformed datatype IRI after ^^")
            return Literal(lexical, datatype=_unescape_iri(dt.group(1))), dt.end()
        if line.startswith("@", end):
            lt = _LANGTAG.match(line, end)
            if not lt:
                raise ValueError("malformed language tag")
            return Literal(lexical, language=lt.group(1)), lt.end()
        return Literal(lexical), end
    raise ValueError(f"unexpected character {ch!r} in {what}")


def parse_ntriples_line(line: str) -> Triple | None:
    """Parse a single N-Triples line; ``None`` for blank/comment lines.

    Raises ValueError with a human-readable reason on malformed input.
    """
    pos = _skip_ws(line, 0)
    if pos >= len(line) or line[pos] == "#":
        return None
    subject, pos = _parse_term(line, pos, what="subject")
    if isinstance(subject, Literal):
        raise ValueError("literal not allowed as subject")
    pos = _skip_ws(line, pos)
    predicate, pos = _parse_term(line, pos, what="predicate")
    if not isinstance(predicate, IRI):
        raise ValueError("predicate must be an IRI")
    pos = _skip_ws(line, pos)
    obj, pos = _parse_term(line, pos, what="object")
    pos = _skip_ws(line, pos)
    if pos >= len(line) or line[pos] != ".":
        raise ValueError("missing terminating '.'")
    pos = _skip_ws(line, pos + 1)
    if pos < len(line) and line[pos] != "#":
        raise ValueError(f"unexpected trailing content: {line[pos:].strip()!r}")
    return Triple(subject, predicate, obj)


def parse_ntriples(
    source: str | bytes | Iterable[str], strict: bool = False
) -> tuple[list[Triple], list[ParseDiagnostic]]:
    """Parse N-Triples text into triples plus per-line diagnostics.

    Lines are independent: a malformed line yields one diagnostic and is
    skipped without affecting later lines. With ``strict=True`` any
    diagnostic raises :class:`ParseError` after the full scan.
    """
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    lines: Iterable[str] = source.splitlines() if isinstance(source, str) else source
    triples: list[Triple] = []
    diagnostics: list[ParseDiagnostic] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        try:
            triple = parse_ntriples_line(line)
        except ValueError as exc:
            diagnostics.append(ParseDiagnostic(lineno, str(exc), line.strip()))
            continue
        if triple is not None:
            triples.append(triple)
    if strict and diagnostics:
        raise ParseError(diagnostics)
    return triples, diagnostics


# --- N-Triples serialization ---------------------------------------------

_LITERAL_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape_literal(text: str) -> str:
    out = []
    for ch in text:
        if ch in _LITERAL_ESCAPES:
            out.append(_LITERAL_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def term_to_ntriples(term: Term) -> str:
    if isinstance(term, IRI):
        return f"<{term.value}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    base = f'"{_escape_literal(term.lexical)}"'
    if term.language:
        return f"{base}@{term.language}"
    if term.datatype:
        return f"{base}^^<{term.datatype}>"
    return base


def triple_to_ntriples(triple: Triple) -> str:
    s, p, o = triple
    return f"{term_to_ntriples(s)} {term_to_ntriples(p)} {term_to_ntriples(o)} ."


def serialize_ntriples(triples: Iterable[Triple]) -> str:
    """Canonical serialization: sorted, deduplicated, one triple per line."""
    keyed = {t: None for t in triples}
    ordered = sorted(
        keyed,
        key=lambda t: (term_sort_key(t.subject), term_sort_key(t.predicate), term_sort_key(t.object)),
    )
    return "".join(triple_to_ntriples(t) + "\n" for t in ordered)


# --- The knowledge base ---------------------------------------------------

class KbError(Exception):
    """Raised when a triple set cannot form a valid knowledge base."""


class KnowledgeBase:
    """Immutable indexed triple set.

    Construction interns every term to an integer id (canonical order, so
    identical triple multisets produce bit-identical bases regardless of
    input order) and populates six indexes: outgoing/incoming property
    edges restricted to ``Pr``, instance typing in both directions, and
    direct subsumption in both directions. Safe for unlimited concurrent
    readers once built.
    """

    def __init__(self, triples: Iterable[Triple]):
        unique = set()
        for t in triples:
            if not isinstance(t.predicate, IRI):
                raise KbError(f"predicate must be an IRI: {triple_to_ntriples(t)}")
            if isinstance(t.subject, Literal):
                raise KbError(f"literal in subject position: {triple_to_ntriples(t)}")
            unique.add(t)

        terms = sorted(
            {x for t in unique for x in t}, key=term_sort_key
        )
        self._terms: tuple[Term, ...] = tuple(terms)
        self._ids: dict[Term, int] = {term: i for i, term in enumerate(terms)}

        id_triples = sorted(
            (self._ids[t.subject], self._ids[t.predicate], self._ids[t.object]) for t in unique
        )
        self._id_triples: tuple[tuple[int, int, int], ...] = tuple(id_triples)
        self.triples: tuple[Triple, ...] = tuple(
            Triple(self._terms[s], self._terms[p], self._terms[o]) for s, p, o in id_triples
        )
        self._triple_set = frozenset(self.triples)

        type_id = self._ids.get(IRI(RDF_TYPE))
        sub_id = self._ids.get(IRI(RDFS_SUBCLASSOF))

        out: dict[int, list[tuple[int, int]]] = {}
        inc: dict[int, list[tuple[int, int]]] = {}
        classes: dict[int, set[int]] = {}
        instances: dict[int, set[int]] = {}
        supers: dict[int, set[int]] = {}
        subs: dict[int, set[int]] = {}
        prop_ids: set[int] = set()
        nodes: set[int] = set()

        for s, p, o in id_triples:
            nodes.add(s)
            nodes.add(o)
            if p == type_id:
                classes.setdefault(s, set()).add(o)
                instances.setdefault(o, set()).add(s)
            elif p == sub_id:
                supers.setdefault(s, set()).add(o)
                subs.setdefault(o, set()).add(s)
            else:
                prop_ids.add(p)
                out.setdefault(s, []).append((p, o))
                inc.setdefault(o, []).append((p, s))

        self._out: dict[int, tuple[tuple[int, int], ...]] = {
            k: tuple(sorted(v)) for k, v in out.items()
        }
        self._in: dict[int, tuple[tuple[int, int], ...]] = {
            k: tuple(sorted(v)) for k, v in inc.items()
        }
        self._classes = {k: frozenset(v) for k, v in classes.items()}
        self._instances = {k: frozenset(v) for k, v in instances.items()}
        self._supers = {k: frozenset(v) for k, v in supers.items()}
        self._subs = {k: frozenset(v) for k, v in subs.items()}
        self._prop_ids = frozenset(prop_ids)
        self._node_ids: tuple[int, ...] = tuple(sorted(nodes))
        class_ids = set(instances) | set(supers) | set(subs)
        self._class_ids = frozenset(class_ids)

    # -- term table

    def __len__(self) -> int:
        return len(self.triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triple_set

    def term_id(self, term: Term) -> int | None:
        return self._ids.get(term)

    def term(self, tid: int) -> Term:
        return self._terms[tid]

    def terms_of(self, ids: Iterable[int]) -> frozenset[Term]:
        return frozenset(self._terms[i] for i in ids)

    # -- node views

    def node_terms(self) -> tuple[Term, ...]:
        """All graph nodes (subjects and objects), canonical order."""
        return tuple(self._terms[i] for i in self._node_ids)

    def entity_terms(self) -> tuple[Term, ...]:
        """Graph nodes that are IRIs or blank nodes (no literals)."""
        return tuple(
            self._terms[i]
            for i in self._node_ids
            if not isinstance(self._terms[i], Literal)
        )

    def class_terms(self) -> frozenset[Term]:
        return self.terms_of(self._class_ids)

    def properties(self) -> frozenset[IRI]:
        """The ordinary properties Pr (typing and subsumption excluded)."""
        return frozenset(self._terms[i] for i in self._prop_ids)  # type: ignore[misc]

    def literal_triples(self) -> Iterator[Triple]:
        for t in self.triples:
            if isinstance(t.object, Literal):
                yield t

    # -- one-step neighbor views (empty set for unknown terms)

    def _term_set(self, table: dict[int, frozenset[int]], u: Term) -> frozenset[Term]:
        uid = self._ids.get(u)
        if uid is None:
            return frozenset()
        return self.terms_of(table.get(uid, frozenset()))

    def res_from(self, u: Term) -> frozenset[Term]:
        uid = self._ids.get(u)
        if uid is None:
            return frozenset()
        return frozenset(self._terms[o] for _, o in self._out.get(uid, ()))

    def res_to(self, u: Term) -> frozenset[Term]:
        uid = self._ids.get(u)
        if uid is None:
            return frozenset()
        return frozenset(self._terms[s] for _, s in self._in.get(uid, ()))

    def classes(self, u: Term) -> frozenset[Term]:
        return self._term_set(self._classes, u)

    def instances(self, u: Term) -> frozenset[Term]:
        return self._term_set(self._instances, u)

    def superclasses(self, u: Term) -> frozenset[Term]:
        return self._term_set(self._supers, u)

    def subclasses(self, u: Term) -> frozenset[Term]:
        return self._term_set(self._subs, u)

    # -- whole-base views

    def to_ntriples(self) -> str:
        return serialize_ntriples(self.triples)

    def content_hash(self) -> str:
        """SHA-256 of the canonical serialization; input-order independent."""
        return hashlib.sha256(self.to_ntriples().encode("utf-8")).hexdigest()

    def stats(self) -> dict[str, int]:
        literals = sum(1 for i in self._node_ids if isinstance(self._terms[i], Literal))
        return {
            "triples": len(self.triples),
            "entities": len(self._node_ids) - literals,
            "classes": len(self._class_ids),
            "properties": len(self._prop_ids),
            "literals": literals,
        }


def build_kb(triples: Iterable[Triple]) -> KnowledgeBase:
    return KnowledgeBase(triples)


def load_kb(
    *paths: str | Path, strict: bool = False
) -> tuple[KnowledgeBase, list[ParseDiagnostic]]:
    """Parse one or more N-Triples files and build a single knowledge base."""
    triples: list[Triple] = []
    diagnostics: list[ParseDiagnostic] = []
    for path in paths:
        text = Path(path).read_text(encoding="utf-8")
        parsed, diags = parse_ntriples(text, strict=strict)
        triples.extend(parsed)
        diagnostics.extend(diags)
    return build_kb(triples), diagnostics
