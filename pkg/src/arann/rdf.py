"""RDF terms, graphs, CURIE expansion, and canonical N-Triples I/O.

Subjects and predicates are always IRIs; the pipeline mints a fragment IRI
for every entity, so blank nodes never appear and graphs compare as plain
sets.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import MalformedNTriples, UnknownPrefix


@dataclass(frozen=True)
class Iri:
    value: str

    def __str__(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: str | None = None
    language: str | None = None

    def __post_init__(self):
        if self.datatype is not None and self.language is not None:
            raise ValueError("a literal has at most one of datatype/language")

    def __str__(self) -> str:
        quoted = '"%s"' % escape_literal(self.lexical)
        if self.datatype is not None:
            return f"{quoted}^^<{self.datatype}>"
        if self.language is not None:
            return f"{quoted}@{self.language}"
        return quoted


Term = Iri | Literal


@dataclass(frozen=True)
class Triple:
    subject: Iri
    predicate: Iri
    object: Term

    def __str__(self) -> str:
        return f"{self.subject} {self.predicate} {self.object} ."


class Graph:
    """An immutable set of triples."""

    __slots__ = ("_triples",)

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples = frozenset(triples)

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._triples == other._triples

    def __hash__(self) -> int:
        return hash(self._triples)

    def __repr__(self) -> str:
        return f"Graph({len(self._triples)} triples)"

    def union(self, other: "Graph") -> "Graph":
        return Graph(self._triples | other._triples)

    def difference(self, other: "Graph") -> "Graph":
        return Graph(self._triples - other._triples)

    def sorted(self) -> list[Triple]:
        return sorted(
            self._triples, key=lambda t: (str(t.subject), str(t.predicate), str(t.object))
        )

    def subjects(self) -> set[Iri]:
        return {t.subject for t in self._triples}


DEFAULT_PREFIXES: dict[str, str] = {
    "deo": "http://purl.org/spar/deo/",
    "schema": "http://schema.org/",
    "oa": "http://www.w3.org/ns/oa#",
    "swrc": "http://ontoware.org/swrc/",
    "dcterms": "http://purl.org/dc/terms/",
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
}


@dataclass(frozen=True)
class PrefixMap:
    prefixes: tuple[tuple[str, str], ...] = tuple(sorted(DEFAULT_PREFIXES.items()))

    @classmethod
    def from_dict(cls, mapping: dict[str, str]) -> "PrefixMap":
        return cls(tuple(sorted(mapping.items())))

    def as_dict(self) -> dict[str, str]:
        return dict(self.prefixes)

    def with_added(self, prefix: str, namespace: str) -> "PrefixMap":
        merged = self.as_dict()
        merged[prefix] = namespace
        return PrefixMap.from_dict(merged)

    def declaration(self) -> str:
        """The value of an RDFa ``prefix`` attribute declaring every binding."""
        return " ".join(f"{p}: {ns}" for p, ns in self.prefixes)


def expand_curie(curie: str, pm: PrefixMap | None = None) -> Iri:
    prefix, _, local = curie.partition(":")
    mapping = (pm or PrefixMap()).as_dict()
    if prefix not in mapping:
        raise UnknownPrefix(prefix)
    return Iri(mapping[prefix] + local)


def curie(compact: str) -> Iri:
    """Expand a CURIE against the default prefix map."""
    return expand_curie(compact)


# Vocabulary terms the pipeline uses throughout.
RDF_TYPE = curie("rdf:type")
SCHEMA_HAS_PART = curie("schema:hasPart")
OA_ANNOTATION = curie("oa:Annotation")
OA_HAS_TARGET = curie("oa:hasTarget")
OA_HAS_SOURCE = curie("oa:hasSource")
OA_HAS_SELECTOR = curie("oa:hasSelector")
DCTERMS_CREATOR = curie("dcterms:creator")


# --- N-Triples ---------------------------------------------------------------

_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def escape_literal(text: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in text)


def _unescape(text: str, line_no: int) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(text):
            raise MalformedNTriples(line_no, "dangling escape")
        nxt = text[i + 1]
        simple = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}
        if nxt in simple:
            out.append(simple[nxt])
            i += 2
        elif nxt == "u" and i + 6 <= len(text):
            out.append(chr(int(text[i + 2 : i + 6], 16)))
            i += 6
        elif nxt == "U" and i + 10 <= len(text):
            out.append(chr(int(text[i + 2 : i + 10], 16)))
            i += 10
        else:
            raise MalformedNTriples(line_no, f"bad escape \\{nxt}")
    return "".join(out)


def serialize_ntriples(graph: Graph) -> str:
    """Canonical N-Triples: one LF-terminated line per triple, sorted by (S,P,O)."""
    return "".join(f"{triple}\n" for triple in graph.sorted())


_IRI_RE = r"<([^<>\s]*)>"
_LITERAL_RE = r'"((?:[^"\\]|\\.)*)"'
_TRIPLE_RE = re.compile(
    rf"^{_IRI_RE}\s+{_IRI_RE}\s+"
    rf"(?:{_IRI_RE}|{_LITERAL_RE}(?:\^\^{_IRI_RE}|@([A-Za-z][A-Za-z0-9-]*))?)"
    r"\s*\.\s*$"
)


def parse_ntriples(text: str) -> Graph:
    triples = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        match = _TRIPLE_RE.match(stripped)
        if match is None:
            raise MalformedNTriples(line_no, f"not a triple: {stripped!r}")
        subject_iri, predicate_iri, object_iri, lexical, datatype_iri, language = match.groups()
        obj: Term
        if object_iri is not None:
            obj = Iri(object_iri)
        else:
            obj = Literal(
                _unescape(lexical, line_no),
                datatype=datatype_iri,
                language=language,
            )
        triples.append(Triple(Iri(subject_iri), Iri(predicate_iri), obj))
    return Graph(triples)
