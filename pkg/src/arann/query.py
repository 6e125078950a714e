"""Basic-graph-pattern matching over a Graph, plus the line-based query format.

This is the conjunctive core of SPARQL only: patterns of IRIs, literals and
?variables joined on shared variables. Export to N-Triples when a full SPARQL
engine is needed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import QueryParseError, UnknownPrefix
from .rdf import Graph, Iri, Literal, PrefixMap, Term, Triple, expand_curie

_VAR_NAME = re.compile(r"[A-Za-z0-9_]+")


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self):
        if not _VAR_NAME.fullmatch(self.name):
            raise ValueError(f"bad variable name: {self.name!r}")

    def __str__(self) -> str:
        return f"?{self.name}"


PatternTerm = Term | Var


@dataclass(frozen=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def variables(self) -> set[str]:
        return {t.name for t in (self.subject, self.predicate, self.object) if isinstance(t, Var)}


Solution = dict[str, Term]


@dataclass(frozen=True)
class BindingSet:
    """Query solutions in canonical order (sorted by serialized bound terms)."""

    variables: tuple[str, ...]
    solutions: tuple[tuple[Term, ...], ...]

    def as_dicts(self) -> list[Solution]:
        return [dict(zip(self.variables, row)) for row in self.solutions]

    def __len__(self) -> int:
        return len(self.solutions)

    def to_tsv(self) -> str:
        lines = ["\t".join(f"?{v}" for v in self.variables)]
        for row in self.solutions:
            lines.append("\t".join(str(term) for term in row))
        return "\n".join(lines) + "\n"


def _unify(pattern: TriplePattern, triple: Triple, bound: Solution) -> Solution | None:
    out = dict(bound)
    for pattern_term, value in (
        (pattern.subject, triple.subject),
        (pattern.predicate, triple.predicate),
        (pattern.object, triple.object),
    ):
        if isinstance(pattern_term, Var):
            seen = out.get(pattern_term.name)
            if seen is None:
                out[pattern_term.name] = value
            elif seen != value:
                return None
        elif pattern_term != value:
            return None
    return out


class _GraphIndex:
    """Predicate and subject indexes for candidate narrowing."""

    def __init__(self, graph: Graph):
        self.all = list(graph)
        self.by_predicate: dict[Iri, list[Triple]] = {}
        self.by_subject: dict[Iri, list[Triple]] = {}
        for triple in self.all:
            self.by_predicate.setdefault(triple.predicate, []).append(triple)
            self.by_subject.setdefault(triple.subject, []).append(triple)

    def candidates(self, pattern: TriplePattern, bound: Solution) -> list[Triple]:
        def concrete(term: PatternTerm) -> Term | None:
            if isinstance(term, Var):
                return bound.get(term.name)
            return term

        subject = concrete(pattern.subject)
        predicate = concrete(pattern.predicate)
        if isinstance(subject, Iri):
            return self.by_subject.get(subject, [])
        if isinstance(predicate, Iri):
            return self.by_predicate.get(predicate, [])
        return self.all


def match_bgp(graph: Graph, patterns: list[TriplePattern]) -> BindingSet:
    """All variable assignments satisfying every pattern simultaneously."""
    if not patterns:
        raise ValueError("empty pattern list")
    index = _GraphIndex(graph)
    partials: list[Solution] = [{}]
    for pattern in patterns:
        extended: list[Solution] = []
        for bound in partials:
            for triple in index.candidates(pattern, bound):
                unified = _unify(pattern, triple, bound)
                if unified is not None:
                    extended.append(unified)
        partials = extended
        if not partials:
            break

    variables = tuple(sorted(set().union(*(p.variables() for p in patterns))))
    rows = {tuple(sol[v] for v in variables) for sol in partials}
    ordered = sorted(rows, key=lambda row: tuple(str(t) for t in row))
    return BindingSet(variables=variables, solutions=tuple(ordered))


# --- query text format ---------------------------------------------------------

_TERM_RE = re.compile(
    r"""\?(?P<var>[A-Za-z0-9_]+)
      | <(?P<iri>[^<>\s]*)>
      | "(?P<lit>(?:[^"\\]|\\.)*)"(?:\^\^(?P<dtcurie>[A-Za-z_][\w.-]*:[^\s]+)|\^\^<(?P<dtiri>[^<>\s]*)>)?
      | (?P<curie>[A-Za-z_][\w.-]*:[^\s]+)
    """,
    re.VERBOSE,
)

_LITERAL_UNESCAPES = {"\\\\": "\\", '\\"': '"', "\\n": "\n", "\\r": "\r", "\\t": "\t"}


def _unescape_literal(text: str) -> str:
    return re.sub(
        r"\\[\\nrt\"]", lambda m: _LITERAL_UNESCAPES[m.group(0)], text
    )


def parse_query(text: str, prefixes: PrefixMap | None = None) -> list[TriplePattern]:
    """Parse one triple pattern per line; '#' comments and blank lines allowed."""
    prefixes = prefixes or PrefixMap()
    patterns: list[TriplePattern] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.endswith("."):
            stripped = stripped[:-1].rstrip()
        terms: list[PatternTerm] = []
        pos = 0
        while pos < len(stripped):
            if stripped[pos].isspace():
                pos += 1
                continue
            match = _TERM_RE.match(stripped, pos)
            if match is None:
                raise QueryParseError(line_no, f"cannot read term at: {stripped[pos:]!r}")
            if match.group("var") is not None:
                terms.append(Var(match.group("var")))
            elif match.group("iri") is not None:
                terms.append(Iri(match.group("iri")))
            elif match.group("lit") is not None:
                datatype = None
                if match.group("dtcurie"):
                    try:
                        datatype = expand_curie(match.group("dtcurie"), prefixes).value
                    except UnknownPrefix as exc:
                        raise QueryParseError(line_no, str(exc)) from exc
                elif match.group("dtiri"):
                    datatype = match.group("dtiri")
                terms.append(Literal(_unescape_literal(match.group("lit")), datatype=datatype))
            else:
                try:
                    terms.append(expand_curie(match.group("curie"), prefixes))
                except UnknownPrefix as exc:
                    raise QueryParseError(line_no, str(exc)) from exc
            pos = match.end()
        if len(terms) != 3:
            raise QueryParseError(line_no, f"expected 3 terms, found {len(terms)}")
        patterns.append(TriplePattern(*terms))
    if not patterns:
        raise QueryParseError(0, "query contains no patterns")
    return patterns
