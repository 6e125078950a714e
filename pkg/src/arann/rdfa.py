"""Reads the generator's RDFa subset back out of an HTML tree as a graph.

Only prefix/about/typeof/property/resource/content/datatype are processed;
rel, rev, vocab and inlist are rejected so that out-of-dialect documents fail
loudly instead of extracting partial data.
"""

from __future__ import annotations

import re

from .errors import RdfaGrammarError, UnknownPrefix, UnsupportedRdfaFeature
from .htmldoc import Element, HtmlDocument
from .rdf import DEFAULT_PREFIXES, Graph, Iri, Literal, Triple, curie

_FORBIDDEN_ATTRS = ("rel", "rev", "vocab", "inlist")

_SCHEME = re.compile(r"^[A-Za-z][A-Za-z0-9+.-]*://")

_RDF_TYPE = curie("rdf:type")


def _parse_prefix_attr(value: str, inherited: dict[str, str]) -> dict[str, str]:
    tokens = value.split()
    if len(tokens) % 2 != 0:
        raise RdfaGrammarError(f"malformed prefix attribute: {value!r}")
    prefixes = dict(inherited)
    for name, namespace in zip(tokens[::2], tokens[1::2]):
        if not name.endswith(":"):
            raise RdfaGrammarError(f"malformed prefix binding: {name!r}")
        prefixes[name[:-1]] = namespace
    return prefixes


def _expand_term(value: str, prefixes: dict[str, str]) -> Iri:
    """Expand a CURIE or accept an absolute IRI (property/typeof/datatype position)."""
    if _SCHEME.match(value):
        return Iri(value)
    prefix, sep, local = value.partition(":")
    if sep and prefix in prefixes:
        return Iri(prefixes[prefix] + local)
    raise UnknownPrefix(prefix if sep else value)


class _Extractor:
    def __init__(self, prefixes: dict[str, str]):
        self.initial_prefixes = prefixes
        self.base: str | None = None
        self.triples: list[Triple] = []

    def resolve(self, value: str, prefixes: dict[str, str]) -> Iri:
        """Resolve a subject/object reference: CURIE, absolute IRI, #fragment, or ''."""
        if _SCHEME.match(value):
            if self.base is None:
                self.base = value
            return Iri(value)
        prefix, sep, local = value.partition(":")
        if sep and prefix in prefixes and not local.startswith("//"):
            return Iri(prefixes[prefix] + local)
        if value.startswith("#") or value == "":
            if self.base is None:
                raise RdfaGrammarError(
                    f"relative reference {value!r} before any absolute subject"
                )
            return Iri(self.base + value)
        raise RdfaGrammarError(f"unresolvable reference: {value!r}")

    def walk(self, el: Element, subject: Iri | None, prefixes: dict[str, str]) -> None:
        for attr in _FORBIDDEN_ATTRS:
            if attr in el.attrs:
                raise UnsupportedRdfaFeature(attr)
        if "prefix" in el.attrs:
            prefixes = _parse_prefix_attr(el.attrs["prefix"], prefixes)

        about = el.attrs.get("about")
        about_subject = self.resolve(about, prefixes) if about is not None else None
        types = el.attrs.get("typeof", "").split()
        add = self.triples.append

        if "property" in el.attrs:
            statement_subject = about_subject or subject
            if statement_subject is None:
                raise RdfaGrammarError("property attribute with no subject in scope")
            predicates = [
                _expand_term(p, prefixes) for p in el.attrs["property"].split()
            ]
            if "resource" in el.attrs:
                obj = self.resolve(el.attrs["resource"], prefixes)
                for predicate in predicates:
                    add(Triple(statement_subject, predicate, obj))
                for type_curie in types:
                    add(Triple(obj, _RDF_TYPE, _expand_term(type_curie, prefixes)))
                self.descend(el, obj, prefixes)
                return
            datatype = el.attrs.get("datatype")
            datatype_iri = _expand_term(datatype, prefixes).value if datatype else None
            if types:
                raise RdfaGrammarError("typeof with literal-valued property")
            if "content" in el.attrs:
                literal = Literal(el.attrs["content"], datatype=datatype_iri)
                for predicate in predicates:
                    add(Triple(statement_subject, predicate, literal))
                self.descend(el, about_subject or subject, prefixes)
            else:
                literal = Literal(el.text(), datatype=datatype_iri)
                for predicate in predicates:
                    add(Triple(statement_subject, predicate, literal))
                # plain-text object: children carry no further RDFa
            return

        if types:
            if about_subject is None:
                raise RdfaGrammarError("typeof without about or resource")
            for type_curie in types:
                add(Triple(about_subject, _RDF_TYPE, _expand_term(type_curie, prefixes)))

        self.descend(el, about_subject or subject, prefixes)

    def descend(self, el: Element, subject: Iri | None, prefixes: dict[str, str]) -> None:
        for child in el.children:
            # document metadata (stylesheet links etc.) is not part of the dialect
            if isinstance(child, Element) and child.tag != "head":
                self.walk(child, subject, prefixes)


def extract_rdfa(doc: HtmlDocument, prefixes: dict[str, str] | None = None) -> Graph:
    """Extract all triples expressed in the supported RDFa subset."""
    extractor = _Extractor(dict(prefixes or DEFAULT_PREFIXES))
    extractor.walk(doc.root, None, extractor.initial_prefixes)
    return Graph(extractor.triples)
