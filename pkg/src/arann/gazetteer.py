"""Gazetteer-based recognition of discourse elements and common information units.

Heading classification is a pure lookup: normalize the title, find gazetteer
keywords as whole-word phrases, suppress matches wholly contained in a longer
match, and union the class sets. No stemming, no fuzzy matching.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import GazetteerError
from .model import (
    Author,
    Figure,
    Heading,
    IdentifiedArticle,
    ReferenceEntry,
    Table,
    spans_text,
)

DISCOURSE_CLASSES = frozenset(
    {
        "deo:Introduction",
        "deo:Motivation",
        "deo:Background",
        "deo:RelatedWork",
        "deo:Methods",
        "deo:Materials",
        "deo:Results",
        "deo:Evaluation",
        "deo:Discussion",
        "deo:Conclusion",
        "deo:FutureWork",
        "deo:Acknowledgements",
        "deo:ProblemStatement",
        "deo:Model",
    }
)

_NUMBER_TOKEN = re.compile(r"^(?:\d+|[ivxlcdm]+)\s+")


def normalize_title(raw: str) -> str:
    """Canonical form used for gazetteer lookup; idempotent."""
    text = raw.lower()
    # punctuation to spaces, keeping hyphens that join alphanumerics
    text = re.sub(r"[^a-z0-9\s-]", " ", text)
    text = re.sub(r"(?<![a-z0-9])-|-(?![a-z0-9])", " ", text)
    text = re.sub(r"\s+", " ", text).strip()
    while True:
        stripped = _NUMBER_TOKEN.sub("", text)
        if stripped == text:
            break
        text = stripped
    # a title that is nothing but numbering normalizes to ""
    if re.fullmatch(r"\d+|[ivxlcdm]+", text):
        return ""
    return text


@dataclass(frozen=True)
class Gazetteer:
    """Keyword phrases mapped to discourse classes; keywords pre-normalized."""

    entries: tuple[tuple[str, frozenset[str]], ...]

    def as_dict(self) -> dict[str, frozenset[str]]:
        return dict(self.entries)

    def with_entry(self, keyword: str, classes: frozenset[str]) -> "Gazetteer":
        merged = self.as_dict()
        merged[keyword] = merged.get(keyword, frozenset()) | classes
        return Gazetteer(tuple(sorted(merged.items())))


def load_gazetteer_text(text: str) -> Gazetteer:
    """Parse a gazetteer file: ``keyword<TAB>curie[,curie...]``, ``#`` comments."""
    entries: dict[str, frozenset[str]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "\t" not in stripped:
            raise GazetteerError("expected keyword<TAB>curie[,curie...]", line_no)
        keyword, _, curies = stripped.partition("\t")
        keyword = keyword.strip()
        if keyword != normalize_title(keyword):
            raise GazetteerError(f"keyword not pre-normalized: {keyword!r}", line_no)
        if keyword in entries:
            raise GazetteerError(f"duplicate keyword: {keyword!r}", line_no)
        classes = frozenset(c.strip() for c in curies.split(",") if c.strip())
        if not classes:
            raise GazetteerError("entry maps to no classes", line_no)
        unknown = classes - DISCOURSE_CLASSES
        if unknown:
            raise GazetteerError(f"unknown discourse class: {sorted(unknown)}", line_no)
        entries[keyword] = classes
    return Gazetteer(tuple(sorted(entries.items())))


def load_gazetteer(path: str | Path) -> Gazetteer:
    return load_gazetteer_text(Path(path).read_text(encoding="utf-8"))


def default_gazetteer() -> Gazetteer:
    text = resources.files("arann").joinpath("data/default-gazetteer.tsv").read_text("utf-8")
    return load_gazetteer_text(text)


def classify_heading(title: str, gaz: Gazetteer) -> frozenset[str]:
    """All discourse classes whose keyword occurs in the normalized title.

    A match strictly contained in another keyword's match is suppressed, so
    "future work" beats a hypothetical "work" entry; results are independent
    of gazetteer file order.
    """
    words = normalize_title(title).split()
    matches: list[tuple[int, int, frozenset[str]]] = []
    for keyword, classes in gaz.entries:
        kw_words = keyword.split()
        width = len(kw_words)
        for start in range(len(words) - width + 1):
            if words[start : start + width] == kw_words:
                matches.append((start, start + width, classes))
    result: set[str] = set()
    for start, end, classes in matches:
        contained = any(
            (o_start <= start and end <= o_end and (o_start, o_end) != (start, end))
            for o_start, o_end, _ in matches
        )
        if not contained:
            result |= classes
    return frozenset(result)


@dataclass(frozen=True)
class UnitTag:
    """An ontology tag on one information unit of the article.

    ``target_id`` is the fragment id of the tagged entity; article-level tags
    use the empty string (the article's own IRI has no fragment).
    """

    target_id: str
    role: str
    curie: str


@dataclass(frozen=True)
class ClassifiedArticle:
    article: IdentifiedArticle
    heading_classes: tuple[tuple[str, frozenset[str]], ...]
    unit_tags: tuple[UnitTag, ...]

    def classes_of(self, section_id: str) -> frozenset[str]:
        return dict(self.heading_classes).get(section_id, frozenset())

    def author_id(self, ordinal: int) -> str:
        """Deterministic fragment id for the 1-based n-th author."""
        return f"author-{ordinal}"


def classify_units(article: IdentifiedArticle, gaz: Gazetteer) -> ClassifiedArticle:
    """Tag title, abstract, authors, references, figures and tables, and
    classify every heading through the gazetteer."""
    heading_classes = []
    tags: list[UnitTag] = [
        UnitTag("", "article", "schema:ScholarlyArticle"),
        UnitTag("", "article", "swrc:Article"),
        UnitTag("", "title", "schema:name"),
    ]
    if article.metadata.abstract.strip():
        tags.append(UnitTag("", "abstract", "schema:abstract"))
    for ordinal, author in enumerate(article.metadata.authors, start=1):
        tags.append(UnitTag(f"author-{ordinal}", "author", "schema:Person"))

    for index, block in enumerate(article.blocks):
        block_id = article.block_ids[index]
        if isinstance(block, Heading):
            heading_classes.append((block_id, classify_heading(spans_text(block.spans), gaz)))
        elif isinstance(block, ReferenceEntry):
            tags.append(UnitTag(block_id, "citation", "schema:citation"))
        elif isinstance(block, Figure):
            tags.append(UnitTag(block_id, "figure", "schema:ImageObject"))
        elif isinstance(block, Table):
            tags.append(UnitTag(block_id, "table", "schema:Table"))

    return ClassifiedArticle(
        article=article,
        heading_classes=tuple(heading_classes),
        unit_tags=tuple(tags),
    )
