"""Canned review-analysis reports over a pipeline-produced graph.

Reviewer identity is the dcterms:creator literal. "Disagreement" with a
section is operationalized as annotation density per reviewer per section;
no sentiment analysis is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass

from .query import TriplePattern, Var, match_bgp
from .rdf import Graph, Iri, Literal, curie

REPORT_KINDS = ("comments_per_section", "common_targets", "reviewer_section_matrix")

_HEADERS = {
    "comments_per_section": ("section", "comments"),
    "common_targets": ("block",),
    "reviewer_section_matrix": ("reviewer", "section", "comments"),
}


@dataclass(frozen=True)
class ReportRow:
    labels: tuple[str, ...]
    count: int | None = None


@dataclass(frozen=True)
class Report:
    kind: str
    rows: tuple[ReportRow, ...]

    def to_tsv(self) -> str:
        lines = ["\t".join(_HEADERS[self.kind])]
        for row in self.rows:
            cells = list(row.labels)
            if row.count is not None:
                cells.append(str(row.count))
            lines.append("\t".join(cells))
        return "\n".join(lines) + "\n"


def _fragment_id(iri: Iri) -> str | None:
    _, sep, fragment = iri.value.partition("#")
    return fragment if sep else None


def _containment(graph: Graph) -> dict[Iri, set[Iri]]:
    """Direct schema:hasPart children per parent node."""
    children: dict[Iri, set[Iri]] = {}
    for sol in match_bgp(
        graph, [TriplePattern(Var("parent"), curie("schema:hasPart"), Var("child"))]
    ).as_dicts():
        children.setdefault(sol["parent"], set()).add(sol["child"])
    return children


def _descendants(node: Iri, children: dict[Iri, set[Iri]]) -> set[Iri]:
    seen: set[Iri] = set()
    stack = [node]
    while stack:
        for child in children.get(stack.pop(), ()):
            if child not in seen:
                seen.add(child)
                stack.append(child)
    return seen


def _sections(children: dict[Iri, set[Iri]]) -> list[Iri]:
    nodes = set(children)
    for kids in children.values():
        nodes |= kids
    sections = [n for n in nodes if (_fragment_id(n) or "").startswith("section-")]
    return sorted(sections, key=lambda n: _fragment_id(n))


def _annotations(graph: Graph) -> list[tuple[Iri, Iri, str]]:
    """(annotation, target source, reviewer name) per annotation in the graph."""
    solutions = match_bgp(
        graph,
        [
            TriplePattern(Var("a"), curie("rdf:type"), curie("oa:Annotation")),
            TriplePattern(Var("a"), curie("oa:hasTarget"), Var("t")),
            TriplePattern(Var("t"), curie("oa:hasSource"), Var("src")),
            TriplePattern(Var("a"), curie("dcterms:creator"), Var("name")),
        ],
    ).as_dicts()
    out = []
    for sol in solutions:
        name = sol["name"]
        out.append((sol["a"], sol["src"], name.lexical if isinstance(name, Literal) else str(name)))
    return out


def report_comments_per_section(graph: Graph) -> Report:
    """Annotation counts per section, most-commented first."""
    children = _containment(graph)
    annotations = _annotations(graph)
    rows = []
    for section in _sections(children):
        members = _descendants(section, children) | {section}
        count = sum(1 for _, src, _ in annotations if src in members)
        rows.append(ReportRow((_fragment_id(section),), count))
    rows.sort(key=lambda r: (-r.count, r.labels))
    return Report("comments_per_section", tuple(rows))


def report_common_targets(graph: Graph) -> Report:
    """Blocks that every distinct reviewer has commented on."""
    annotations = _annotations(graph)
    targets_by_reviewer: dict[str, set[Iri]] = {}
    for _, src, reviewer in annotations:
        targets_by_reviewer.setdefault(reviewer, set()).add(src)
    if not targets_by_reviewer:
        return Report("common_targets", ())
    common = set.intersection(*targets_by_reviewer.values())
    block_ids = sorted(_fragment_id(iri) or iri.value for iri in common)
    return Report("common_targets", tuple(ReportRow((bid,)) for bid in block_ids))


def report_reviewer_section_matrix(graph: Graph) -> Report:
    """Annotation counts per (reviewer, section); zero cells omitted."""
    children = _containment(graph)
    annotations = _annotations(graph)
    counts: dict[tuple[str, str], int] = {}
    for section in _sections(children):
        members = _descendants(section, children) | {section}
        for _, src, reviewer in annotations:
            if src in members:
                key = (reviewer, _fragment_id(section))
                counts[key] = counts.get(key, 0) + 1
    rows = tuple(
        ReportRow(key, counts[key]) for key in sorted(counts)
    )
    return Report("reviewer_section_matrix", rows)


def run_report(kind: str, graph: Graph) -> Report:
    if kind == "comments_per_section":
        return report_comments_per_section(graph)
    if kind == "common_targets":
        return report_common_targets(graph)
    if kind == "reviewer_section_matrix":
        return report_reviewer_section_matrix(graph)
    raise ValueError(f"unknown report kind: {kind!r}")
