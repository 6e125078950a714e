"""Builds the article graph straight from the model, without going through HTML.

This is the reference side of the round-trip contract: extracting RDFa from
the generated HTML must yield exactly this graph.
"""

from __future__ import annotations

from .anchors import build_annotation
from .gazetteer import ClassifiedArticle
from .model import Figure, block_plain_text, document_outline, spans_text
from .rdf import Graph, Iri, Literal, Triple, curie

_XSD_DATETIME = curie("xsd:dateTime").value
_XSD_NONNEG = curie("xsd:nonNegativeInteger").value


def direct_triples(article: ClassifiedArticle) -> Graph:
    identified = article.article
    base = identified.metadata.base_uri
    article_iri = Iri(base)

    def frag(fragment_id: str) -> Iri:
        return Iri(f"{base}#{fragment_id}")

    triples: list[Triple] = []
    add = triples.append

    rdf_type = curie("rdf:type")
    has_part = curie("schema:hasPart")

    for tag in article.unit_tags:
        subject = article_iri if tag.target_id == "" else frag(tag.target_id)
        if tag.role in ("article", "author", "figure", "table"):
            add(Triple(subject, rdf_type, curie(tag.curie)))

    meta = identified.metadata
    add(Triple(article_iri, curie("schema:name"), Literal(meta.title)))
    if meta.abstract.strip():
        add(Triple(article_iri, curie("schema:abstract"), Literal(meta.abstract)))
    for ordinal, author in enumerate(meta.authors, start=1):
        author_iri = frag(article.author_id(ordinal))
        add(Triple(article_iri, curie("schema:author"), author_iri))
        add(Triple(author_iri, curie("schema:name"), Literal(author.name)))
        if author.affiliation is not None:
            add(Triple(author_iri, curie("schema:affiliation"), Literal(author.affiliation)))

    for section_id, classes in article.heading_classes:
        for class_curie in sorted(classes):
            add(Triple(frag(section_id), rdf_type, curie(class_curie)))

    def add_containment(nodes, parent_iri: Iri):
        for node in nodes:
            child_iri = frag(identified.block_ids[node.index])
            add(Triple(parent_iri, has_part, child_iri))
            add_containment(node.children, child_iri)

    add_containment(document_outline(identified.blocks), article_iri)

    for index, block in enumerate(identified.blocks):
        block_id = identified.block_ids[index]
        if isinstance(block, Figure) and spans_text(block.caption) != "":
            add(Triple(frag(block_id), curie("schema:caption"), Literal(spans_text(block.caption))))
        elif block.kind == "reference_entry":
            add(Triple(article_iri, curie("schema:citation"), Literal(block_plain_text(block))))

    for comment in identified.comments:
        ann = build_annotation(comment, article)
        a, t = Iri(ann.iri), Iri(ann.target_iri)
        quote, pos = Iri(ann.quote_selector_iri), Iri(ann.position_selector_iri)
        add(Triple(a, rdf_type, curie("oa:Annotation")))
        add(Triple(a, curie("oa:motivatedBy"), curie("oa:commenting")))
        add(Triple(a, curie("dcterms:creator"), Literal(ann.creator)))
        add(Triple(a, curie("dcterms:created"), Literal(ann.created, datatype=_XSD_DATETIME)))
        add(Triple(a, curie("oa:bodyValue"), Literal(ann.body_text)))
        add(Triple(a, curie("oa:hasTarget"), t))
        add(Triple(t, rdf_type, curie("oa:SpecificResource")))
        add(Triple(t, curie("oa:hasSource"), Iri(ann.source_iri)))
        add(Triple(t, curie("oa:hasSelector"), quote))
        add(Triple(quote, rdf_type, curie("oa:TextQuoteSelector")))
        add(Triple(quote, curie("oa:exact"), Literal(ann.exact)))
        add(Triple(quote, curie("oa:prefix"), Literal(ann.prefix)))
        add(Triple(quote, curie("oa:suffix"), Literal(ann.suffix)))
        add(Triple(t, curie("oa:hasSelector"), pos))
        add(Triple(pos, rdf_type, curie("oa:TextPositionSelector")))
        add(Triple(pos, curie("oa:start"), Literal(str(ann.start), datatype=_XSD_NONNEG)))
        add(Triple(pos, curie("oa:end"), Literal(str(ann.end), datatype=_XSD_NONNEG)))

    return Graph(triples)
