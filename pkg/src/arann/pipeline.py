"""End-to-end composition: bundle in, published artifacts out."""

from __future__ import annotations

from dataclasses import dataclass

from .anchors import build_annotation
from .errors import BundleInvalid
from .gazetteer import ClassifiedArticle, Gazetteer, classify_units, default_gazetteer
from .htmldoc import HtmlDocument
from .htmlgen import generate_html, render_comment_page
from .model import ArticleBundle, assign_identifiers, validate_bundle
from .rdf import Graph
from .triples import direct_triples


@dataclass(frozen=True)
class Conversion:
    article: ClassifiedArticle
    document: HtmlDocument
    comment_pages: dict[str, HtmlDocument]
    graph: Graph


def classify_bundle(bundle: ArticleBundle, gazetteer: Gazetteer | None = None) -> ClassifiedArticle:
    """Validate, assign identifiers, and classify; raises BundleInvalid."""
    violations = validate_bundle(bundle)
    if violations:
        raise BundleInvalid(violations)
    return classify_units(assign_identifiers(bundle), gazetteer or default_gazetteer())


def convert_bundle(bundle: ArticleBundle, gazetteer: Gazetteer | None = None) -> Conversion:
    article = classify_bundle(bundle, gazetteer)
    document = generate_html(article)
    pages = {
        comment.comment_id: render_comment_page(
            build_annotation(comment, article), comment.comment_id
        )
        for comment in article.article.comments
    }
    return Conversion(
        article=article,
        document=document,
        comment_pages=pages,
        graph=direct_triples(article),
    )
