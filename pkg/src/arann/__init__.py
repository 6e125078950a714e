"""arann: publish reviewed article bundles as HTML+RDFa and analyze the reviews."""

from .anchors import AnnotationNode, Segment, build_annotation, compute_segments
from .bundle import load_bundle_file, parse_bundle, write_bundle
from .gazetteer import (
    ClassifiedArticle,
    Gazetteer,
    classify_heading,
    classify_units,
    default_gazetteer,
    load_gazetteer,
    normalize_title,
)
from .htmldoc import HtmlDocument, parse_html
from .htmlgen import generate_html, inject_comment, render_comment_page
from .model import (
    Anchor,
    ArticleBundle,
    ArticleMetadata,
    Author,
    IdentifiedArticle,
    ReviewComment,
    assign_identifiers,
    validate_bundle,
)
from .pipeline import Conversion, classify_bundle, convert_bundle
from .query import BindingSet, TriplePattern, Var, match_bgp, parse_query
from .rdf import (
    Graph,
    Iri,
    Literal,
    PrefixMap,
    Triple,
    expand_curie,
    parse_ntriples,
    serialize_ntriples,
)
from .rdfa import extract_rdfa
from .reports import (
    Report,
    report_comments_per_section,
    report_common_targets,
    report_reviewer_section_matrix,
    run_report,
)
from .triples import direct_triples
from .archive import build_archive

__version__ = "0.1.0"
