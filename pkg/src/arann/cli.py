"""Command-line front-end: convert, extract, query, report, annotate, validate.

Exit codes: 0 success, 1 I/O or parse error, 2 bundle validation failure,
3 internal invariant breach. Diagnostics go to stderr, data to stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

from . import archive as archive_mod
from .bundle import load_bundle_file
from .errors import ArannError, BundleInvalid
from .gazetteer import Gazetteer, load_gazetteer
from .htmldoc import parse_html
from .htmlgen import inject_comment
from .model import Anchor, ReviewComment, validate_bundle
from .pipeline import convert_bundle
from .query import match_bgp, parse_query
from .rdf import Graph, parse_ntriples, serialize_ntriples
from .rdfa import extract_rdfa
from .reports import REPORT_KINDS, run_report

GAZETTEER_ENV = "ARANN_GAZETTEER"


def _load_gazetteer(path: str | None) -> Gazetteer | None:
    if path is None:
        path = os.environ.get(GAZETTEER_ENV)
    return load_gazetteer(path) if path else None


def _load_graph(path: str) -> Graph:
    """Accept either an .nt file or an .html file (extracting first)."""
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".nt"):
        return parse_ntriples(text)
    return extract_rdfa(parse_html(text))


def _write_output(data: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(data)
    else:
        Path(output).write_text(data, encoding="utf-8")


def cmd_convert(args) -> int:
    bundle = load_bundle_file(args.bundle)
    if args.base_uri:
        bundle = replace(bundle, metadata=replace(bundle.metadata, base_uri=args.base_uri))
    conversion = convert_bundle(bundle, _load_gazetteer(args.gazetteer))

    out_dir = Path(args.output)
    out_dir.mkdir(parents=True, exist_ok=True)
    article_html = conversion.document.serialize()
    (out_dir / "article.html").write_text(article_html, encoding="utf-8")

    comment_htmls = {cid: doc.serialize() for cid, doc in conversion.comment_pages.items()}
    if comment_htmls:
        (out_dir / "comments").mkdir(exist_ok=True)
        for comment_id, html in comment_htmls.items():
            (out_dir / "comments" / f"comment-{comment_id}.html").write_text(
                html, encoding="utf-8"
            )

    media = conversion.article.article.media
    if media:
        (out_dir / "media").mkdir(exist_ok=True)
        for asset in media:
            (out_dir / "media" / asset.name).write_bytes(asset.data)

    (out_dir / "css").mkdir(exist_ok=True)
    (out_dir / "css" / "style.css").write_text(archive_mod.default_stylesheet(), encoding="utf-8")

    triples_text = serialize_ntriples(conversion.graph) if args.emit_nt else None
    if triples_text is not None:
        (out_dir / "triples.nt").write_text(triples_text, encoding="utf-8")

    if args.zip:
        timestamp = archive_mod.FIXED_TIMESTAMP if args.fixed_timestamp else args.timestamp
        data = archive_mod.build_archive(
            article_html,
            comment_htmls,
            {asset.name: asset.data for asset in media},
            triples=triples_text,
            timestamp=timestamp,
        )
        (out_dir / "article.zip").write_bytes(data)

    bundle_stats = conversion.article.article
    print(
        f"blocks={len(bundle_stats.blocks)} comments={len(bundle_stats.comments)} "
        f"triples={len(conversion.graph)}"
    )
    return 0


def cmd_extract(args) -> int:
    doc = parse_html(Path(args.article).read_text(encoding="utf-8"))
    graph = extract_rdfa(doc)
    _write_output(serialize_ntriples(graph), args.output)
    return 0


def cmd_query(args) -> int:
    graph = _load_graph(args.graph)
    patterns = parse_query(Path(args.query).read_text(encoding="utf-8"))
    _write_output(match_bgp(graph, patterns).to_tsv(), args.output)
    return 0


def cmd_report(args) -> int:
    graph = _load_graph(args.graph)
    _write_output(run_report(args.kind, graph).to_tsv(), args.output)
    return 0


def cmd_annotate(args) -> int:
    doc = parse_html(Path(args.article).read_text(encoding="utf-8"))
    raw = json.loads(Path(args.comment).read_text(encoding="utf-8"))
    anchor_raw = raw["anchor"]
    comment = ReviewComment(
        comment_id=str(raw["comment_id"]),
        author_name=str(raw["author_name"]),
        created=str(raw["created"]),
        body_text=str(raw["body_text"]),
        anchor=Anchor(
            start=int(anchor_raw["start"]),
            end=int(anchor_raw["end"]),
            block_id=anchor_raw["block_id"],
        ),
    )
    updated = inject_comment(doc, comment, expected_exact=anchor_raw.get("exact"))
    _write_output(updated.serialize(), args.output)
    return 0


def cmd_validate(args) -> int:
    bundle = load_bundle_file(args.bundle)
    violations = validate_bundle(bundle)
    for violation in violations:
        print(violation, file=sys.stderr)
    return 2 if violations else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arann",
        description="Publish reviewed article bundles as HTML+RDFa and query the result.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    convert = sub.add_parser("convert", help="bundle JSON -> HTML+RDFa output directory")
    convert.add_argument("bundle")
    convert.add_argument("-o", "--output", required=True, help="output directory")
    convert.add_argument("--base-uri", help="override metadata.base_uri")
    convert.add_argument("--gazetteer", help=f"gazetteer file (falls back to ${GAZETTEER_ENV})")
    convert.add_argument("--emit-nt", action="store_true", help="also write triples.nt")
    convert.add_argument("--zip", action="store_true", help="also write article.zip")
    convert.add_argument(
        "--fixed-timestamp",
        action="store_true",
        help=f"stamp archive entries with {archive_mod.FIXED_TIMESTAMP}",
    )
    convert.add_argument("--timestamp", default=archive_mod.FIXED_TIMESTAMP, help=argparse.SUPPRESS)
    convert.set_defaults(func=cmd_convert)

    extract = sub.add_parser("extract", help="article HTML -> N-Triples")
    extract.add_argument("article")
    extract.add_argument("-o", "--output")
    extract.set_defaults(func=cmd_extract)

    query = sub.add_parser("query", help="run a triple-pattern query (.nt or .html input)")
    query.add_argument("graph")
    query.add_argument("query")
    query.add_argument("-o", "--output")
    query.set_defaults(func=cmd_query)

    report = sub.add_parser("report", help="run a canned review-analysis report")
    report.add_argument("graph")
    report.add_argument("--kind", required=True, choices=REPORT_KINDS)
    report.add_argument("-o", "--output")
    report.set_defaults(func=cmd_report)

    annotate = sub.add_parser("annotate", help="inject a comment into published HTML")
    annotate.add_argument("article")
    annotate.add_argument("comment", help="JSON file with one review comment")
    annotate.add_argument("-o", "--output")
    annotate.set_defaults(func=cmd_annotate)

    validate = sub.add_parser("validate", help="check a bundle against the model invariants")
    validate.add_argument("bundle")
    validate.set_defaults(func=cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BundleInvalid as exc:
        for violation in exc.violations:
            print(violation, file=sys.stderr)
        return 2
    except (ArannError, OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - invariant breaches
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
