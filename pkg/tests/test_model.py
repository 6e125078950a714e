import random
import re

import pytest
from hypothesis import given, strategies as st

from arann.errors import IdCollision
from arann.model import (
    Anchor,
    ArticleBundle,
    ArticleMetadata,
    Heading,
    InlineSpan,
    Paragraph,
    ReviewComment,
    assign_identifiers,
    block_plain_text,
    document_outline,
    normalize_spans,
    parse_utc_timestamp,
    slugify,
    validate_bundle,
)
from genrandom import random_bundle

ID_RE = re.compile(r"[a-z0-9][a-z0-9-]*")


def _meta(**overrides):
    base = {"title": "T", "base_uri": "https://ex.org/a"}
    base.update(overrides)
    return ArticleMetadata(**base)


def _paragraph(text):
    return Paragraph(spans=(InlineSpan(text),))


def _comment(cid, block, start=0, end=1, created="2020-01-01T00:00:00Z", **kw):
    anchor = Anchor(start=start, end=end, **block)
    return ReviewComment(cid, kw.get("author", "R"), created, kw.get("body", "b"), anchor)


def test_wellformed_fixture_has_no_violations(sample_bundle):
    assert validate_bundle(sample_bundle) == []


def test_dangling_anchor_by_id():
    bundle = ArticleBundle(
        metadata=_meta(),
        blocks=(_paragraph("hello"),),
        comments=(_comment("c1", {"block_id": "p-99"}),),
    )
    violations = validate_bundle(bundle)
    assert [v.rule for v in violations] == ["DanglingAnchor"]
    assert violations[0].element == "c1"
    assert "p-99" in violations[0].detail


def test_dangling_anchor_by_index():
    bundle = ArticleBundle(
        metadata=_meta(),
        blocks=(_paragraph("hello"),),
        comments=(_comment("c1", {"block_index": 3}),),
    )
    assert [v.rule for v in validate_bundle(bundle)] == ["DanglingAnchor"]


def test_empty_anchor_range():
    bundle = ArticleBundle(
        metadata=_meta(),
        blocks=(_paragraph("hello"),),
        comments=(_comment("c2", {"block_index": 0}, start=5, end=5),),
    )
    violations = validate_bundle(bundle)
    assert [v.rule for v in violations] == ["EmptyAnchorRange"]
    assert violations[0].element == "c2"


def test_anchor_out_of_range_and_bad_timestamp():
    bundle = ArticleBundle(
        metadata=_meta(),
        blocks=(_paragraph("hi"),),
        comments=(
            _comment("c1", {"block_index": 0}, start=0, end=3),
            _comment("c2", {"block_index": 0}, created="yesterday-ish"),
        ),
    )
    assert sorted(v.rule for v in validate_bundle(bundle)) == ["AnchorOutOfRange", "BadTimestamp"]


def test_metadata_violations():
    bundle = ArticleBundle(metadata=ArticleMetadata(title="", base_uri="notaniri#frag"))
    rules = {v.rule for v in validate_bundle(bundle)}
    assert rules == {"EmptyTitle", "InvalidBaseUri"}


def test_base_uri_with_fragment_rejected():
    bundle = ArticleBundle(metadata=_meta(base_uri="https://ex.org/a#frag"))
    assert {v.rule for v in validate_bundle(bundle)} == {"InvalidBaseUri"}


def test_duplicate_comment_ids():
    bundle = ArticleBundle(
        metadata=_meta(),
        blocks=(_paragraph("hello"),),
        comments=(
            _comment("c1", {"block_index": 0}),
            _comment("c1", {"block_index": 0}),
        ),
    )
    assert "DuplicateCommentId" in {v.rule for v in validate_bundle(bundle)}


def test_heading_level_and_media_checks():
    bundle = ArticleBundle(
        metadata=_meta(),
        blocks=(Heading(level=7, spans=(InlineSpan("X"),)),),
    )
    assert {v.rule for v in validate_bundle(bundle)} == {"BadHeadingLevel"}


# --- slugs and identifiers ---------------------------------------------------


def test_slug_examples():
    assert slugify("Introduction") == "introduction"
    assert slugify("3.1 Architecture") == "architecture"
    assert slugify("Evaluation & Results") == "evaluation-results"


def test_heading_ids_from_slugs():
    blocks = (
        Heading(1, (InlineSpan("Introduction"),)),
        Heading(1, (InlineSpan("Results"),)),
        Heading(1, (InlineSpan("Results"),)),
        Heading(1, (InlineSpan("3.1 Architecture"),)),
    )
    article = assign_identifiers(ArticleBundle(metadata=_meta(), blocks=blocks))
    assert article.block_ids == (
        "section-introduction",
        "section-results",
        "section-results-2",
        "section-architecture",
    )


def test_prededuplicated_slug_collision_disambiguated():
    blocks = (
        Heading(1, (InlineSpan("Results"),)),
        Heading(1, (InlineSpan("Results"),)),
        Heading(1, (InlineSpan("Results 2"),)),
    )
    article = assign_identifiers(ArticleBundle(metadata=_meta(), blocks=blocks))
    assert len(set(article.block_ids)) == 3
    assert article.block_ids[:2] == ("section-results", "section-results-2")


def test_numbered_block_ids():
    blocks = (
        _paragraph("a"),
        _paragraph("b"),
        Heading(1, (InlineSpan("Methods"),)),
        _paragraph("c"),
    )
    article = assign_identifiers(ArticleBundle(metadata=_meta(), blocks=blocks))
    assert article.block_ids == ("p-1", "p-2", "section-methods", "p-3")


def test_comment_ids_and_anchor_rewrite():
    bundle = ArticleBundle(
        metadata=_meta(),
        blocks=(_paragraph("hello"),),
        comments=(_comment("c1", {"block_index": 0}, start=1, end=4),),
    )
    article = assign_identifiers(bundle)
    anchor = article.comments[0].anchor
    assert anchor.block_id == "p-1" and anchor.block_index is None
    assert (anchor.start, anchor.end) == (1, 4)


def test_malformed_comment_id_rejected():
    bundle = ArticleBundle(
        metadata=_meta(),
        blocks=(_paragraph("hello"),),
        comments=(_comment("C 1!", {"block_index": 0}),),
    )
    with pytest.raises(IdCollision):
        assign_identifiers(bundle)


@pytest.mark.parametrize("seed", range(25))
def test_identifier_uniqueness_and_order(seed):
    bundle = random_bundle(random.Random(seed))
    article = assign_identifiers(bundle)
    assert len(set(article.block_ids)) == len(article.block_ids)
    assert all(ID_RE.fullmatch(i) for i in article.block_ids)
    # order preservation: id sequence projected onto kinds matches input kinds
    prefix_kind = {"section": "heading", "p": "paragraph", "figure": "figure",
                   "table": "table", "ref": "reference_entry", "list": "list"}
    projected = [prefix_kind[i.split("-")[0]] for i in article.block_ids]
    assert projected == [b.kind for b in bundle.blocks]
    # determinism
    assert assign_identifiers(bundle).block_ids == article.block_ids


def test_outline_nesting_by_levels():
    blocks = (
        _paragraph("pre"),
        Heading(1, (InlineSpan("A"),)),
        _paragraph("a1"),
        Heading(2, (InlineSpan("B"),)),
        _paragraph("b1"),
        Heading(1, (InlineSpan("C"),)),
        _paragraph("c1"),
    )
    outline = document_outline(blocks)
    assert [n.index for n in outline] == [0, 1, 5]
    section_a = outline[1]
    assert [n.index for n in section_a.children] == [2, 3]
    assert [n.index for n in section_a.children[1].children] == [4]
    assert [n.index for n in outline[2].children] == [6]


def test_normalize_spans_merges_and_drops():
    spans = (InlineSpan("a"), InlineSpan(""), InlineSpan("b"), InlineSpan("c", emphasis=True))
    merged = normalize_spans(spans)
    assert merged == (InlineSpan("ab"), InlineSpan("c", emphasis=True))


def test_block_plain_text_per_kind(fixture_bundles):
    bundle = dict(fixture_bundles)["all-kinds.json"]
    table = bundle.blocks[2]
    assert block_plain_text(table) == "metricvaluespeed2xerrors0"
    listing = bundle.blocks[3]
    assert block_plain_text(listing) == "one potatotwo potato hotthree"


@given(st.text())
def test_slug_safety(title):
    slug = slugify(title)
    if slug:
        assert ID_RE.fullmatch(slug), slug


def test_timestamp_parsing():
    parse_utc_timestamp("2020-01-01T00:00:00Z")
    parse_utc_timestamp("2020-01-01T00:00:00+00:00")
    with pytest.raises(ValueError):
        parse_utc_timestamp("2020-01-01T00:00:00+02:00")
    with pytest.raises(ValueError):
        parse_utc_timestamp("2020-01-01T00:00:00")
