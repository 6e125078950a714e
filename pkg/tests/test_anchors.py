import pytest
from hypothesis import given, strategies as st

from arann.anchors import Segment, build_annotation, compute_segments
from arann.errors import AnchorOutOfRange
from arann.gazetteer import classify_units, default_gazetteer
from arann.model import (
    Anchor,
    ArticleBundle,
    ArticleMetadata,
    InlineSpan,
    Paragraph,
    ReviewComment,
    assign_identifiers,
    block_plain_text,
)
from conftest import load_fixture


def test_no_anchors():
    assert compute_segments(10, []) == [Segment(0, 10, ())]


def test_overlapping_partition():
    segments = compute_segments(30, [("c1", 10, 20), ("c2", 15, 25)])
    assert segments == [
        Segment(0, 10, ()),
        Segment(10, 15, ("c1",)),
        Segment(15, 20, ("c1", "c2")),
        Segment(20, 25, ("c2",)),
        Segment(25, 30, ()),
    ]


def test_boundary_anchors():
    segments = compute_segments(5, [("a", 0, 5)])
    assert segments == [Segment(0, 5, ("a",))]


def test_covering_order_follows_comment_order():
    segments = compute_segments(10, [("z", 0, 10), ("a", 0, 10)])
    assert segments == [Segment(0, 10, ("z", "a"))]


def test_out_of_range():
    with pytest.raises(AnchorOutOfRange):
        compute_segments(10, [("c1", 5, 11)])
    with pytest.raises(AnchorOutOfRange):
        compute_segments(10, [("c1", -1, 5)])


def test_zero_length_text():
    assert compute_segments(0, []) == []


@given(
    st.integers(min_value=1, max_value=80),
    st.lists(st.tuples(st.integers(0, 80), st.integers(0, 80)), max_size=8),
)
def test_partition_properties(length, raw):
    anchors = []
    for i, (a, b) in enumerate(raw):
        a, b = a % (length + 1), b % (length + 1)
        if a == b:
            continue
        anchors.append((f"c{i}", min(a, b), max(a, b)))
    segments = compute_segments(length, anchors)
    # exact partition of [0, length)
    assert segments[0].start == 0 and segments[-1].end == length
    for left, right in zip(segments, segments[1:]):
        assert left.end == right.start
    # boundaries only at anchor endpoints
    interior = {s.start for s in segments[1:]}
    endpoints = {x for _, s, e in anchors for x in (s, e)}
    assert interior <= endpoints
    # covering correctness
    for seg in segments:
        expected = tuple(c for c, s, e in anchors if s <= seg.start and seg.end <= e)
        assert seg.covering == expected


def _classified(bundle):
    return classify_units(assign_identifiers(bundle), default_gazetteer())


def _single_comment_article(text, start, end):
    bundle = ArticleBundle(
        metadata=ArticleMetadata(title="T", base_uri="https://ex.org/a"),
        blocks=(Paragraph(spans=(InlineSpan(text),)),),
        comments=(
            ReviewComment(
                "c1", "R", "2020-01-01T00:00:00Z", "note",
                Anchor(start=start, end=end, block_index=0),
            ),
        ),
    )
    return _classified(bundle)


def test_annotation_at_block_start():
    article = _single_comment_article("Hello world", 0, 5)
    ann = build_annotation(article.article.comments[0], article)
    assert (ann.exact, ann.prefix, ann.suffix) == ("Hello", "", " world")
    assert ann.iri == "https://ex.org/a#comment-c1"
    assert ann.source_iri == "https://ex.org/a#p-1"


def test_annotation_at_block_end():
    article = _single_comment_article("Hello world", 6, 11)
    ann = build_annotation(article.article.comments[0], article)
    assert (ann.exact, ann.prefix, ann.suffix) == ("world", "Hello ", "")


def test_context_truncated_to_32_chars():
    text = "x" * 100
    article = _single_comment_article(text, 50, 60)
    ann = build_annotation(article.article.comments[0], article)
    assert len(ann.prefix) == 32 and len(ann.suffix) == 32


def test_fixture_exact_relocates_uniquely():
    bundle = load_fixture("sample-article.json")
    article = _classified(bundle)
    comment = article.article.comments[0]
    ann = build_annotation(comment, article)
    block = article.article.block_by_id(comment.anchor.block_id)
    text = block_plain_text(block)
    # independent search oracle: the exact string occurs exactly once
    assert text.count(ann.exact) == 1
    assert text.index(ann.exact) == ann.start
