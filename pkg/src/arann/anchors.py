"""Anchored-range machinery: highlight segmentation and annotation targets."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AnchorOutOfRange
from .gazetteer import ClassifiedArticle
from .model import ReviewComment, block_plain_text

# Characters of surrounding context captured by the quote selector.
CONTEXT_CHARS = 32


@dataclass(frozen=True)
class Segment:
    """A maximal range of block text covered by one fixed set of anchors."""

    start: int
    end: int
    covering: tuple[str, ...] = ()


def compute_segments(
    block_text_len: int, anchors: list[tuple[str, int, int]]
) -> list[Segment]:
    """Partition [0, block_text_len) at every anchor boundary.

    Each segment lists the ids of the anchors containing it, in the order the
    anchors were given (document comment order).
    """
    for comment_id, start, end in anchors:
        if not (0 <= start <= block_text_len and 0 <= end <= block_text_len):
            raise AnchorOutOfRange(comment_id, start, end, block_text_len)
    if block_text_len == 0:
        return []
    boundaries = sorted({0, block_text_len} | {s for _, s, _ in anchors} | {e for _, _, e in anchors})
    segments = []
    for lo, hi in zip(boundaries, boundaries[1:]):
        covering = tuple(cid for cid, s, e in anchors if s <= lo and hi <= e)
        segments.append(Segment(lo, hi, covering))
    return segments


@dataclass(frozen=True)
class AnnotationNode:
    """One review comment resolved into a Web Annotation with both selectors."""

    iri: str
    creator: str
    created: str
    body_text: str
    source_iri: str
    exact: str
    prefix: str
    suffix: str
    start: int
    end: int

    @property
    def target_iri(self) -> str:
        return f"{self.iri}-target"

    @property
    def quote_selector_iri(self) -> str:
        return f"{self.iri}-selector-quote"

    @property
    def position_selector_iri(self) -> str:
        return f"{self.iri}-selector-pos"


def build_annotation(comment: ReviewComment, article: ClassifiedArticle) -> AnnotationNode:
    """Resolve a comment's anchor into exact/prefix/suffix plus offsets."""
    identified = article.article
    base = identified.metadata.base_uri
    block = identified.block_by_id(comment.anchor.block_id)
    text = block_plain_text(block)
    start, end = comment.anchor.start, comment.anchor.end
    if not (0 <= start < end <= len(text)):
        raise AnchorOutOfRange(comment.comment_id, start, end, len(text))
    return AnnotationNode(
        iri=f"{base}#comment-{comment.comment_id}",
        creator=comment.author_name,
        created=comment.created,
        body_text=comment.body_text,
        source_iri=f"{base}#{comment.anchor.block_id}",
        exact=text[start:end],
        prefix=text[max(0, start - CONTEXT_CHARS) : start],
        suffix=text[end : end + CONTEXT_CHARS],
        start=start,
        end=end,
    )
