"""In-memory article model: blocks, comments, anchors, and stable identifier assignment.

Every type here is a frozen dataclass; operations are pure functions, so
articles can be processed in parallel without locking.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from datetime import datetime
from urllib.parse import urlsplit

from .errors import IdCollision

ID_PATTERN = re.compile(r"[a-z0-9][a-z0-9-]*")

_LEADING_NUMBERING = re.compile(r"^\(?\d+(?:\.\d+)*[.)]?\s+")


@dataclass(frozen=True)
class InlineSpan:
    """A run of text with uniform inline marks."""

    text: str
    emphasis: bool = False
    strong: bool = False
    link: str | None = None

    @property
    def marks(self) -> tuple:
        return (self.emphasis, self.strong, self.link)


Spans = tuple[InlineSpan, ...]


def spans_text(spans: Spans) -> str:
    return "".join(s.text for s in spans)


def normalize_spans(spans: Spans) -> Spans:
    """Drop empty spans and merge adjacent spans with identical marks."""
    out: list[InlineSpan] = []
    for span in spans:
        if not span.text:
            continue
        if out and out[-1].marks == span.marks:
            out[-1] = replace(out[-1], text=out[-1].text + span.text)
        else:
            out.append(span)
    return tuple(out)


@dataclass(frozen=True)
class Author:
    name: str
    affiliation: str | None = None
    email: str | None = None


@dataclass(frozen=True)
class ArticleMetadata:
    title: str
    base_uri: str
    abstract: str = ""
    authors: tuple[Author, ...] = ()


@dataclass(frozen=True)
class Heading:
    level: int
    spans: Spans
    kind = "heading"


@dataclass(frozen=True)
class Paragraph:
    spans: Spans
    kind = "paragraph"


@dataclass(frozen=True)
class Figure:
    media_name: str
    caption: Spans = ()
    kind = "figure"


@dataclass(frozen=True)
class Table:
    rows: tuple[tuple[str, ...], ...]
    kind = "table"


@dataclass(frozen=True)
class ReferenceEntry:
    spans: Spans
    kind = "reference_entry"


@dataclass(frozen=True)
class ListBlock:
    items: tuple[Spans, ...]
    kind = "list"


BlockNode = Heading | Paragraph | Figure | Table | ReferenceEntry | ListBlock

BLOCK_KINDS = ("heading", "paragraph", "figure", "table", "reference_entry", "list")


def block_plain_text(block: BlockNode) -> str:
    """The mark-free text of a block; anchor offsets index into this string."""
    if isinstance(block, (Heading, Paragraph, ReferenceEntry)):
        return spans_text(block.spans)
    if isinstance(block, Figure):
        return spans_text(block.caption)
    if isinstance(block, Table):
        return "".join(cell for row in block.rows for cell in row)
    if isinstance(block, ListBlock):
        return "".join(spans_text(item) for item in block.items)
    raise TypeError(f"not a block: {block!r}")


@dataclass(frozen=True)
class Anchor:
    """A character range in one block's plain text, counted in Unicode scalar values.

    Input bundles may address the block by position (``block_index``);
    identifier assignment rewrites anchors to ``block_id`` form.
    """

    start: int
    end: int
    block_id: str | None = None
    block_index: int | None = None

    def __post_init__(self):
        if (self.block_id is None) == (self.block_index is None):
            raise ValueError("anchor needs exactly one of block_id / block_index")


@dataclass(frozen=True)
class ReviewComment:
    comment_id: str
    author_name: str
    created: str
    body_text: str
    anchor: Anchor


@dataclass(frozen=True)
class MediaAsset:
    name: str
    data: bytes


@dataclass(frozen=True)
class ArticleBundle:
    metadata: ArticleMetadata
    blocks: tuple[BlockNode, ...] = ()
    comments: tuple[ReviewComment, ...] = ()
    media: tuple[MediaAsset, ...] = ()

    def media_lookup(self) -> dict[str, bytes]:
        return {asset.name: asset.data for asset in self.media}


# --- Validation -------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    rule: str
    element: str
    detail: str = ""

    def __str__(self) -> str:
        msg = f"{self.rule}: {self.element}"
        return f"{msg} ({self.detail})" if self.detail else msg


def _violation(rule: str, element: str, detail: str = "") -> Violation:
    return Violation(rule, element, detail)


def DanglingAnchor(comment_id: str, block_ref: str) -> Violation:
    return _violation("DanglingAnchor", comment_id, f"no block {block_ref}")


def EmptyAnchorRange(comment_id: str) -> Violation:
    return _violation("EmptyAnchorRange", comment_id, "start must be < end")


def parse_utc_timestamp(value: str) -> datetime:
    """Parse an ISO-8601 UTC timestamp; raises ValueError for non-UTC or junk."""
    text = value.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    parsed = datetime.fromisoformat(text)
    if parsed.tzinfo is None or parsed.utcoffset().total_seconds() != 0:
        raise ValueError(f"timestamp must be UTC: {value!r}")
    return parsed


def is_absolute_iri(value: str) -> bool:
    try:
        parts = urlsplit(value)
    except ValueError:
        return False
    return bool(re.fullmatch(r"[A-Za-z][A-Za-z0-9+.-]*", parts.scheme)) and not parts.fragment


def validate_bundle(bundle: ArticleBundle) -> list[Violation]:
    """Check every model invariant; returns violations as data, never raises."""
    violations: list[Violation] = []
    meta = bundle.metadata

    if not meta.title:
        violations.append(_violation("EmptyTitle", "metadata.title"))
    if not is_absolute_iri(meta.base_uri):
        violations.append(
            _violation("InvalidBaseUri", meta.base_uri, "must be absolute, fragment-free")
        )

    media_names = {asset.name for asset in bundle.media}
    for index, block in enumerate(bundle.blocks):
        if isinstance(block, Heading) and not 1 <= block.level <= 6:
            violations.append(
                _violation("BadHeadingLevel", f"blocks[{index}]", f"level {block.level}")
            )
        if isinstance(block, Figure) and block.media_name not in media_names:
            violations.append(
                _violation("UnknownMedia", f"blocks[{index}]", block.media_name)
            )

    block_ids = _structural_ids(bundle.blocks)
    id_to_index = {bid: i for i, bid in enumerate(block_ids)}

    seen_comment_ids: set[str] = set()
    for comment in bundle.comments:
        cid = comment.comment_id
        if cid in seen_comment_ids:
            violations.append(_violation("DuplicateCommentId", cid))
        seen_comment_ids.add(cid)
        try:
            parse_utc_timestamp(comment.created)
        except ValueError:
            violations.append(_violation("BadTimestamp", cid, comment.created))

        anchor = comment.anchor
        if anchor.block_index is not None:
            if not 0 <= anchor.block_index < len(bundle.blocks):
                violations.append(DanglingAnchor(cid, f"index {anchor.block_index}"))
                continue
            target = bundle.blocks[anchor.block_index]
        else:
            index = id_to_index.get(anchor.block_id)
            if index is None:
                violations.append(DanglingAnchor(cid, anchor.block_id))
                continue
            target = bundle.blocks[index]

        length = len(block_plain_text(target))
        if anchor.start >= anchor.end:
            violations.append(EmptyAnchorRange(cid))
        elif not (0 <= anchor.start and anchor.end <= length):
            violations.append(
                _violation(
                    "AnchorOutOfRange",
                    cid,
                    f"[{anchor.start},{anchor.end}) vs length {length}",
                )
            )
    return violations


# --- Identifier assignment ---------------------------------------------------


def slugify(title: str) -> str:
    """Lowercased, numbering-stripped, hyphen-joined form of a heading title."""
    text = _LEADING_NUMBERING.sub("", title.strip()).lower()
    text = re.sub(r"[^a-z0-9]+", "-", text).strip("-")
    return text


def _structural_ids(blocks: tuple[BlockNode, ...]) -> tuple[str, ...]:
    """Assign ids to blocks only; depends on nothing but the block sequence."""
    used: set[str] = set()
    counters = {"paragraph": 0, "figure": 0, "table": 0, "reference_entry": 0, "list": 0}
    prefixes = {
        "paragraph": "p",
        "figure": "figure",
        "table": "table",
        "reference_entry": "ref",
        "list": "list",
    }
    ids: list[str] = []
    for block in blocks:
        if isinstance(block, Heading):
            base = f"section-{slugify(spans_text(block.spans))}".rstrip("-")
            candidate = base
            suffix = 1
            while candidate in used:
                suffix += 1
                candidate = f"{base}-{suffix}"
        else:
            counters[block.kind] += 1
            candidate = f"{prefixes[block.kind]}-{counters[block.kind]}"
        used.add(candidate)
        ids.append(candidate)
    return tuple(ids)


@dataclass(frozen=True)
class IdentifiedArticle:
    """Bundle plus a unique, stable id for every block; anchors in block_id form."""

    metadata: ArticleMetadata
    blocks: tuple[BlockNode, ...]
    block_ids: tuple[str, ...]
    comments: tuple[ReviewComment, ...]
    media: tuple[MediaAsset, ...]

    def id_of(self, index: int) -> str:
        return self.block_ids[index]

    def block_by_id(self, block_id: str) -> BlockNode:
        return self.blocks[self.block_ids.index(block_id)]

    def comment_element_id(self, comment: ReviewComment) -> str:
        return f"comment-{comment.comment_id}"


def assign_identifiers(bundle: ArticleBundle) -> IdentifiedArticle:
    """Deterministically assign fragment identifiers to blocks and comments.

    Precondition: ``validate_bundle(bundle)`` returned no violations.
    Raises IdCollision when a comment id is not a usable fragment token or
    collides with an already-assigned id.
    """
    block_ids = _structural_ids(bundle.blocks)
    used = set(block_ids)
    for comment in bundle.comments:
        element_id = f"comment-{comment.comment_id}"
        if not ID_PATTERN.fullmatch(element_id):
            raise IdCollision(element_id, "not a lowercase alphanumeric-hyphen token")
        if element_id in used:
            raise IdCollision(element_id, "already assigned")
        used.add(element_id)

    id_by_index = dict(enumerate(block_ids))
    comments = tuple(
        replace(
            c,
            anchor=Anchor(
                start=c.anchor.start,
                end=c.anchor.end,
                block_id=(
                    c.anchor.block_id
                    if c.anchor.block_id is not None
                    else id_by_index[c.anchor.block_index]
                ),
            ),
        )
        for c in bundle.comments
    )
    return IdentifiedArticle(
        metadata=bundle.metadata,
        blocks=bundle.blocks,
        block_ids=block_ids,
        comments=comments,
        media=bundle.media,
    )


# --- Section outline ---------------------------------------------------------


@dataclass(frozen=True)
class OutlineNode:
    """One block in the reconstructed section tree.

    A level-n heading owns every subsequent block until the next heading of
    level <= n; non-heading nodes never have children.
    """

    index: int
    children: tuple[OutlineNode, ...] = ()


def document_outline(blocks: tuple[BlockNode, ...]) -> tuple[OutlineNode, ...]:
    top: list = []
    # stack of (level, children-list) for open sections
    stack: list[tuple[int, list]] = []

    def close_down_to(level: int):
        while stack and stack[-1][0] >= level:
            stack.pop()

    collected: dict[int, list] = {}
    for index, block in enumerate(blocks):
        if isinstance(block, Heading):
            close_down_to(block.level)
            children: list = []
            collected[index] = children
            node_slot = stack[-1][1] if stack else top
            node_slot.append(index)
            stack.append((block.level, children))
        else:
            (stack[-1][1] if stack else top).append(index)

    def build(indices: list) -> tuple[OutlineNode, ...]:
        return tuple(
            OutlineNode(i, build(collected[i])) if i in collected else OutlineNode(i)
            for i in indices
        )

    return build(top)
