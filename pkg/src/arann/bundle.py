"""Reads article-bundle JSON sequentially into the model, and writes it back out.

The bundle format is documented in docs/bundle-schema.md; unknown optional
keys are ignored for forward compatibility.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Callable, Mapping

from .errors import MalformedJson, MissingField, MissingMedia, UnknownBlockKind
from .model import (
    Anchor,
    ArticleBundle,
    ArticleMetadata,
    Author,
    BlockNode,
    Figure,
    Heading,
    InlineSpan,
    ListBlock,
    MediaAsset,
    Paragraph,
    ReferenceEntry,
    ReviewComment,
    Table,
    normalize_spans,
)

MediaLookup = Mapping[str, bytes]


def _require(obj: Mapping[str, Any], key: str, path: str) -> Any:
    if key not in obj:
        raise MissingField(f"{path}.{key}" if path else key)
    return obj[key]


def _parse_spans(raw: Any, path: str) -> tuple[InlineSpan, ...]:
    if isinstance(raw, str):
        raw = [raw]
    if not isinstance(raw, list):
        raise MalformedJson(f"{path}: expected string or list of spans")
    spans = []
    for i, item in enumerate(raw):
        if isinstance(item, str):
            spans.append(InlineSpan(item))
        elif isinstance(item, dict):
            spans.append(
                InlineSpan(
                    text=str(_require(item, "text", f"{path}[{i}]")),
                    emphasis=bool(item.get("emphasis", False)),
                    strong=bool(item.get("strong", False)),
                    link=item.get("link"),
                )
            )
        else:
            raise MalformedJson(f"{path}[{i}]: expected string or object")
    return normalize_spans(tuple(spans))


def _parse_block(raw: Mapping[str, Any], index: int, media: MediaLookup) -> BlockNode:
    path = f"blocks[{index}]"
    kind = _require(raw, "kind", path)
    if kind == "heading":
        return Heading(
            level=int(_require(raw, "level", path)),
            spans=_parse_spans(_require(raw, "content", path), f"{path}.content"),
        )
    if kind == "paragraph":
        return Paragraph(spans=_parse_spans(_require(raw, "content", path), f"{path}.content"))
    if kind == "figure":
        name = str(_require(raw, "media", path))
        if name not in media:
            raise MissingMedia(name)
        return Figure(media_name=name, caption=_parse_spans(raw.get("caption", []), f"{path}.caption"))
    if kind == "table":
        rows = _require(raw, "rows", path)
        return Table(rows=tuple(tuple(str(cell) for cell in row) for row in rows))
    if kind == "reference_entry":
        return ReferenceEntry(spans=_parse_spans(_require(raw, "content", path), f"{path}.content"))
    if kind == "list":
        items = _require(raw, "items", path)
        return ListBlock(
            items=tuple(_parse_spans(item, f"{path}.items[{i}]") for i, item in enumerate(items))
        )
    raise UnknownBlockKind(str(kind))


def _parse_comment(raw: Mapping[str, Any], index: int) -> ReviewComment:
    path = f"comments[{index}]"
    anchor_raw = _require(raw, "anchor", path)
    if "block_index" not in anchor_raw and "block_id" not in anchor_raw:
        raise MissingField(f"{path}.anchor.block_index")
    anchor = Anchor(
        start=int(_require(anchor_raw, "start", f"{path}.anchor")),
        end=int(_require(anchor_raw, "end", f"{path}.anchor")),
        block_id=anchor_raw.get("block_id"),
        block_index=(
            int(anchor_raw["block_index"]) if "block_index" in anchor_raw else None
        ),
    )
    return ReviewComment(
        comment_id=str(_require(raw, "comment_id", path)),
        author_name=str(_require(raw, "author_name", path)),
        created=str(_require(raw, "created", path)),
        body_text=str(_require(raw, "body_text", path)),
        anchor=anchor,
    )


def parse_bundle(json_text: str, media_lookup: MediaLookup | None = None) -> ArticleBundle:
    """Parse bundle JSON top to bottom, keeping block order exactly."""
    media = dict(media_lookup or {})
    try:
        raw = json.loads(json_text)
    except json.JSONDecodeError as exc:
        byte_offset = len(json_text[: exc.pos].encode("utf-8"))
        raise MalformedJson(
            f"invalid JSON at byte offset {byte_offset}: {exc.msg}", offset=byte_offset
        ) from exc
    if not isinstance(raw, dict):
        raise MalformedJson("bundle must be a JSON object")

    meta_raw = _require(raw, "metadata", "")
    authors = tuple(
        Author(
            name=str(_require(a, "name", f"metadata.authors[{i}]")),
            affiliation=a.get("affiliation"),
            email=a.get("email"),
        )
        for i, a in enumerate(meta_raw.get("authors", []))
    )
    metadata = ArticleMetadata(
        title=str(_require(meta_raw, "title", "metadata")),
        base_uri=str(_require(meta_raw, "base_uri", "metadata")),
        abstract=str(meta_raw.get("abstract", "")),
        authors=authors,
    )

    blocks = tuple(
        _parse_block(b, i, media) for i, b in enumerate(_require(raw, "blocks", ""))
    )
    comments = tuple(_parse_comment(c, i) for i, c in enumerate(_require(raw, "comments", "")))

    used_media = {b.media_name for b in blocks if isinstance(b, Figure)}
    assets = tuple(
        MediaAsset(name, media[name]) for name in sorted(used_media & set(media))
    )
    return ArticleBundle(metadata=metadata, blocks=blocks, comments=comments, media=assets)


# --- Serialization ------------------------------------------------------------


def _spans_json(spans) -> list:
    out = []
    for span in spans:
        if not span.emphasis and not span.strong and span.link is None:
            out.append(span.text)
        else:
            item: dict[str, Any] = {"text": span.text}
            if span.emphasis:
                item["emphasis"] = True
            if span.strong:
                item["strong"] = True
            if span.link is not None:
                item["link"] = span.link
            out.append(item)
    return out


def _block_json(block: BlockNode) -> dict[str, Any]:
    if isinstance(block, Heading):
        return {"kind": "heading", "level": block.level, "content": _spans_json(block.spans)}
    if isinstance(block, Paragraph):
        return {"kind": "paragraph", "content": _spans_json(block.spans)}
    if isinstance(block, Figure):
        return {"kind": "figure", "media": block.media_name, "caption": _spans_json(block.caption)}
    if isinstance(block, Table):
        return {"kind": "table", "rows": [list(row) for row in block.rows]}
    if isinstance(block, ReferenceEntry):
        return {"kind": "reference_entry", "content": _spans_json(block.spans)}
    if isinstance(block, ListBlock):
        return {"kind": "list", "items": [_spans_json(item) for item in block.items]}
    raise TypeError(f"not a block: {block!r}")


def write_bundle(bundle: ArticleBundle) -> str:
    """Serialize a bundle so that parse_bundle(write_bundle(b)) == b."""
    meta = bundle.metadata
    authors = []
    for author in meta.authors:
        item: dict[str, Any] = {"name": author.name}
        if author.affiliation is not None:
            item["affiliation"] = author.affiliation
        if author.email is not None:
            item["email"] = author.email
        authors.append(item)
    comments = []
    for comment in bundle.comments:
        anchor: dict[str, Any] = {}
        if comment.anchor.block_id is not None:
            anchor["block_id"] = comment.anchor.block_id
        else:
            anchor["block_index"] = comment.anchor.block_index
        anchor["start"] = comment.anchor.start
        anchor["end"] = comment.anchor.end
        comments.append(
            {
                "comment_id": comment.comment_id,
                "author_name": comment.author_name,
                "created": comment.created,
                "body_text": comment.body_text,
                "anchor": anchor,
            }
        )
    doc = {
        "metadata": {
            "title": meta.title,
            "abstract": meta.abstract,
            "authors": authors,
            "base_uri": meta.base_uri,
        },
        "blocks": [_block_json(b) for b in bundle.blocks],
        "comments": comments,
    }
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def load_bundle_file(path: str | Path, media_dir: str | Path | None = None) -> ArticleBundle:
    """Read a bundle JSON file plus its sibling ``media`` directory."""
    path = Path(path)
    if media_dir is None:
        media_dir = path.parent / "media"
    media_dir = Path(media_dir)
    lookup: dict[str, bytes] = {}
    if media_dir.is_dir():
        for item in sorted(media_dir.iterdir()):
            if item.is_file():
                lookup[item.name] = item.read_bytes()
    return parse_bundle(path.read_text(encoding="utf-8"), lookup)
