"""Deterministic, self-contained ZIP packaging of a published article.

Layout: article.html, comments/comment-<id>.html, media/<name>, optional
triples.nt, css/style.css. Identical inputs plus a fixed timestamp produce
byte-identical archives.
"""

from __future__ import annotations

import io
import zipfile
from importlib import resources

from .errors import DuplicateEntryPath, UnsafePath
from .model import parse_utc_timestamp

FIXED_TIMESTAMP = "1980-01-01T00:00:00Z"


def default_stylesheet() -> str:
    return resources.files("arann").joinpath("data/style.css").read_text("utf-8")


def _check_path(path: str) -> None:
    if path.startswith("/") or "\\" in path:
        raise UnsafePath(path)
    if any(segment in ("", ".", "..") for segment in path.split("/")):
        raise UnsafePath(path)


def build_archive(
    article_html: str,
    comment_htmls: dict[str, str],
    media: dict[str, bytes],
    triples: str | None = None,
    timestamp: str = FIXED_TIMESTAMP,
    stylesheet: str | None = None,
) -> bytes:
    """Build the publication ZIP as bytes.

    ``comment_htmls`` maps comment ids to page HTML; ``media`` maps asset
    names to bytes. All entry timestamps are set to ``timestamp``.
    """
    when = parse_utc_timestamp(timestamp)
    date_time = (when.year, when.month, when.day, when.hour, when.minute, when.second)

    entries: list[tuple[str, bytes]] = [("article.html", article_html.encode("utf-8"))]
    for comment_id in sorted(comment_htmls, key=lambda cid: f"comment-{cid}.html"):
        entries.append(
            (f"comments/comment-{comment_id}.html", comment_htmls[comment_id].encode("utf-8"))
        )
    for name in sorted(media):
        entries.append((f"media/{name}", media[name]))
    if triples is not None:
        entries.append(("triples.nt", triples.encode("utf-8")))
    entries.append(("css/style.css", (stylesheet or default_stylesheet()).encode("utf-8")))

    seen: set[str] = set()
    buffer = io.BytesIO()
    with zipfile.ZipFile(buffer, "w") as zf:
        for path, data in entries:
            _check_path(path)
            if path in seen:
                raise DuplicateEntryPath(path)
            seen.add(path)
            info = zipfile.ZipInfo(path, date_time=date_time)
            info.compress_type = zipfile.ZIP_DEFLATED
            info.create_system = 3
            info.external_attr = 0o644 << 16
            zf.writestr(info, data, compress_type=zipfile.ZIP_DEFLATED, compresslevel=9)
    return buffer.getvalue()


def referenced_paths(article_html_root) -> set[str]:
    """Relative href/src targets in the article, for self-containment checks."""
    refs: set[str] = set()
    for el in article_html_root.iter():
        for attr in ("href", "src"):
            value = el.attrs.get(attr)
            if not value or value.startswith("#") or "://" in value:
                continue
            refs.add(value.split("#", 1)[0])
    return refs
