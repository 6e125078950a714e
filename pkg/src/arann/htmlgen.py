"""Generates the HTML+RDFa article and supports post-publication comment injection.

The emitted RDFa is deliberately confined to prefix/typeof/property/resource/
about/content/datatype so the extractor in ``rdfa`` can read back exactly the
graph that ``triples.direct_triples`` produces from the model.
"""

from __future__ import annotations

from .anchors import CONTEXT_CHARS, AnnotationNode, Segment, build_annotation, compute_segments
from .errors import AnchorMismatch, IdCollision, UnrecognizedDocument
from .gazetteer import ClassifiedArticle
from .htmldoc import Element, HtmlDocument
from .model import (
    BlockNode,
    Figure,
    Heading,
    InlineSpan,
    ListBlock,
    Paragraph,
    ReferenceEntry,
    ReviewComment,
    Table,
    document_outline,
    spans_text,
)
from .rdf import PrefixMap

ARTICLE_TYPEOF = "schema:ScholarlyArticle swrc:Article"

_BLOCK_TAGS = frozenset({"section", "p", "figure", "table", "ul", "div"})

Anchors = list[tuple[str, int, int]]


def comment_page_path(comment_id: str) -> str:
    return f"comments/comment-{comment_id}.html"


# --- text runs ---------------------------------------------------------------


def _wrap_marks(node, run: InlineSpan):
    if run.emphasis:
        node = Element("em", children=[node])
    if run.strong:
        node = Element("strong", children=[node])
    if run.link is not None:
        node = Element("a", {"href": run.link}, [node])
    return node


def _fill_runs(
    container: Element, runs: list[InlineSpan], segments: list[Segment], offset: int
) -> int:
    """Render runs into a container, splitting them at segment boundaries and
    wrapping covered pieces in highlight spans. Returns the next offset."""
    pos = offset
    for run in runs:
        run_end = pos + len(run.text)
        for seg in segments:
            lo, hi = max(seg.start, pos), min(seg.end, run_end)
            if lo >= hi:
                continue
            piece = run.text[lo - pos : hi - pos]
            node = piece
            if seg.covering:
                node = Element(
                    "span",
                    {"class": "highlight", "data-comments": " ".join(seg.covering)},
                    [piece],
                )
            container.append(_wrap_marks(node, run))
        pos = run_end
    return pos


def _extract_runs(el: Element, emphasis=False, strong=False, link=None) -> list[InlineSpan]:
    """Recover (text, marks) runs from rendered inline content, ignoring
    highlight wrappers."""
    runs: list[InlineSpan] = []
    for child in el.children:
        if isinstance(child, str):
            runs.append(InlineSpan(child, emphasis=emphasis, strong=strong, link=link))
        elif child.tag == "em":
            runs.extend(_extract_runs(child, True, strong, link))
        elif child.tag == "strong":
            runs.extend(_extract_runs(child, emphasis, True, link))
        elif child.tag == "a":
            runs.extend(_extract_runs(child, emphasis, strong, child.attrs.get("href")))
        else:
            runs.extend(_extract_runs(child, emphasis, strong, link))
    return runs


def _block_containers(block_el: Element) -> list[Element]:
    """The leaf elements that hold a block's anchorable text, in text order."""
    tag = block_el.tag
    if tag == "p":
        return [block_el]
    if tag == "section":
        heads = [
            c
            for c in block_el.children
            if isinstance(c, Element) and c.tag in ("h1", "h2", "h3", "h4", "h5", "h6")
        ]
        return heads[:1]
    if tag == "figure":
        return block_el.find_all("figcaption")
    if tag == "table":
        return block_el.find_all("td")
    if tag == "ul":
        return [c for c in block_el.children if isinstance(c, Element) and c.tag == "li"]
    if tag == "div":
        citation = block_el.find("span", property="schema:citation")
        return [citation] if citation is not None else []
    raise UnrecognizedDocument(f"element #{block_el.attrs.get('id')} is not a block")


# --- generation ---------------------------------------------------------------


def _render_block(
    block: BlockNode, block_id: str, anchors: Anchors
) -> Element:
    attrs = {"id": block_id, "property": "schema:hasPart", "resource": f"#{block_id}"}

    if isinstance(block, Heading):
        section = Element("section", attrs)
        heading = Element(f"h{block.level}")
        segments = compute_segments(len(spans_text(block.spans)), anchors)
        _fill_runs(heading, list(block.spans), segments, 0)
        section.children.append(heading)
        return section

    if isinstance(block, Paragraph):
        paragraph = Element("p", attrs)
        segments = compute_segments(len(spans_text(block.spans)), anchors)
        _fill_runs(paragraph, list(block.spans), segments, 0)
        return paragraph

    if isinstance(block, Figure):
        figure = Element("figure", {**attrs, "typeof": "schema:ImageObject"})
        caption_text = spans_text(block.caption)
        figure.children.append(
            Element("img", {"src": f"media/{block.media_name}", "alt": caption_text})
        )
        if caption_text != "":
            figcaption = Element("figcaption", {"property": "schema:caption"})
            segments = compute_segments(len(caption_text), anchors)
            _fill_runs(figcaption, list(block.caption), segments, 0)
            figure.children.append(figcaption)
        return figure

    if isinstance(block, Table):
        table = Element("table", {**attrs, "typeof": "schema:Table"})
        total = sum(len(cell) for row in block.rows for cell in row)
        segments = compute_segments(total, anchors)
        offset = 0
        for row in block.rows:
            tr = Element("tr")
            for cell in row:
                td = Element("td")
                offset = _fill_runs(td, [InlineSpan(cell)] if cell else [], segments, offset)
                tr.children.append(td)
            table.children.append(tr)
        return table

    if isinstance(block, ReferenceEntry):
        entry = Element("div", {**attrs, "class": "reference"})
        citation = Element("span", {"about": "", "property": "schema:citation"})
        segments = compute_segments(len(spans_text(block.spans)), anchors)
        _fill_runs(citation, list(block.spans), segments, 0)
        entry.children.append(citation)
        return entry

    if isinstance(block, ListBlock):
        listing = Element("ul", attrs)
        total = sum(len(spans_text(item)) for item in block.items)
        segments = compute_segments(total, anchors)
        offset = 0
        for item in block.items:
            li = Element("li")
            offset = _fill_runs(li, list(item), segments, offset)
            listing.children.append(li)
        return listing

    raise TypeError(f"not a block: {block!r}")


def _render_aside(ann: AnnotationNode, comment_id: str) -> Element:
    def prop_span(prop: str, *, resource=None, content=None, typeof=None, datatype=None, children=()):
        attrs = {"property": prop}
        if resource is not None:
            attrs["resource"] = resource
        if content is not None:
            attrs["content"] = content
        if typeof is not None:
            attrs["typeof"] = typeof
        if datatype is not None:
            attrs["datatype"] = datatype
        return Element("span", attrs, list(children))

    element_id = f"comment-{comment_id}"
    meta = Element("p", {"class": "annotation-meta"})
    meta.children = [
        Element("span", {"property": "dcterms:creator"}, [ann.creator]),
        ", ",
        Element(
            "time",
            {"property": "dcterms:created", "content": ann.created, "datatype": "xsd:dateTime"},
            [ann.created],
        ),
    ]
    body = Element("p", {"class": "annotation-body", "property": "oa:bodyValue"}, [ann.body_text])
    link = Element(
        "p",
        {"class": "annotation-link"},
        [Element("a", {"href": comment_page_path(comment_id)}, ["standalone comment"])],
    )
    target = prop_span(
        "oa:hasTarget",
        resource=f"#{element_id}-target",
        typeof="oa:SpecificResource",
        children=[
            prop_span("oa:hasSource", resource="#" + ann.source_iri.rsplit("#", 1)[1]),
            prop_span(
                "oa:hasSelector",
                resource=f"#{element_id}-selector-quote",
                typeof="oa:TextQuoteSelector",
                children=[
                    prop_span("oa:exact", content=ann.exact),
                    prop_span("oa:prefix", content=ann.prefix),
                    prop_span("oa:suffix", content=ann.suffix),
                ],
            ),
            prop_span(
                "oa:hasSelector",
                resource=f"#{element_id}-selector-pos",
                typeof="oa:TextPositionSelector",
                children=[
                    prop_span("oa:start", content=str(ann.start), datatype="xsd:nonNegativeInteger"),
                    prop_span("oa:end", content=str(ann.end), datatype="xsd:nonNegativeInteger"),
                ],
            ),
        ],
    )
    return Element(
        "aside",
        {"class": "annotation", "id": element_id, "about": f"#{element_id}", "typeof": "oa:Annotation"},
        [meta, body, link, prop_span("oa:motivatedBy", resource="oa:commenting"), target],
    )


def generate_html(article: ClassifiedArticle, prefixes: PrefixMap | None = None) -> HtmlDocument:
    """Render the classified article as deterministic dokieli-style HTML+RDFa."""
    identified = article.article
    meta = identified.metadata
    prefixes = prefixes or PrefixMap()

    anchors_by_block: dict[str, Anchors] = {}
    for comment in identified.comments:
        anchors_by_block.setdefault(comment.anchor.block_id, []).append(
            (comment.comment_id, comment.anchor.start, comment.anchor.end)
        )

    root = Element(
        "article",
        {"about": meta.base_uri, "prefix": prefixes.declaration(), "typeof": ARTICLE_TYPEOF},
    )
    root.children.append(Element("h1", {"property": "schema:name"}, [meta.title]))

    if meta.authors:
        authors = Element("div", {"class": "authors"})
        for ordinal, author in enumerate(meta.authors, start=1):
            person = Element(
                "span",
                {
                    "property": "schema:author",
                    "resource": f"#{article.author_id(ordinal)}",
                    "typeof": "schema:Person",
                },
                [Element("span", {"property": "schema:name"}, [author.name])],
            )
            if author.affiliation is not None:
                person.append(", ")
                person.append(
                    Element("span", {"property": "schema:affiliation"}, [author.affiliation])
                )
            if ordinal > 1:
                authors.append("; ")
            authors.append(person)
        root.children.append(authors)

    if meta.abstract.strip():
        root.children.append(
            Element("div", {"class": "abstract", "property": "schema:abstract"}, [meta.abstract])
        )

    heading_classes = dict(article.heading_classes)

    def render_outline(node) -> Element:
        block = identified.blocks[node.index]
        block_id = identified.block_ids[node.index]
        el = _render_block(block, block_id, anchors_by_block.get(block_id, []))
        if isinstance(block, Heading):
            classes = heading_classes.get(block_id, frozenset())
            if classes:
                el.attrs["typeof"] = " ".join(sorted(classes))
            for child in node.children:
                el.children.append(render_outline(child))
        return el

    for node in document_outline(identified.blocks):
        root.children.append(render_outline(node))

    for comment in identified.comments:
        root.children.append(_render_aside(build_annotation(comment, article), comment.comment_id))

    head = Element(
        "head",
        children=[
            Element("meta", {"charset": "utf-8"}),
            Element("title", children=[meta.title]),
            Element("link", {"rel": "stylesheet", "href": "css/style.css"}),
        ],
    )
    body = Element("body", children=[root])
    return HtmlDocument(Element("html", children=[head, body]))


def render_comment_page(ann: AnnotationNode, comment_id: str) -> HtmlDocument:
    """The standalone HTML page for one review comment."""
    main = Element("div", {"class": "comment-page"})
    main.children = [
        Element("h1", children=[f"Review comment {comment_id}"]),
        Element(
            "p",
            {"class": "annotation-meta"},
            [ann.creator, ", ", Element("time", children=[ann.created])],
        ),
        Element("blockquote", {"class": "annotation-quote"}, [ann.exact]),
        Element("p", {"class": "annotation-body"}, [ann.body_text]),
        Element(
            "p",
            {"class": "annotation-link"},
            [
                Element(
                    "a",
                    {"href": f"../article.html#comment-{comment_id}"},
                    ["view in context"],
                )
            ],
        ),
    ]
    head = Element(
        "head",
        children=[
            Element("meta", {"charset": "utf-8"}),
            Element("title", children=[f"Review comment {comment_id}"]),
            Element("link", {"rel": "stylesheet", "href": "../css/style.css"}),
        ],
    )
    return HtmlDocument(Element("html", children=[head, Element("body", children=[main])]))


# --- post-publication injection ----------------------------------------------


def _article_root(doc: HtmlDocument) -> Element:
    for el in doc.root.iter():
        if el.tag == "article" and "schema:ScholarlyArticle" in el.attrs.get("typeof", "").split():
            return el
    raise UnrecognizedDocument("no article element typed schema:ScholarlyArticle")


def _read_aside_anchor(aside: Element) -> tuple[str, str, int, int] | None:
    """(comment_id, block_id, start, end) recorded in an annotation aside."""
    element_id = aside.attrs.get("id", "")
    if not element_id.startswith("comment-"):
        return None
    target = aside.find("span", property="oa:hasTarget")
    if target is None:
        return None
    source = target.find("span", property="oa:hasSource")
    start_el = target.find("span", property="oa:start")
    end_el = target.find("span", property="oa:end")
    if source is None or start_el is None or end_el is None:
        return None
    block_id = source.attrs.get("resource", "").lstrip("#")
    return (
        element_id[len("comment-") :],
        block_id,
        int(start_el.attrs["content"]),
        int(end_el.attrs["content"]),
    )


def existing_annotations(doc: HtmlDocument) -> list[tuple[str, str, int, int]]:
    root = _article_root(doc)
    out = []
    for aside in root.find_all("aside"):
        if "oa:Annotation" not in aside.attrs.get("typeof", "").split():
            continue
        read = _read_aside_anchor(aside)
        if read is not None:
            out.append(read)
    return out


def inject_comment(
    doc: HtmlDocument, comment: ReviewComment, expected_exact: str | None = None
) -> HtmlDocument:
    """Add one review comment to an already-published document.

    The result equals regenerating the document with the comment appended to
    the bundle: highlights are re-segmented and a new annotation aside is
    appended after the existing ones.
    """
    doc = doc.copy()
    root = _article_root(doc)
    base = root.attrs.get("about", "")
    if "://" not in base:
        raise UnrecognizedDocument("article root carries no absolute base IRI")

    if comment.anchor.block_id is None:
        raise AnchorMismatch("injected anchors must address blocks by id")
    block_id = comment.anchor.block_id
    element_id = f"comment-{comment.comment_id}"
    if doc.root.by_id(element_id) is not None:
        raise IdCollision(element_id, "already present in document")

    block_el = root.by_id(block_id)
    if block_el is None or block_el.tag not in _BLOCK_TAGS:
        raise AnchorMismatch(f"no block with id {block_id!r}")

    containers = _block_containers(block_el)
    runs_per_container = [_extract_runs(c) for c in containers]
    text = "".join(spans_text(tuple(runs)) for runs in runs_per_container)
    start, end = comment.anchor.start, comment.anchor.end
    if not (0 <= start < end <= len(text)):
        raise AnchorMismatch(
            f"anchor [{start},{end}) outside the current text of {block_id!r} (length {len(text)})"
        )
    if expected_exact is not None and text[start:end] != expected_exact:
        raise AnchorMismatch(
            f"text at [{start},{end}) is {text[start:end]!r}, expected {expected_exact!r}"
        )

    anchors: Anchors = [
        (cid, s, e) for cid, bid, s, e in existing_annotations(doc) if bid == block_id
    ]
    anchors.append((comment.comment_id, start, end))
    segments = compute_segments(len(text), anchors)

    offset = 0
    for container, runs in zip(containers, runs_per_container):
        container.children = []
        offset = _fill_runs(container, runs, segments, offset)

    ann = AnnotationNode(
        iri=f"{base}#{element_id}",
        creator=comment.author_name,
        created=comment.created,
        body_text=comment.body_text,
        source_iri=f"{base}#{block_id}",
        exact=text[start:end],
        prefix=text[max(0, start - CONTEXT_CHARS) : start],
        suffix=text[end : end + CONTEXT_CHARS],
        start=start,
        end=end,
    )
    last_aside = -1
    for i, child in enumerate(root.children):
        if isinstance(child, Element) and child.tag == "aside":
            last_aside = i
    insert_at = last_aside + 1 if last_aside >= 0 else len(root.children)
    root.children.insert(insert_at, _render_aside(ann, comment.comment_id))
    return doc
