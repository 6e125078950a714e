"""A minimal HTML5 element tree with a canonical, byte-stable serializer.

The serializer pretty-prints purely structural containers and keeps every
text-bearing element on a single line, so rendered text (and therefore
anchor offsets) survives a serialize/parse round trip unchanged. The parser
mirrors that rule by dropping whitespace-only text nodes that sit directly
inside structural containers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from html import escape
from html.parser import HTMLParser
from typing import Iterator, Union

from .errors import MalformedHtml

# Attribute names serialized first, in this exact order; anything else follows
# alphabetically.
ATTR_ORDER = ("id", "class", "typeof", "property", "resource", "about", "content", "datatype")

VOID_ELEMENTS = frozenset({"area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "source", "track", "wbr"})

# Containers that hold only element children in this generator's output;
# whitespace between their children is formatting, not content.
PRETTY_TAGS = frozenset({"html", "head", "body", "article", "section", "div", "figure", "table", "tr", "ul", "ol", "aside"})

Node = Union["Element", str]


@dataclass(eq=True)
class Element:
    tag: str
    attrs: dict[str, str] = field(default_factory=dict)
    children: list[Node] = field(default_factory=list)

    def append(self, node: Node) -> None:
        if isinstance(node, str) and self.children and isinstance(self.children[-1], str):
            self.children[-1] += node
        else:
            self.children.append(node)

    def text(self) -> str:
        """All descendant text, concatenated in document order."""
        parts = []
        for child in self.children:
            parts.append(child if isinstance(child, str) else child.text())
        return "".join(parts)

    def iter(self) -> Iterator["Element"]:
        yield self
        for child in self.children:
            if isinstance(child, Element):
                yield from child.iter()

    def find(self, tag: str | None = None, **attrs: str) -> "Element | None":
        for el in self.iter():
            if tag is not None and el.tag != tag:
                continue
            if all(el.attrs.get(k) == v for k, v in attrs.items()):
                return el
        return None

    def find_all(self, tag: str | None = None, **attrs: str) -> list["Element"]:
        return [
            el
            for el in self.iter()
            if (tag is None or el.tag == tag)
            and all(el.attrs.get(k) == v for k, v in attrs.items())
        ]

    def by_id(self, element_id: str) -> "Element | None":
        return self.find(id=element_id)

    def copy(self) -> "Element":
        return Element(
            self.tag,
            dict(self.attrs),
            [c if isinstance(c, str) else c.copy() for c in self.children],
        )


@dataclass(eq=True)
class HtmlDocument:
    root: Element

    def serialize(self) -> str:
        return "<!doctype html>\n" + _serialize_element(self.root, 0) + "\n"

    def copy(self) -> "HtmlDocument":
        return HtmlDocument(self.root.copy())


def _escape_attr(value: str) -> str:
    out = escape(value, quote=True)
    return out.replace("\n", "&#10;").replace("\r", "&#13;").replace("\t", "&#9;")


def _open_tag(el: Element) -> str:
    rank = {name: i for i, name in enumerate(ATTR_ORDER)}
    ordered = sorted(el.attrs.items(), key=lambda kv: (rank.get(kv[0], len(ATTR_ORDER)), kv[0]))
    attrs = "".join(f' {name}="{_escape_attr(value)}"' for name, value in ordered)
    return f"<{el.tag}{attrs}>"


def _is_pretty(el: Element) -> bool:
    return (
        el.tag in PRETTY_TAGS
        and bool(el.children)
        and all(isinstance(c, Element) for c in el.children)
    )


def _serialize_element(el: Element, indent: int) -> str:
    pad = "  " * indent
    opening = pad + _open_tag(el)
    if el.tag in VOID_ELEMENTS:
        return opening
    if not el.children:
        return f"{opening}</{el.tag}>"
    if _is_pretty(el):
        inner = "\n".join(_serialize_element(c, indent + 1) for c in el.children)
        return f"{opening}\n{inner}\n{pad}</{el.tag}>"
    return f"{opening}{_serialize_inline_children(el)}</{el.tag}>"


def _serialize_inline_children(el: Element) -> str:
    parts = []
    for child in el.children:
        if isinstance(child, str):
            parts.append(escape(child, quote=False))
        else:
            opening = _open_tag(child)
            if child.tag in VOID_ELEMENTS:
                parts.append(opening)
            else:
                parts.append(f"{opening}{_serialize_inline_children(child)}</{child.tag}>")
    return "".join(parts)


class _TreeBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.rootless: list[Node] = []
        self.stack: list[Element] = []

    def _append(self, node: Node) -> None:
        if self.stack:
            self.stack[-1].append(node)
        elif isinstance(node, Element):
            self.rootless.append(node)
        # stray text outside the root element is dropped

    def handle_starttag(self, tag, attrs):
        el = Element(tag, {k: (v if v is not None else "") for k, v in attrs})
        self._append(el)
        if tag not in VOID_ELEMENTS:
            self.stack.append(el)

    def handle_startendtag(self, tag, attrs):
        self._append(Element(tag, {k: (v if v is not None else "") for k, v in attrs}))

    def handle_endtag(self, tag):
        if not self.stack or self.stack[-1].tag != tag:
            raise MalformedHtml(f"unbalanced close tag </{tag}>")
        self.stack.pop()

    def handle_data(self, data):
        if self.stack:
            self.stack[-1].append(data)


def _drop_formatting_whitespace(el: Element) -> None:
    if el.tag in PRETTY_TAGS:
        el.children = [
            c for c in el.children if not (isinstance(c, str) and c.strip() == "")
        ]
    for child in el.children:
        if isinstance(child, Element):
            _drop_formatting_whitespace(child)


def parse_html(text: str) -> HtmlDocument:
    """Parse serialized HTML back into a tree, discarding formatting whitespace."""
    builder = _TreeBuilder()
    builder.feed(text)
    builder.close()
    if builder.stack:
        raise MalformedHtml(f"unclosed element <{builder.stack[-1].tag}>")
    roots = [n for n in builder.rootless if isinstance(n, Element)]
    if len(roots) != 1:
        raise MalformedHtml(f"expected exactly one root element, found {len(roots)}")
    root = roots[0]
    _drop_formatting_whitespace(root)
    return HtmlDocument(root)
