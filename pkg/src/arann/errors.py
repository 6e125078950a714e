"""Exception types raised across the pipeline."""

from __future__ import annotations


class ArannError(Exception):
    """Base class for all errors raised by this package."""


class MalformedJson(ArannError):
    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message)
        self.offset = offset


class MissingField(ArannError):
    def __init__(self, path: str):
        super().__init__(f"missing required field: {path}")
        self.path = path


class UnknownBlockKind(ArannError):
    def __init__(self, kind: str):
        super().__init__(f"unknown block kind: {kind!r}")
        self.kind = kind


class MissingMedia(ArannError):
    def __init__(self, name: str):
        super().__init__(f"figure references missing media asset: {name!r}")
        self.name = name


class BundleInvalid(ArannError):
    def __init__(self, violations):
        super().__init__(f"bundle has {len(violations)} violation(s)")
        self.violations = list(violations)


class IdCollision(ArannError):
    def __init__(self, identifier: str, reason: str):
        super().__init__(f"identifier {identifier!r} rejected: {reason}")
        self.identifier = identifier
        self.reason = reason


class AnchorOutOfRange(ArannError):
    def __init__(self, comment_id: str, start: int, end: int, length: int):
        super().__init__(
            f"anchor [{start},{end}) of comment {comment_id!r} outside [0,{length}]"
        )
        self.comment_id = comment_id
        self.start = start
        self.end = end
        self.length = length


class UnrecognizedDocument(ArannError):
    """The HTML document was not produced by this pipeline's generator."""


class AnchorMismatch(ArannError):
    """A comment anchor does not resolve against the document's current text."""


class UnknownPrefix(ArannError):
    def __init__(self, prefix: str):
        super().__init__(f"unknown CURIE prefix: {prefix!r}")
        self.prefix = prefix


class UnsupportedRdfaFeature(ArannError):
    def __init__(self, attribute: str):
        super().__init__(f"unsupported RDFa feature: @{attribute}")
        self.attribute = attribute


class RdfaGrammarError(ArannError):
    """RDFa markup outside the subset this extractor is scoped to."""


class MalformedNTriples(ArannError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class MalformedHtml(ArannError):
    """The HTML text could not be parsed into an element tree."""


class GazetteerError(ArannError):
    def __init__(self, message: str, line_no: int | None = None):
        where = f"line {line_no}: " if line_no is not None else ""
        super().__init__(where + message)
        self.line_no = line_no


class QueryParseError(ArannError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class DuplicateEntryPath(ArannError):
    def __init__(self, path: str):
        super().__init__(f"duplicate archive entry path: {path!r}")
        self.path = path


class UnsafePath(ArannError):
    def __init__(self, path: str):
        super().__init__(f"unsafe archive entry path: {path!r}")
        self.path = path
