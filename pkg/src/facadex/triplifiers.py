"""Format-specific transformers from raw bytes to facade trees.

Each triplifier is a stateless function ``(bytes, TriplifierOptions,
source_name) -> FacadeTree``. The registry resolves media types and
file extensions to triplifiers.
"""

from __future__ import annotations

import base64
import csv as csv_mod
import io
import json
import logging
import re
import xml.parsers.expat
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

from .errors import ConfigError, MetadataError, SourceParseError
from .model import (
    FacadeContainer,
    FacadeTree,
    FacadeValue,
    NumberKey,
    StringKey,
)

log = logging.getLogger(__name__)

DEFAULT_SOURCE = "urn:facade-x:data-source"
OCTET_STREAM = "application/octet-stream"


@dataclass(frozen=True)
class TriplifierOptions:
    charset: str = "utf-8"
    csv_headers: bool = False
    text_tokenizer_pattern: str = " "
    format_extras: tuple = ()  # (key, value) pairs for future formats

    def extras_dict(self) -> dict:
        return dict(self.format_extras)


def _decode(data: bytes, opts: TriplifierOptions) -> str:
    try:
        return data.decode(opts.charset)
    except LookupError as exc:
        raise ConfigError(f"unsupported charset {opts.charset!r}") from exc
    except UnicodeDecodeError as exc:
        raise SourceParseError(
            f"cannot decode input as {opts.charset}", position=f"byte {exc.start}"
        ) from exc


# ---------------------------------------------------------------------------
# CSV


def triplify_csv(data, opts=TriplifierOptions(), source_name=DEFAULT_SOURCE):
    """Rows become number-keyed child containers; cells become slots
    keyed by header name (csv_headers) or column index. Empty cells
    produce no slot."""
    text = _decode(data, opts)
    reader = csv_mod.reader(io.StringIO(text, newline=""))
    headers = None
    rows = []
    try:
        for record in reader:
            if opts.csv_headers and headers is None:
                headers = record
                if len(set(headers)) != len(headers):
                    dupes = sorted({h for h in headers if headers.count(h) > 1})
                    raise SourceParseError(
                        f"duplicate header names {dupes}", position="line 1"
                    )
                continue
            slots = []
            for col, cell in enumerate(record, start=1):
                if cell == "":
                    continue
                if headers is not None:
                    if col > len(headers):
                        raise SourceParseError(
                            f"row has more cells than headers",
                            position=f"line {reader.line_num}",
                        )
                    key = StringKey(headers[col - 1])
                else:
                    key = NumberKey(col)
                slots.append((key, FacadeValue(cell)))
            rows.append(FacadeContainer(slots=tuple(slots)))
    except csv_mod.Error as exc:
        raise SourceParseError(
            f"malformed CSV: {exc}", position=f"line {reader.line_num}"
        ) from exc
    root_slots = tuple(
        (NumberKey(i), row) for i, row in enumerate(rows, start=1)
    )
    return FacadeTree(FacadeContainer(slots=root_slots), source_name)


# ---------------------------------------------------------------------------
# JSON


def _number_value(num) -> FacadeValue:
    if isinstance(num, int):
        return FacadeValue(str(num), "integer")
    if num.is_integer() and abs(num) < 2**53:
        return FacadeValue(str(int(num)), "integer")
    return FacadeValue(repr(num), "double")


def _json_content(node):
    """Map a parsed JSON node to slot content; None means omit."""
    if node is None:
        return None
    if isinstance(node, bool):
        return FacadeValue("true" if node else "false", "boolean")
    if isinstance(node, (int, float)):
        return _number_value(node)
    if isinstance(node, str):
        return FacadeValue(node)
    if isinstance(node, dict):
        slots = []
        for key, child in node.items():
            content = _json_content(child)
            if content is not None:
                slots.append((StringKey(key), content))
        return FacadeContainer(slots=tuple(slots))
    if isinstance(node, list):
        slots = []
        index = 1
        for child in node:
            content = _json_content(child)
            if content is not None:
                slots.append((NumberKey(index), content))
                index += 1
        return FacadeContainer(slots=tuple(slots))
    raise SourceParseError(f"unsupported JSON node {type(node).__name__}")


def _dedupe_pairs(pairs):
    # JSON grammar permits duplicate keys; the slot-key uniqueness axiom
    # does not. Last occurrence wins.
    out = {}
    for k, v in pairs:
        if k in out:
            log.warning("duplicate JSON key %r: keeping the last occurrence", k)
        out[k] = v
    return out


def triplify_json(data, opts=TriplifierOptions(), source_name=DEFAULT_SOURCE):
    text = _decode(data, opts)
    try:
        doc = json.loads(text, object_pairs_hook=_dedupe_pairs)
    except json.JSONDecodeError as exc:
        raise SourceParseError(
            f"invalid JSON: {exc.msg}", position=f"byte {exc.pos}"
        ) from exc
    content = _json_content(doc)
    if content is None:
        root = FacadeContainer()
    elif isinstance(content, FacadeContainer):
        root = content
    else:
        # top-level scalar: a root with a single slot keyed 1
        root = FacadeContainer(slots=((NumberKey(1), content),))
    return FacadeTree(root, source_name)


# ---------------------------------------------------------------------------
# XML

_WS = re.compile(r"^\s*$")


class _XmlBuilder:
    """Expat handlers building the container tree.

    Namespace processing is off on purpose: element and attribute keys
    are the qualified lexical names as written in the document.
    """

    def __init__(self):
        self.stack = []
        self.root = None

    def _flush_text(self):
        node = self.stack[-1]
        text = "".join(node["buf"])
        node["buf"] = []
        if text and not _WS.match(text):
            node["children"].append(FacadeValue(text.strip()))

    def start(self, name, attrs):
        if self.stack:
            self._flush_text()
        self.stack.append({"name": name, "attrs": attrs, "children": [], "buf": []})

    def chars(self, data):
        if self.stack:
            self.stack[-1]["buf"].append(data)

    def end(self, name):
        self._flush_text()
        node = self.stack.pop()
        slots = [(StringKey(k), FacadeValue(v)) for k, v in node["attrs"].items()]
        for i, child in enumerate(node["children"], start=1):
            slots.append((NumberKey(i), child))
        container = FacadeContainer(
            slots=tuple(slots), types=frozenset({node["name"]})
        )
        if self.stack:
            self.stack[-1]["children"].append(container)
        else:
            self.root = container


def triplify_xml(data, opts=TriplifierOptions(), source_name=DEFAULT_SOURCE):
    builder = _XmlBuilder()
    encoding = opts.charset if opts.charset.lower() != "utf-8" else None
    parser = xml.parsers.expat.ParserCreate(encoding=encoding)
    parser.StartElementHandler = builder.start
    parser.EndElementHandler = builder.end
    parser.CharacterDataHandler = builder.chars
    try:
        parser.Parse(data, True)
    except xml.parsers.expat.ExpatError as exc:
        raise SourceParseError(
            f"malformed XML: {xml.parsers.expat.errors.messages[exc.code]}",
            position=f"line {exc.lineno}, column {exc.offset + 1}",
        ) from exc
    if builder.root is None:
        raise SourceParseError("malformed XML: no document element")
    return FacadeTree(builder.root, source_name)


# ---------------------------------------------------------------------------
# Plain text


def triplify_text(data, opts=TriplifierOptions(), source_name=DEFAULT_SOURCE):
    """Split the decoded text on the tokenizer pattern into number-keyed
    value slots; empty substrings are dropped."""
    text = _decode(data, opts)
    try:
        pattern = re.compile(opts.text_tokenizer_pattern)
    except re.error as exc:
        raise ConfigError(
            f"bad tokenizer pattern {opts.text_tokenizer_pattern!r}: {exc}"
        ) from exc
    tokens = [t for t in pattern.split(text) if t]
    slots = tuple(
        (NumberKey(i), FacadeValue(tok)) for i, tok in enumerate(tokens, start=1)
    )
    return FacadeTree(FacadeContainer(slots=slots), source_name)


# ---------------------------------------------------------------------------
# Binary embedding


def triplify_binary(data, opts=TriplifierOptions(), source_name=DEFAULT_SOURCE):
    """Embed the bytes as a single base64Binary value in slot 1."""
    encoded = base64.b64encode(bytes(data)).decode("ascii")
    root = FacadeContainer(
        slots=((NumberKey(1), FacadeValue(encoded, "base64Binary")),)
    )
    return FacadeTree(root, source_name)


# ---------------------------------------------------------------------------
# Image metadata


def extract_image_metadata(data, source_name=DEFAULT_SOURCE) -> FacadeTree:
    """One string-keyed value slot per EXIF/basic tag. Images without
    EXIF still yield width, height, and media type."""
    from PIL import ExifTags, Image, UnidentifiedImageError

    try:
        image = Image.open(io.BytesIO(bytes(data)))
        image.load()
    except (UnidentifiedImageError, OSError) as exc:
        raise MetadataError(f"cannot decode image: {exc}") from exc

    tags = {
        "ImageWidth": str(image.width),
        "ImageLength": str(image.height),
        "MediaType": Image.MIME.get(image.format, OCTET_STREAM),
    }
    for tag_id, value in image.getexif().items():
        name = ExifTags.TAGS.get(tag_id)
        if name is None:
            continue
        if isinstance(value, bytes):
            value = value.decode("utf-8", "replace")
        tags[name] = str(value)
    slots = tuple((StringKey(k), FacadeValue(v)) for k, v in tags.items())
    return FacadeTree(FacadeContainer(slots=slots), source_name)


# ---------------------------------------------------------------------------
# Registry

Triplifier = Callable[..., FacadeTree]


@dataclass(frozen=True)
class TriplifierRegistry:
    by_media_type: Mapping[str, Triplifier]
    by_extension: Mapping[str, str]  # lowercase extension -> media type

    def triplifier_for(self, media_type: str) -> Triplifier:
        try:
            return self.by_media_type[media_type]
        except KeyError:
            # anything unknown is embedded as binary content
            return self.by_media_type[OCTET_STREAM]


DEFAULT_REGISTRY = TriplifierRegistry(
    by_media_type={
        "text/csv": triplify_csv,
        "application/json": triplify_json,
        "application/xml": triplify_xml,
        "text/xml": triplify_xml,
        "text/plain": triplify_text,
        "image/jpeg": triplify_binary,
        "image/png": triplify_binary,
        OCTET_STREAM: triplify_binary,
    },
    by_extension={
        "csv": "text/csv",
        "json": "application/json",
        "xml": "application/xml",
        "txt": "text/plain",
        "jpg": "image/jpeg",
        "jpeg": "image/jpeg",
        "png": "image/png",
    },
)

IMAGE_MEDIA_TYPES = frozenset({"image/jpeg", "image/png"})


def strip_media_type_params(media_type: str) -> str:
    return media_type.split(";", 1)[0].strip()


def guess_media_type(
    location: str,
    override: Optional[str] = None,
    registry: TriplifierRegistry = DEFAULT_REGISTRY,
) -> str:
    """Media type for a location: explicit override wins, then the file
    extension, then application/octet-stream."""
    if override:
        return strip_media_type_params(override)
    path = location.split("#", 1)[0].split("?", 1)[0]
    if "." in path.rsplit("/", 1)[-1]:
        ext = path.rsplit(".", 1)[-1].lower()
        media_type = registry.by_extension.get(ext)
        if media_type is not None:
            return media_type
    return OCTET_STREAM
