"""Parsing and rendering of ``x-sparql-anything:`` service IRIs.

The part after the scheme is either a bare location or a comma-separated
list of ``key=value`` options. There is no escaping grammar: commas
inside option values are unsupported (a documented v1 limitation), but a
bare location may contain anything.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from .errors import ServiceUriError
from .triplifiers import TriplifierOptions, strip_media_type_params

SCHEME = "x-sparql-anything:"

_BOOL_KEYS = {"metadata", "csv.headers"}


@dataclass(frozen=True)
class ServiceSpec:
    location: str
    media_type_override: Optional[str] = None
    charset: Optional[str] = None
    namespace: Optional[str] = None
    root_iri: Optional[str] = None
    metadata: bool = False
    triplifier_options: TriplifierOptions = TriplifierOptions()


def is_facade_iri(iri: str) -> bool:
    return iri.startswith(SCHEME)


def _parse_bool(key, value):
    if value == "true":
        return True
    if value == "false":
        return False
    raise ServiceUriError(f"option {key!r} must be 'true' or 'false', got {value!r}")


def _is_bare_location(first_segment: str) -> bool:
    # A first segment whose first delimiter is ':' or '/' rather than
    # '=' is a location, not an option.
    for ch in first_segment:
        if ch == "=":
            return False
        if ch in ":/":
            return True
    return True


def parse_service_uri(iri: str) -> ServiceSpec:
    if not iri.startswith(SCHEME):
        raise ServiceUriError(f"not an {SCHEME} IRI: {iri!r}")
    remainder = iri[len(SCHEME):]
    if not remainder:
        raise ServiceUriError("empty service IRI")

    first = remainder.split(",", 1)[0]
    if _is_bare_location(first):
        return ServiceSpec(location=remainder)

    location = None
    media_type = None
    charset = None
    namespace = None
    root_iri = None
    metadata = False
    csv_headers = False
    txt_regex = None
    extras = []
    for segment in remainder.split(","):
        if "=" not in segment:
            raise ServiceUriError(f"malformed option segment {segment!r}")
        key, value = segment.split("=", 1)
        if key in ("location", "locator"):
            location = value
        elif key == "mime-type":
            media_type = strip_media_type_params(value)
            for param in value.split(";")[1:]:
                name, _, pvalue = param.strip().partition("=")
                if name == "charset" and pvalue:
                    charset = pvalue
        elif key == "charset":
            charset = value
        elif key == "namespace":
            namespace = value
        elif key == "root":
            root_iri = value
        elif key == "metadata":
            metadata = _parse_bool(key, value)
        elif key == "csv.headers":
            csv_headers = _parse_bool(key, value)
        elif key == "txt.regex":
            txt_regex = value
        else:
            extras.append((key, value))

    if location is None:
        raise ServiceUriError(f"no location in service IRI {iri!r}")
    opts = TriplifierOptions(
        charset=charset or "utf-8",
        csv_headers=csv_headers,
        text_tokenizer_pattern=txt_regex if txt_regex is not None else " ",
        format_extras=tuple(extras),
    )
    return ServiceSpec(
        location=location,
        media_type_override=media_type,
        charset=charset,
        namespace=namespace,
        root_iri=root_iri,
        metadata=metadata,
        triplifier_options=opts,
    )


def render_service_uri(spec: ServiceSpec) -> str:
    """Canonical IRI for a spec: options alphabetical, location last.
    ``parse_service_uri`` maps it back to an equal spec."""
    opts = spec.triplifier_options
    pairs = {}
    if opts.charset != "utf-8" or spec.charset:
        pairs["charset"] = spec.charset or opts.charset
    if opts.csv_headers:
        pairs["csv.headers"] = "true"
    if spec.metadata:
        pairs["metadata"] = "true"
    if spec.media_type_override:
        pairs["mime-type"] = spec.media_type_override
    if spec.namespace:
        pairs["namespace"] = spec.namespace
    if spec.root_iri:
        pairs["root"] = spec.root_iri
    if opts.text_tokenizer_pattern != " ":
        pairs["txt.regex"] = opts.text_tokenizer_pattern
    pairs.update(opts.format_extras)
    segments = [f"{k}={v}" for k, v in sorted(pairs.items())]
    segments.append(f"location={spec.location}")
    return SCHEME + ",".join(segments)
