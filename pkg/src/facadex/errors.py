"""Exception hierarchy shared by all facadex modules."""


class FacadeError(Exception):
    """Base class for every error raised by facadex."""


class TreeValidationError(FacadeError):
    """A facade tree violated one of the meta-model axioms.

    Carries the full validation report so callers can show every
    violation, not just the first one.
    """

    def __init__(self, report):
        self.report = report
        super().__init__(
            "facade tree failed validation: "
            + "; ".join(str(v) for v in report.violations)
        )


class SourceParseError(FacadeError):
    """The raw bytes of a resource could not be parsed in their format.

    `position` is a human-readable location hint (line number, byte
    offset, ...) when the underlying parser provides one.
    """

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)


class ConfigError(FacadeError):
    """An option value is unusable (bad regex, bad charset, bad flag)."""


class ServiceUriError(FacadeError):
    """An ``x-sparql-anything:`` IRI could not be parsed into a spec."""


class FetchError(FacadeError):
    """A resource could not be retrieved."""

    def __init__(self, location, cause):
        self.location = location
        self.cause = cause
        super().__init__(f"cannot fetch {location!r}: {cause}")


class MetadataError(FacadeError):
    """Image metadata extraction failed (undecodable image)."""


class QueryError(FacadeError):
    """Query parsing or facade SERVICE resolution failed."""


class ResourceLimitError(FacadeError):
    """A configured budget (fetch count, byte budget) was exceeded."""
