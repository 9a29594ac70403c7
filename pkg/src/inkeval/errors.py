"""Exception hierarchy for the toolkit.

All library errors derive from InkEvalError so callers can catch broadly;
infrastructure failures (transport) are kept distinct from data problems.
"""


class InkEvalError(Exception):
    """Base class for all toolkit errors."""


class InvalidInkError(InkEvalError):
    """Ink/stroke/point data violates a structural invariant."""


class EmptyCloudError(InkEvalError):
    """A point-cloud metric was given an empty cloud."""


class InvalidKError(InkEvalError):
    """Requested group count is below 1."""


class EmptyLabelError(InkEvalError):
    """A label that must be non-empty was empty after normalization."""


class EmptyReferenceError(InkEvalError):
    """Error rates need a non-empty reference text."""


class InvalidDistanceError(InkEvalError):
    """Neighbor search only supports edit distances 1 and 2."""


class NoCandidateError(InkEvalError):
    """Label corruption found no dictionary neighbor for any word."""


class MissingGlyphError(InkEvalError):
    """The glyph font has no entry for a requested character."""

    def __init__(self, char: str):
        self.char = char
        super().__init__(f"no glyph for character {char!r}")


class LabelMismatchError(InkEvalError):
    """An ink does not match the layout its label implies."""


class EmptyTemplatesError(InkEvalError):
    """Template recognition needs at least one template."""


class TransportError(InkEvalError):
    """Network-level failure talking to a remote recognizer."""


class ProtocolError(InkEvalError):
    """A remote recognizer answered with a malformed response."""


class ParseError(InkEvalError):
    """A corpus/ink file could not be parsed."""

    def __init__(self, reason: str, line: int | None = None, path: str | None = None):
        self.reason = reason
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"line {line}: "
        super().__init__(where + reason)


class IntegrityError(InkEvalError):
    """Duplicate ids or dangling references in a corpus."""


class MalformedInkMLError(InkEvalError):
    """An ink XML document is not well-formed or has bad trace data."""


class ChannelCountError(InkEvalError):
    """A trace point carried fewer than two channel values."""


class JoinFailureError(InkEvalError):
    """Preference records could not be joined to metric data."""

    def __init__(self, unmatched: list):
        self.unmatched = list(unmatched)
        super().__init__(
            f"{len(self.unmatched)} preference record(s) have no matching metrics: "
            + ", ".join(map(str, self.unmatched[:5]))
            + ("..." if len(self.unmatched) > 5 else "")
        )
