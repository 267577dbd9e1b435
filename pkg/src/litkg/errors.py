"""Exception hierarchy shared across the package.

Everything user-facing derives from LitkgError so the CLI can map it to
exit code 1; anything else that escapes is an internal error (exit 2).
"""


class LitkgError(Exception):
    """Base class for all errors raised by this package."""


class InvalidEvidenceError(LitkgError):
    """Evidence count is not a positive integer."""


class MissingNodeError(LitkgError):
    """An operation referenced a node id that is not in the graph."""


class InvalidEdgeError(LitkgError):
    """Self-loop, unknown relation kind, or confidence out of range."""


class GraphParseError(LitkgError):
    """Byte stream is not well-formed; carries line/column when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class SchemaValidationError(LitkgError):
    """Well-formed stream violating the graph schema; lists all offenders."""

    def __init__(self, offenders):
        self.offenders = list(offenders)
        preview = "; ".join(self.offenders[:10])
        more = "" if len(self.offenders) <= 10 else f" (+{len(self.offenders) - 10} more)"
        super().__init__(f"{len(self.offenders)} schema violation(s): {preview}{more}")


class InvalidQueryError(LitkgError):
    """Query term unusable (empty)."""


class IngestError(LitkgError):
    """Transport or protocol failure while talking to a service."""

    def __init__(self, message, retryable=False, attempts=0):
        self.retryable = retryable
        self.attempts = attempts
        super().__init__(message)


class EmptyResultError(LitkgError):
    """A derivation produced an empty graph where one was required."""


class ConvergenceError(LitkgError):
    """An iterative solver did not reach tolerance; carries the residual."""

    def __init__(self, message, residual):
        self.residual = residual
        super().__init__(f"{message} (last residual {residual:.3e})")


class CategoryError(LitkgError):
    """A node's category does not match what the operation requires."""


class RenderCapError(LitkgError):
    """Graph exceeds the HTML render cap and no module was selected."""


class ConfigError(LitkgError):
    """Run configuration is unusable (missing file, bad value, absent path)."""
