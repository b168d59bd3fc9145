"""Exception hierarchy shared by all subpackages."""


class ReuleauxError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(ReuleauxError, ValueError):
    """An operation was called on input that violates its precondition."""


class InternalConsistencyError(ReuleauxError, RuntimeError):
    """A result failed a check that the underlying theory guarantees.

    Seeing this means either a numerical tolerance is too loose/tight for the
    input or there is a bug; it is never silently swallowed.
    """


class ResourceLimitError(ReuleauxError, RuntimeError):
    """Input exceeds the desk-scale size caps."""


class RejectionError(ReuleauxError, ValueError):
    """A local graph operation produced a non-polyhedral result."""


class SchemaError(ReuleauxError, ValueError):
    """Malformed JSON input."""
