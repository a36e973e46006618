"""Shared exception types."""


class ResourceLimitError(RuntimeError):
    """Raised when an operation would exceed a declared memory/size cap."""
