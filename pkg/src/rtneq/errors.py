"""Shared exception types, mapped to CLI exit codes by the front end."""


class InvalidArgumentError(ValueError):
    """Bad user input: malformed geometry, out-of-domain parameter, bad flag."""


class UnsupportedError(InvalidArgumentError):
    """Valid input outside the supported regime (e.g. q=3 tilings)."""


class ResourceLimitError(RuntimeError):
    """Exact evaluation would exceed the configured enumeration budget."""
