"""Exception types raised by the toolkit."""

from __future__ import annotations


class PdvoxError(Exception):
    """Base class for all toolkit errors."""


class SchemaError(PdvoxError):
    """Input data violates the expected tabular layout."""


class ValidationError(PdvoxError):
    """Numeric content fails a well-formedness check (NaN, bad label, ...)."""


class ConfigError(PdvoxError):
    """A run configuration combines options that cannot be honoured."""
