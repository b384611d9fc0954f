"""Exceptions shared across the library."""


class CertrealError(Exception):
    """Base class for library errors."""


class DomainError(CertrealError):
    """An argument lies outside the domain an operation is defined on."""


class PrecisionError(CertrealError):
    """A certification could not be completed within the precision cap."""


class ResourceCapError(CertrealError):
    """A computation exceeds the configured desk-scale resource limits."""
