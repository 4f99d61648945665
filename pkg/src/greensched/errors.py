"""Shared error taxonomy. The HTTP layer maps each class to a status code."""


class GreenschedError(Exception):
    pass


class ConfigError(GreenschedError):
    """Invalid scheduler or service configuration."""


class DomainError(GreenschedError):
    """An argument is outside its documented domain."""


class ConsistencyError(GreenschedError):
    """Input data contradicts itself (e.g. renewable > total generation)."""

    def __init__(self, message, hour=None, line=None):
        super().__init__(message)
        self.hour = hour
        self.line = line


class ParseError(GreenschedError):
    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class ValidationError(GreenschedError):
    """Malformed request or transaction payload."""


class NotFoundError(GreenschedError):
    pass


class ConflictError(GreenschedError):
    """Duplicate or stale write rejected."""


class AuthorizationError(GreenschedError):
    """Unknown member."""


class AuthenticationError(GreenschedError):
    """Authentication tag does not verify."""


class IntegrityError(GreenschedError):
    """Stored records disagree with each other (possible tampering)."""
