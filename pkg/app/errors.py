"""Exception types shared by the algebra modules, the CLI and the routes."""

from __future__ import annotations


class LambdaError(Exception):
    """Base class for every error raised by lambda-fdg."""


class DomainError(LambdaError, ValueError):
    """An input violates an operation's precondition."""


class NonPeriodicError(DomainError):
    """The map is not a bijection, so cycle statistics are undefined."""


class CapacityError(LambdaError, ValueError):
    """A documented enumeration or factorization limit was exceeded."""

    def __init__(self, what: str, count: int, limit: int):
        self.what = what
        self.count = count
        self.limit = limit
        super().__init__(f"{what}: {count} exceeds capacity {limit}")


class ClassificationError(LambdaError, RuntimeError):
    """The classifier's self-check found a descriptor with the wrong λ-value."""


def status_code_for(exc: LambdaError) -> int:
    """HTTP status for an error raised while serving a request."""
    if isinstance(exc, CapacityError):
        return 413
    if isinstance(exc, DomainError):
        return 422
    return 500
