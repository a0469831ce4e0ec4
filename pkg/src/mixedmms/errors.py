"""Exception hierarchy shared by every module."""

from __future__ import annotations

from fractions import Fraction


class MixedMMSError(Exception):
    """Base class for all errors raised by the package."""


class DomainError(MixedMMSError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class ValidationError(MixedMMSError, ValueError):
    """Raw instance or allocation data violates one or more invariants.

    ``issues`` holds one ``(location, message)`` pair per violation.
    """

    def __init__(self, issues: list[tuple[str, str]]):
        self.issues = list(issues)
        lines = [f"{loc}: {msg}" for loc, msg in self.issues]
        super().__init__("; ".join(lines) if lines else "invalid input")


class InsufficientValueError(DomainError):
    """A cut query asked for more value than remains to the right of ``x``."""

    def __init__(self, agent: int, x: Fraction, beta: Fraction, shortfall: Fraction):
        self.agent = agent
        self.x = x
        self.beta = beta
        self.shortfall = shortfall
        super().__init__(
            f"agent {agent}: only {beta - shortfall} available right of {x}, "
            f"asked for {beta} (shortfall {shortfall})"
        )


class TooLargeError(MixedMMSError):
    """An exhaustive routine would exceed its configured size guard."""


class UnsupportedError(MixedMMSError):
    """The input belongs to a class the routine explicitly does not handle."""


class ContractViolation(MixedMMSError):
    """A documented precondition of an algorithm did not hold at runtime."""


class PluginError(ContractViolation):
    """A plug-in allocator returned output that fails its declared guarantee."""
