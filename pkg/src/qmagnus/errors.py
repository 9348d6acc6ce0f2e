"""Exception hierarchy shared by every module."""

from __future__ import annotations


class MagnusError(Exception):
    """Base class for all errors raised by qmagnus."""


class PrecisionExhausted(MagnusError, ArithmeticError):
    """A p-adic quantity is not known finely enough for the requested result.

    ``required`` is the minimal input precision that would have sufficed,
    when it can be determined.
    """

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


class NotInvertible(MagnusError, ZeroDivisionError):
    """Division by zero, or by a non-unit of the coefficient domain."""


class DomainMismatch(MagnusError, TypeError):
    """Operands live in incompatible coefficient domains or rings."""


class ParseError(MagnusError, ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


class UnknownGenerator(ParseError):
    pass


class CapExceeded(MagnusError, RuntimeError):
    """Enumeration of a finite group grew past the configured cap."""

    def __init__(self, message: str, partial_size: int):
        super().__init__(message)
        self.partial_size = partial_size


class RelatorViolation(MagnusError):
    def __init__(self, relator, level: int | None = None):
        where = f" at level {level}" if level is not None else ""
        super().__init__(f"relator {relator} does not vanish{where}")
        self.relator = relator
        self.level = level


class ExtensionError(MagnusError, ValueError):
    """An extension specification violates its hypotheses."""
