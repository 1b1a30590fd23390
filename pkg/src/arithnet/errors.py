"""Exception types shared across the package."""

from __future__ import annotations


class ArithNetError(Exception):
    """Base class for every error raised by :mod:`arithnet`."""


class NetworkError(ArithNetError):
    """A network failed validation.

    ``diagnostics`` holds the full list of :class:`~arithnet.network.Diagnostic`
    records, not just the first one.
    """

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        msg = "; ".join(str(d) for d in self.diagnostics) or "invalid network"
        super().__init__(msg)


class ParseError(ArithNetError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ArityMismatch(ArithNetError):
    pass


class FormulaError(ArithNetError):
    pass


class NegationPresent(ArithNetError):
    pass


class BadThresholds(ArithNetError):
    pass


class BadBase(ArithNetError):
    pass


class PieceBudgetExceeded(ArithNetError):
    def __init__(self, gate_id: int, pieces: int, budget: int):
        self.gate_id = gate_id
        self.pieces = pieces
        self.budget = budget
        super().__init__(f"gate {gate_id}: {pieces} pieces exceeds budget {budget}")


class UnpairedSelection(ArithNetError):
    pass


class BadProjectionArity(ArithNetError):
    pass


class UnknownKind(ArithNetError):
    pass


class EmptySample(ArithNetError):
    pass
