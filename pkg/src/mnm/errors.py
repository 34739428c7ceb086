"""Exception types shared across the package."""

from __future__ import annotations


class MnmError(Exception):
    """Base class for errors raised by this package."""


class FormulaSyntaxError(MnmError, SyntaxError):
    """A formula could not be parsed.

    ``position`` is a byte offset into the UTF-8 encoding of the input and
    ``expected`` the set of tokens that would have been accepted there.
    """

    def __init__(self, message: str, text: str, position: int, expected: frozenset[str]):
        self.text_input = text
        self.position = position
        self.expected = expected
        exp = ", ".join(sorted(expected)) if expected else "nothing"
        super().__init__(f"{message} at byte {position} (expected one of: {exp})")


class MissingBinding(MnmError, KeyError):
    pass


class UnknownConnective(MnmError, KeyError):
    pass


class ValueOutsideDomain(MnmError, ValueError):
    pass


class TableFormatError(MnmError, ValueError):
    """Malformed Nmatrix file."""


class EmptyCell(TableFormatError):
    pass


class MissingCell(TableFormatError):
    pass


class UnknownSystem(MnmError, KeyError):
    pass


class TooLarge(MnmError):
    pass


class BudgetExceeded(MnmError):
    pass


class BadN(MnmError, ValueError):
    pass


class StepError(MnmError):
    """A derivation step failed to check.  ``index`` is 1-based."""

    def __init__(self, index: int, reason: str, detail: str = ""):
        self.index = index
        self.reason = reason
        self.detail = detail
        msg = f"step {index}: {reason}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class InvalidInput(MnmError, ValueError):
    pass


class DerivationFormatError(MnmError, ValueError):
    pass
