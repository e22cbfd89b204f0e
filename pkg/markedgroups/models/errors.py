"""
Exception hierarchy shared by all engines
"""
from typing import Optional


class MarkedGroupsError(Exception):
    """Base class for every error raised by markedgroups"""


class AlphabetMismatchError(MarkedGroupsError, ValueError):
    """Operands live over different alphabets"""


class PreconditionError(MarkedGroupsError, ValueError):
    """An operation was called outside its precondition"""


class FamilyInvariantError(PreconditionError):
    """A relator family has an empty, non-cyclically-reduced or proper-power relator"""


class HenselError(PreconditionError):
    """The Hensel criterion fails for the requested root"""


class ParseError(MarkedGroupsError, ValueError):
    """Syntax error in a presentation, open-set file or literal"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)


class BudgetExceededError(MarkedGroupsError, RuntimeError):
    """A bounded search ran out of budget before reaching a verdict"""
