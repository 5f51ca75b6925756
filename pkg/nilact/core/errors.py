"""Exception hierarchy.

Every failure carries a ``detail`` message and the CLI exit ``status`` it
maps to, mirroring how API handlers raise ``HTTPException(status_code, detail)``.
"""
from typing import Optional

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class NilactError(Exception):
    status: int = EXIT_USAGE

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ClosureExceedsCap(NilactError):
    pass


class TooLarge(NilactError):
    pass


class InvalidPermutation(NilactError):
    pass


class MismatchedParents(NilactError):
    pass


class NotNormal(NilactError):
    pass


class ShapeMismatch(NilactError):
    pass


class NotAutomorphism(NilactError):
    pass


class InvalidAction(NilactError):
    pass


class NotNilpotent(NilactError):
    pass


class NotApplicable(NilactError):
    """A check's hypothesis is unmet; distinct from the claim being false."""


class InternalInvariantViolation(NilactError):
    """A computed object contradicts a structural fact the code relies on."""

    status = EXIT_FAIL


class ParseError(NilactError):
    def __init__(self, detail: str, line: int, column: Optional[int] = None):
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {detail}")
        self.line = line
        self.column = column


class CatalogValidationError(NilactError):
    def __init__(self, name: str, invariant: str):
        super().__init__(f"entry {name!r}: {invariant}")
        self.name = name
        self.invariant = invariant


class InvalidPrime(NilactError):
    pass
