"""
Error hierarchy for the AMD decoding toolkit.

Every error raised on purpose by the packages derives from AmdError, so the CLI
can translate it into a stable exit code (see exit_code_for).
"""

from pydantic import ValidationError


class AmdError(Exception):
    """Base class for all toolkit errors."""


class ContractViolation(AmdError, ValueError):
    """An operation was called outside its documented preconditions."""


class EmptyInputError(ContractViolation):
    """An operation received an empty sequence or matrix it cannot work on."""


class FormatError(AmdError):
    """
    A binary file (corpus or checkpoint) could not be parsed.

    Attributes:
        offset: Byte offset where parsing failed.
    """

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset


class TrainingDivergedError(AmdError, ArithmeticError):
    """The training loss became NaN or infinite."""


EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_NUMERIC = 3


def exit_code_for(error: BaseException) -> int:
    """
    Map an exception to the CLI exit-code contract.

    Args:
        error: The exception that stopped the command.

    Returns:
        1 for validation errors, 2 for I/O and format errors, 3 for numeric failures.
    """
    if isinstance(error, (TrainingDivergedError, FloatingPointError)):
        return EXIT_NUMERIC
    if isinstance(error, (FormatError, OSError)):
        return EXIT_IO
    if isinstance(error, (ValidationError, ValueError)):
        return EXIT_VALIDATION
    return EXIT_VALIDATION
