"""Unit tests for the error hierarchy and exit codes."""

import pytest
from pydantic import ValidationError

from exceptions import (
    ContractViolation,
    EmptyInputError,
    FormatError,
    TrainingDivergedError,
    exit_code_for,
)
from schemas.corpus_schema import CorpusConfig


def _validation_error() -> ValidationError:
    try:
        CorpusConfig(min_length=3, max_length=1)
    except ValidationError as e:
        return e
    raise AssertionError("expected a validation error")


class TestHierarchy:
    """Tests for the exception classes."""

    def test_empty_input_is_contract_violation(self):
        """Should let callers catch empty inputs as contract violations and ValueErrors."""
        assert issubclass(EmptyInputError, ContractViolation)
        assert issubclass(ContractViolation, ValueError)

    def test_format_error_offset(self):
        """Should keep the byte offset and mention it in the message."""
        error = FormatError("bad magic", 0)
        assert error.offset == 0
        assert "offset 0" in str(error)


class TestExitCodeFor:
    """Tests for exit_code_for."""

    @pytest.mark.parametrize(
        "error, code",
        [
            (ContractViolation("x"), 1),
            (EmptyInputError("x"), 1),
            (ValueError("x"), 1),
            (FormatError("x", 4), 2),
            (FileNotFoundError("x"), 2),
            (TrainingDivergedError("x"), 3),
            (FloatingPointError("x"), 3),
        ],
    )
    def test_codes(self, error, code):
        """Should map each error family to its exit code."""
        assert exit_code_for(error) == code

    def test_validation_error(self):
        """Should treat pydantic validation failures as validation errors."""
        assert exit_code_for(_validation_error()) == 1
