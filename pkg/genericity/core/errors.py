# genericity/core/errors.py
from __future__ import annotations

from typing import Any


class GenericityError(Exception):
    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InvalidInputError(GenericityError):
    """Malformed or out-of-contract input (exit code 2)."""
    exit_code = 2


class LibraryFormatError(InvalidInputError):
    """A generator library file that does not parse or fails its relation checks."""


class BudgetExhaustedError(GenericityError):
    """A search cap was hit; `partial` carries whatever was computed before the cut."""
    exit_code = 3

    def __init__(self, detail: str, partial: Any = None):
        super().__init__(detail)
        self.partial = partial


class CacheIOError(GenericityError):
    exit_code = 3
