# Copyright 2026 (c) qsr-coherence contributors. All rights reserved. Issued under the Apache 2.0 License.

#
# Exceptions the command line has to tell apart. Plain bad input is a ValueError.
#

from typing import List, Optional


class StateFileError(ValueError):
    """
    Raised when a state file cannot be turned into a state.
    Carries every diagnostic found, not only the first one.
    """

    def __init__(self, path: str, errors: List[str]):
        self.path = path
        self.errors = list(errors)
        super().__init__(f"Invalid state file {path}: " + "; ".join(self.errors))


class SupportViolationError(ValueError):
    pass


class BudgetExceededError(RuntimeError):
    """
    Raised before a simulation whose state would not fit the configured budget.
    """

    def __init__(self, what: str, required: int, budget: int, hint: Optional[str] = None):
        self.required = required
        self.budget = budget
        message = f"{what}: size {required} exceeds the budget {budget}"
        if hint:
            message += f" ({hint})"
        super().__init__(message)


class BoundViolationError(AssertionError):
    """
    A bound the library asserts did not hold. This is a finding about the inputs or the
    numerics, never a usage error.
    """
