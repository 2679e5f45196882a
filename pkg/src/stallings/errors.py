"""Exception types and the shared enumeration budget."""

import os


class InvalidInput(ValueError):
    """Malformed words, graphs, complexes or violated preconditions."""


class BudgetExceeded(RuntimeError):
    """An enumeration would trace more words than the budget allows."""


class ParityError(ArithmeticError):
    """A doubled-integer expression was expected to be even and was not."""


DEFAULT_BUDGET = 10**6


def default_budget():
    value = os.environ.get("STALLINGS_BUDGET")
    if value is None:
        return DEFAULT_BUDGET
    try:
        budget = int(value)
    except ValueError:
        raise InvalidInput(f"STALLINGS_BUDGET must be an integer, got {value!r}")
    if budget <= 0:
        raise InvalidInput("STALLINGS_BUDGET must be positive")
    return budget
