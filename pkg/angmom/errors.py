"""
Exception hierarchy shared by the engine and the command cogs.
"""

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_RESOURCE_BUDGET = 3


class AngmomError(Exception):
    """Base class for every error raised by the engine."""

    exit_code = EXIT_BAD_INPUT


class QuantumNumberError(AngmomError, ValueError):
    """
    A quantum number (or factorial argument) violates a domain invariant.
    `invariant` names the rule that failed, e.g. "triangle" or "j-m parity".
    """

    def __init__(self, invariant: str, detail: str = ""):
        self.invariant = invariant
        message = f"{invariant} violated"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class IndeterminateTermError(AngmomError):
    """A lower Pochhammer of a terminating 3F2 vanishes before the series stops."""

    def __init__(self, k: int, detail: str = ""):
        self.k = k
        super().__init__(f"indeterminate 3F2 term at k={k}" + (f" ({detail})" if detail else ""))


class ConsistencyError(AngmomError):
    """An internal invariant of a pipeline failed; indicates a bug, not bad input."""

    exit_code = EXIT_VERIFICATION_FAILED


class ResourceBudgetError(AngmomError):
    exit_code = EXIT_RESOURCE_BUDGET

    def __init__(self, required_degree: int, budget: int):
        self.required_degree = required_degree
        self.budget = budget
        super().__init__(
            f"generating-function degree {required_degree} exceeds the configured budget {budget}"
        )


class ConfigurationError(AngmomError):
    """Raised by validate_env_variables for malformed ANGMOM_* settings."""
