"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """A precondition on an argument was violated."""


class WindowTooSmall(InvalidInput):
    """The prime window has fewer primes than the search needs."""


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the configured work budget."""

    def __init__(self, needed: int, budget: int, what: str = "work"):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what} needs {needed} evaluations, budget is {budget}")
