"""Work-budget configuration.

Every enumeration that can blow up combinatorially checks its projected
cost against a budget before starting. The default comes from the
``PRIMEFRAC_WORK_BUDGET`` environment variable, else ``10**7``.
"""

import os

from .errors import BudgetExceeded, InvalidInput

ENV_VAR = "PRIMEFRAC_WORK_BUDGET"
FALLBACK_BUDGET = 10**7


def default_work_budget() -> int:
    raw = os.environ.get(ENV_VAR)
    if raw is None or raw.strip() == "":
        return FALLBACK_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise InvalidInput(f"{ENV_VAR}={raw!r} is not an integer") from None
    if value < 1:
        raise InvalidInput(f"{ENV_VAR} must be positive, got {value}")
    return value


def check_budget(needed: int, budget: int | None = None, what: str = "work") -> None:
    """Raise :class:`BudgetExceeded` if ``needed`` exceeds the budget."""
    limit = default_work_budget() if budget is None else budget
    if needed > limit:
        raise BudgetExceeded(needed, limit, what)
