"""Exception types shared across modules."""


class FieldMismatch(ValueError):
    """Arithmetic or assembly attempted across two different fields."""


class BudgetExceeded(RuntimeError):
    """An exhaustive computation would exceed its configured enumeration cap."""

    def __init__(self, what: str, needed, budget):
        super().__init__(f"{what}: needs {needed}, budget is {budget}")
        self.what = what
        self.needed = needed
        self.budget = budget


class HierarchyError(ValueError):
    """A local code does not restrict into the local code above it."""

    def __init__(self, lower, upper, message=None):
        super().__init__(message or f"local code at {lower!r} does not restrict into {upper!r}")
        self.pair = (lower, upper)
