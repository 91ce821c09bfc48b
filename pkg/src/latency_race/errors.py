"""Exception hierarchy shared by the solver modules and the CLI."""


class LatencyRaceError(Exception):
    """Base class for all model errors."""


class DomainError(LatencyRaceError, ValueError):
    """An argument lies outside the domain of an operation."""


class RangeError(LatencyRaceError, ValueError):
    """A target value or precondition lies outside the attainable range."""


class BudgetError(LatencyRaceError, RuntimeError):
    """An iteration or size budget was exhausted."""
