"""Exception hierarchy shared by the planner modules."""


class PlanningError(Exception):
    """Base class for all errors raised by resplan."""


class ConfigurationError(PlanningError, ValueError):
    """Generation parameters are inconsistent (e.g. non-square site count)."""


class CapacityError(PlanningError, ValueError):
    """Total radio capacity B*N cannot host all test points."""


class ScenarioParseError(PlanningError, ValueError):
    """Scenario text does not follow the file schema."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.line = line
        self.field = field


class ValidationError(PlanningError, ValueError):
    """A domain invariant is violated; the message names the invariant."""

    def __init__(self, invariant: str, detail: str = ""):
        super().__init__(f"invariant violated: {invariant}" + (f" ({detail})" if detail else ""))
        self.invariant = invariant


class DomainError(PlanningError, ValueError):
    """An argument lies outside the domain of a mathematical function."""


class LpConstructionError(PlanningError, ValueError):
    """Linear program is malformed (dimension mismatch, non-finite data)."""


class SizeError(PlanningError, ValueError):
    """Instance exceeds the exact oracle's enumeration caps."""


class InfeasibleError(PlanningError):
    """No feasible solution exists."""


class StatisticsError(PlanningError, ValueError):
    """Too few samples for the requested statistic."""
