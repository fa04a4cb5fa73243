"""Harvest laws, the quantile supply bound and per-site energy bookkeeping.

A site is credited with the harvest level that is exceeded with probability
``1 - outage_bound``; any demand above that level must come from the grid or
from inter-RES imports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .errors import DomainError, ValidationError

if TYPE_CHECKING:
    from .radio import Assignment
    from .scenario import Scenario

# Absolute slack (W) when checking the outage constraint on LP output.
OUTAGE_TOL_W = 1e-6


@dataclass(frozen=True)
class EnergyDistribution:
    """Law of the harvested power at one site.

    Only ``kind="uniform"`` is supported. ``a == b`` is allowed and describes a
    point mass, which is how a site without renewable supply is modelled.
    """

    kind: str = "uniform"
    a: float = 0.0
    b: float = 0.0

    def __post_init__(self) -> None:
        if self.kind != "uniform":
            raise ValidationError("harvest kind is 'uniform'", f"got {self.kind!r}")
        if not (0.0 <= self.a <= self.b) or not np.isfinite(self.b):
            raise ValidationError("0 ≤ a ≤ b", f"a={self.a}, b={self.b}")

    @property
    def mean(self) -> float:
        return 0.5 * (self.a + self.b)

    def pdf(self, z):
        z = np.asarray(z, dtype=float)
        if self.b == self.a:
            return np.zeros_like(z)
        return np.where((z >= self.a) & (z <= self.b), 1.0 / (self.b - self.a), 0.0)

    def cdf(self, z):
        z = np.asarray(z, dtype=float)
        if self.b == self.a:
            return np.where(z >= self.a, 1.0, 0.0)
        return np.clip((z - self.a) / (self.b - self.a), 0.0, 1.0)

    def quantile(self, phi: float) -> float:
        if not 0.0 < phi < 1.0:
            raise DomainError(f"quantile level must lie in (0, 1), got {phi}")
        return self.a + phi * (self.b - self.a)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.uniform(self.a, self.b, size=size)


def quantile(dist: EnergyDistribution, phi: float) -> float:
    return dist.quantile(phi)


@dataclass
class EnergyPlan:
    """Grid draws, directed inter-RES flows and the line indicator matrix."""

    grid: np.ndarray
    flows: np.ndarray
    edges: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        self.grid = np.asarray(self.grid, dtype=float)
        self.flows = np.asarray(self.flows, dtype=float)
        if self.edges is None:
            self.edges = self.flows > 0
        self.edges = np.asarray(self.edges, dtype=bool)

    @classmethod
    def grid_only(cls, grid) -> EnergyPlan:
        grid = np.asarray(grid, dtype=float)
        n = grid.shape[0]
        return cls(grid=grid, flows=np.zeros((n, n)), edges=np.zeros((n, n), dtype=bool))

    def check(self, b: np.ndarray) -> None:
        """Raise ValidationError if the plan breaks its structural invariants."""
        if np.any(self.grid < 0):
            raise ValidationError("grid ≥ 0")
        if np.any(self.flows < 0):
            raise ValidationError("flows ≥ 0")
        if np.any(np.diag(self.edges)) or np.any(np.diag(self.flows) != 0):
            raise ValidationError("no self-edges")
        if np.any((self.flows > 0) & ~self.edges):
            raise ValidationError("flow > 0 ⇒ edge")
        b = np.asarray(b, dtype=bool)
        if np.any(self.edges & ~(b[:, None] & b[None, :])):
            raise ValidationError("edge(t,n) ⇒ b_t ∧ b_n")

    def copy(self) -> EnergyPlan:
        return EnergyPlan(self.grid.copy(), self.flows.copy(), self.edges.copy())


def served_counts(assign: Assignment) -> np.ndarray:
    return assign.p.sum(axis=0)


def surplus(assign: Assignment, n: int, s: Scenario) -> float:
    """Quantile supply left at site ``n`` after transmission and static power."""
    served = int(assign.p[:, n].sum())
    return float(s.supply_quantile[n] - served * s.tx_power[n] - s.static_power[n])


def surplus_vector(counts, s: Scenario) -> np.ndarray:
    counts = np.asarray(counts, dtype=float)
    return s.supply_quantile - counts * s.tx_power - s.static_power


def optimal_grid_power(assign: Assignment, n: int, s: Scenario) -> float:
    if not assign.b[n]:
        return 0.0
    return max(-surplus(assign, n, s), 0.0)


def optimal_grid_vector(assign: Assignment, s: Scenario) -> np.ndarray:
    delta = surplus_vector(served_counts(assign), s)
    return np.where(assign.b, np.maximum(-delta, 0.0), 0.0)


def outage_lhs(assign: Assignment, plan: EnergyPlan, n: int, s: Scenario) -> float:
    """Left-hand side of the chance-constrained supply inequality at site ``n``."""
    if not assign.b[n]:
        return 0.0
    served = assign.p[:, n].sum()
    exports = np.sum(plan.flows[n, :] * plan.edges[n, :])
    imports = np.sum((1.0 - s.loss_factor[:, n]) * plan.flows[:, n] * plan.edges[:, n])
    return float(
        served * s.tx_power[n]
        + s.static_power[n]
        - plan.grid[n]
        + exports
        - imports
        - s.supply_quantile[n]
    )


def outage_constraint_satisfied(
    assign: Assignment, plan: EnergyPlan, n: int, s: Scenario, tol: float = OUTAGE_TOL_W
) -> bool:
    return outage_lhs(assign, plan, n, s) <= tol


def simulate_outage(
    assign: Assignment,
    plan: EnergyPlan,
    n: int,
    s: Scenario,
    draws: int,
    seed: int | np.random.SeedSequence | None = None,
) -> float:
    """Fraction of harvest draws for which site ``n`` cannot meet its demand.

    Inter-RES flows are treated as firm contracted amounts; only the local
    harvest is random.
    """
    if draws < 1:
        raise DomainError("draws must be ≥ 1")
    if not assign.b[n]:
        return 0.0
    rng = np.random.default_rng(seed)
    served = assign.p[:, n].sum()
    exports = np.sum(plan.flows[n, :] * plan.edges[n, :])
    imports = np.sum((1.0 - s.loss_factor[:, n]) * plan.flows[:, n] * plan.edges[:, n])
    demand = served * s.tx_power[n] + s.static_power[n] + exports
    z = s.sites[n].harvest.sample(rng, draws)
    short = z + plan.grid[n] + imports < demand
    return float(np.count_nonzero(short)) / draws
