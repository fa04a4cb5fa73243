"""CAPEX/OPEX accounting in EUR."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable

import numpy as np

from .errors import DomainError

if TYPE_CHECKING:
    from .energy import EnergyPlan
    from .radio import Assignment
    from .scenario import Scenario

HOURS_PER_YEAR = 8760.0


def lambda_t_eur_per_watt(price: float, years: float) -> float:
    """Lifetime cost of drawing one watt continuously: price * hours / 1000."""
    if not price > 0:
        raise DomainError(f"energy price must be positive, got {price}")
    if not years > 0:
        raise DomainError(f"life cycle must be positive, got {years}")
    return price * years * HOURS_PER_YEAR / 1000.0


@dataclass(frozen=True)
class CostBreakdown:
    install: float = 0.0
    connection: float = 0.0
    grid_energy: float = 0.0
    loss_energy: float = 0.0

    @property
    def total(self) -> float:
        return self.install + self.connection + self.grid_energy + self.loss_energy

    @property
    def capex(self) -> float:
        return self.install + self.connection

    @property
    def opex(self) -> float:
        return self.grid_energy + self.loss_energy

    def as_dict(self) -> dict[str, float]:
        return {
            "install_eur": self.install,
            "connection_eur": self.connection,
            "grid_energy_eur": self.grid_energy,
            "loss_energy_eur": self.loss_energy,
            "total_eur": self.total,
        }


def objective_cost(assign: Assignment, plan: EnergyPlan, s: Scenario) -> CostBreakdown:
    b = assign.b.astype(float)
    edges = plan.edges.astype(float)
    lt = s.lambda_t
    return CostBreakdown(
        install=float(np.sum(s.install_cost * b)),
        connection=float(np.sum(s.conn_cost * edges)),
        grid_energy=float(lt * np.sum(plan.grid * b)),
        loss_energy=float(lt * np.sum(s.loss_factor * plan.flows * edges)),
    )


def cost_c1(b, grid, s: Scenario) -> float:
    """Phase-1 cost: installation plus lifetime grid energy, no lines."""
    b = np.asarray(b, dtype=float)
    grid = np.asarray(grid, dtype=float)
    return float(np.sum(s.install_cost * b) + s.lambda_t * np.sum(grid * b))


def cost_c2(edges, grid, flows, s: Scenario, deployed: Iterable[int]) -> float:
    """Phase-2 cost over the deployed set only."""
    idx = np.asarray(sorted(deployed), dtype=int)
    lt = s.lambda_t
    if idx.size == 0:
        return 0.0
    sub = np.ix_(idx, idx)
    e = np.asarray(edges, dtype=float)[sub]
    f = np.asarray(flows, dtype=float)[sub]
    g = np.asarray(grid, dtype=float)[idx]
    line_terms = np.sum((s.loss_factor[sub] * f + s.conn_cost[sub] / lt) * e)
    site_terms = np.sum(g + s.install_cost[idx] / lt)
    return float(lt * (line_terms + site_terms))
