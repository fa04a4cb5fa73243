"""Exhaustive solver for the full planning problem on tiny instances.

Used as ground truth for the heuristic. Every deployment vector and every
capacity-respecting assignment is enumerated; QoS is checked with the same
linearized inequality the rest of the package uses. For each feasible pair,
the energy side (grid draws, line set, flows) is solved exactly by walking
line subsets in order of increasing connection cost and solving the
balancing LP for each, stopping once no cheaper subset can exist.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .cost import CostBreakdown, objective_cost
from .energy import EnergyPlan, surplus_vector
from .errors import InfeasibleError, SizeError
from .phase2 import all_edges, solve_balancing
from .radio import Assignment, qos_matrix
from .scenario import Scenario


@dataclass(frozen=True)
class OracleLimits:
    max_sites: int = 4
    max_tps: int = 6
    max_capacity: int = 3


@dataclass
class ExactResult:
    best_cost: float
    best_assign: Assignment
    best_plan: EnergyPlan
    enumerated: int
    breakdown: CostBreakdown = field(default_factory=CostBreakdown)


@dataclass
class _EnergyOptimum:
    cost: float
    plan: EnergyPlan
    evaluated: int


def _subsets_by_cost(edges: list, s: Scenario) -> list[tuple[float, tuple]]:
    subsets = []
    for k in range(1, len(edges) + 1):
        for combo in combinations(edges, k):
            subsets.append((float(sum(s.conn_cost[t, n] for t, n in combo)), combo))
    subsets.sort(key=lambda item: item[0])
    return subsets


def best_energy_plan(counts, deployed: list[int], s: Scenario) -> _EnergyOptimum:
    """Cheapest line set plus grid/flow schedule for fixed loads.

    Cost counted here is connection plus lifetime energy (installation is
    excluded). More lines can only lower the LP optimum, so the LP with
    every line available bounds all subsets from below.
    """
    n = s.n_sites
    delta = surplus_vector(counts, s)
    grid = np.zeros(n)
    grid[deployed] = np.maximum(-delta[deployed], 0.0)
    best_plan = EnergyPlan.grid_only(grid)
    best = s.lambda_t * float(grid.sum())
    evaluated = 1
    edges = all_edges(deployed)
    if not edges or best == 0.0:
        return _EnergyOptimum(best, best_plan, evaluated)

    floor = solve_balancing(counts, deployed, edges, s).energy_cost
    evaluated += 1
    for conn, combo in _subsets_by_cost(edges, s):
        if conn + floor >= best:
            break
        sol = solve_balancing(counts, deployed, combo, s)
        evaluated += 1
        total = conn + sol.energy_cost
        if total < best:
            flows = np.zeros((n, n))
            mask = np.zeros((n, n), dtype=bool)
            for (t, u), f in sol.flows.items():
                flows[t, u] = f
                mask[t, u] = True
            best, best_plan = total, EnergyPlan(sol.grid.copy(), flows, mask)
    return _EnergyOptimum(best, best_plan, evaluated)


def solve_exact(s: Scenario, limits: OracleLimits = OracleLimits()) -> ExactResult:
    n_sites, n_tps, cap = s.n_sites, s.n_tps, s.capacity
    if n_sites > limits.max_sites or n_tps > limits.max_tps or cap > limits.max_capacity:
        raise SizeError(
            f"instance N={n_sites}, M={n_tps}, B={cap} exceeds oracle caps "
            f"N≤{limits.max_sites}, M≤{limits.max_tps}, B≤{limits.max_capacity}"
        )

    best_cost = float("inf")
    best: tuple[Assignment, EnergyPlan] | None = None
    enumerated = 0
    cache: dict[tuple, _EnergyOptimum] = {}

    for bits in product((False, True), repeat=n_sites):
        b = np.array(bits, dtype=bool)
        deployed = [int(i) for i in np.flatnonzero(b)]
        if n_tps and not deployed:
            continue
        install = float(s.install_cost[b].sum())
        for serving in product(deployed, repeat=n_tps):
            counts = np.bincount(np.asarray(serving, dtype=int), minlength=n_sites)
            if np.any(counts > cap):
                continue
            enumerated += 1
            assign = Assignment.from_serving(serving, n_sites, b=b)
            if not qos_matrix(assign, s).all():
                continue
            key = (bits, tuple(counts.tolist()))
            energy = cache.get(key)
            if energy is None:
                energy = best_energy_plan(counts, deployed, s)
                enumerated += energy.evaluated - 1
                cache[key] = energy
            total = install + energy.cost
            if total < best_cost:
                best_cost = total
                best = (assign, energy.plan.copy())

    if best is None:
        raise InfeasibleError("no deployment and assignment satisfies the constraints")
    assign, plan = best
    breakdown = objective_cost(assign, plan, s)
    return ExactResult(breakdown.total, assign, plan, enumerated, breakdown)
