"""Energy-balancing inter-RES line selection.

Begin with every directed line between deployed sites available, solve the
balancing LP, then prune the lines that carried nothing together with the one
carrying the least positive flow. Stop once the cost goes up or no lines are
left, keep the cheapest configuration seen, and fall back to the phase-1
(line-free) plan if that is cheaper still.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable

import numpy as np

from .cost import cost_c1, cost_c2
from .energy import EnergyPlan, surplus_vector
from .lp import LpProblem, solve_lp
from .phase1 import Phase1Result
from .radio import Assignment
from .scenario import Scenario

logger = logging.getLogger(__name__)

ZERO_FLOW_W = 1e-6

Edge = tuple[int, int]


@dataclass
class Phase2Result:
    plan: EnergyPlan
    cost: float
    iterations: int
    fell_back: bool
    initial_edges: int = 0


@dataclass
class BalancingSolution:
    """Optimal grid draws and flows for a fixed set of available lines."""

    grid: np.ndarray
    flows: dict[Edge, float]
    energy_cost: float

    def used_edges(self, threshold: float = ZERO_FLOW_W) -> list[Edge]:
        return [e for e, f in self.flows.items() if f > threshold]

    def plan(self, n_sites: int, threshold: float = ZERO_FLOW_W) -> EnergyPlan:
        """Dense plan keeping only lines whose flow clears the threshold."""
        flows = np.zeros((n_sites, n_sites))
        edges = np.zeros((n_sites, n_sites), dtype=bool)
        for (t, n), f in self.flows.items():
            if f > threshold:
                flows[t, n] = f
                edges[t, n] = True
        return EnergyPlan(self.grid.copy(), flows, edges)


def all_edges(sites: Iterable[int]) -> list[Edge]:
    return sorted(permutations(sorted(sites), 2))


def build_balancing_lp(counts, deployed: Iterable[int], edges: Iterable[Edge], s: Scenario) -> LpProblem:
    """Grid draws and line flows that meet every deployed site's firm demand.

    Variables are the grid draw of each deployed site (sorted) followed by one
    flow per edge (in the given order). The objective carries only the
    energy terms; installation and line costs are constants added by callers.
    """
    sites = sorted(deployed)
    edges = list(edges)
    pos = {n: i for i, n in enumerate(sites)}
    k = len(sites)
    lt = s.lambda_t
    delta = surplus_vector(counts, s)
    objective = np.concatenate([np.full(k, lt), [lt * s.loss_factor[t, n] for t, n in edges]])
    names = [f"grid[{n}]" for n in sites] + [f"flow[{t}->{n}]" for t, n in edges]
    problem = LpProblem(objective, var_names=names)
    for n in sites:
        row = np.zeros(k + len(edges))
        row[pos[n]] = -1.0
        for j, (t, u) in enumerate(edges):
            if t == n:
                row[k + j] += 1.0
            if u == n:
                row[k + j] -= 1.0 - s.loss_factor[t, u]
        problem.add_constraint(row, "<=", delta[n])
    return problem


def solve_balancing(counts, deployed: Iterable[int], edges: Iterable[Edge], s: Scenario) -> BalancingSolution:
    sites = sorted(deployed)
    edges = list(edges)
    sol = solve_lp(build_balancing_lp(counts, sites, edges, s))
    if not sol.optimal:
        # Zero flows plus closed-form grid draws are always feasible.
        raise RuntimeError(f"balancing LP reported {sol.status}")
    grid = np.zeros(s.n_sites)
    grid[sites] = sol.x[: len(sites)]
    flows = {e: float(f) for e, f in zip(edges, sol.x[len(sites):])}
    return BalancingSolution(grid, flows, sol.objective_value)


def run_phase2(p1: Phase1Result, s: Scenario, seed: int | None = None) -> Phase2Result:
    """Prune inter-RES lines greedily on top of a phase-1 deployment.

    ``seed`` is accepted for symmetry with :func:`run_phase1`; the procedure is
    deterministic.
    """
    if not p1.found:
        raise ValueError("phase 2 needs a successful phase-1 result")
    assign: Assignment = p1.assign
    deployed = [int(n) for n in np.flatnonzero(assign.b)]
    counts = assign.counts
    c1 = cost_c1(assign.b, p1.grid, s)
    fallback = Phase2Result(EnergyPlan.grid_only(p1.grid), c1, 0, True)

    edges = all_edges(deployed)
    fallback.initial_edges = len(edges)
    if not edges:
        return fallback

    best_cost = float("inf")
    best_plan: EnergyPlan | None = None
    iterations = 0
    while True:
        iterations += 1
        sol = solve_balancing(counts, deployed, edges, s)
        plan = sol.plan(s.n_sites)
        cost = cost_c2(plan.edges, plan.grid, plan.flows, s, deployed)
        if cost < best_cost:
            best_cost, best_plan = cost, plan
        zero = [e for e in edges if sol.flows[e] <= ZERO_FLOW_W]
        positive = [e for e in edges if sol.flows[e] > ZERO_FLOW_W]
        drop = set(zero)
        if positive:
            drop.add(min(positive, key=lambda e: (sol.flows[e], e)))
        edges = [e for e in edges if e not in drop]
        logger.debug("iteration %d: cost %.2f, %d lines left", iterations, cost, len(edges))
        if cost > best_cost or not edges:
            break

    if c1 < best_cost:
        fallback.iterations = iterations
        return fallback
    assert best_plan is not None
    return Phase2Result(best_plan, best_cost, iterations, False, len(all_edges(deployed)))
