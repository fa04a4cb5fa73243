"""QoS-aware base-station deployment.

Start from a nearest-site assignment over all candidates, then repeatedly try
to switch off one least-loaded base station by moving its test points to the
nearest other base stations that keep a positive energy surplus. The first
attempt that fails (a TP cannot be moved, or some TP loses its SINR target)
ends the search and the last accepted configuration is returned.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .cost import cost_c1
from .energy import optimal_grid_vector
from .errors import CapacityError
from .radio import Assignment, infeasible_set
from .scenario import Scenario

logger = logging.getLogger(__name__)


@dataclass
class Phase1Result:
    found: bool
    assign: Assignment
    grid: np.ndarray
    cost: float
    outer_iterations: int
    # C1 after the initial assignment and after every accepted removal.
    cost_trace: list[float] = field(default_factory=list)

    @property
    def deployed(self) -> list[int]:
        return [int(n) for n in np.flatnonzero(self.assign.b)]


def _site_order(s: Scenario) -> np.ndarray:
    """Per TP, site indices sorted by distance then id."""
    return np.lexsort((np.broadcast_to(np.arange(s.n_sites), s.distances.shape), s.distances), axis=1)


def initial_assignment(s: Scenario) -> Assignment:
    if s.capacity * s.n_sites < s.n_tps:
        raise CapacityError(f"B·N = {s.capacity * s.n_sites} < M = {s.n_tps}")
    order = _site_order(s)
    counts = np.zeros(s.n_sites, dtype=int)
    serving = np.full(s.n_tps, -1)
    for m in range(s.n_tps):
        for n in order[m]:
            if counts[n] < s.capacity:
                serving[m] = n
                counts[n] += 1
                break
    return Assignment.from_serving(serving, s.n_sites)


def _result(found: bool, assign: Assignment, s: Scenario, iterations: int, trace: list[float]) -> Phase1Result:
    grid = optimal_grid_vector(assign, s)
    return Phase1Result(found, assign, grid, cost_c1(assign.b, grid, s), iterations, trace)


SURPLUS_BEFORE = "before"
SURPLUS_AFTER = "after"


def run_phase1(
    s: Scenario,
    seed: int | np.random.SeedSequence | None = 0,
    surplus_check: str = SURPLUS_BEFORE,
) -> Phase1Result:
    """Deploy base stations and assign test points.

    ``surplus_check`` selects whether a receiving site must show positive
    surplus with its current load (``"before"``) or with the moved TP already
    counted (``"after"``). The stricter ``"after"`` rule guarantees that every
    accepted removal lowers the phase-1 cost for any price setting.
    """
    if surplus_check not in (SURPLUS_BEFORE, SURPLUS_AFTER):
        raise ValueError(f"surplus_check must be 'before' or 'after', got {surplus_check!r}")
    extra = 1 if surplus_check == SURPLUS_AFTER else 0
    rng = np.random.default_rng(seed)
    assign = initial_assignment(s)
    if infeasible_set(assign, s):
        return _result(False, assign, s, 0, [])

    order = _site_order(s)
    best = assign.copy()
    trace = [cost_c1(best.b, optimal_grid_vector(best, s), s)]
    iterations = 0
    while best.b.any():
        iterations += 1
        current = best.copy()
        counts = current.counts
        active = np.flatnonzero(current.b)
        least = counts[active].min()
        ties = active[counts[active] == least]
        dropped = int(ties[rng.integers(ties.size)])

        detached = np.flatnonzero(current.p[:, dropped])
        current.p[:, dropped] = False
        current.b[dropped] = False
        counts = current.counts
        stranded = []
        for m in detached:
            target = -1
            for n in order[m]:
                if not current.b[n] or counts[n] >= s.capacity:
                    continue
                if s.supply_quantile[n] - (counts[n] + extra) * s.tx_power[n] - s.static_power[n] > 0:
                    target = n
                    break
            if target < 0:
                stranded.append(int(m))
                continue
            current.p[m, target] = True
            counts[target] += 1

        omega = infeasible_set(current, s)
        if omega or stranded:
            logger.debug(
                "removal of site %d rejected: %d infeasible, %d stranded", dropped, len(omega), len(stranded)
            )
            break
        best = current
        trace.append(cost_c1(best.b, optimal_grid_vector(best, s), s))

    return _result(True, best, s, iterations, trace)
