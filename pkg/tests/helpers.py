"""Builders for small hand-made scenarios."""

from __future__ import annotations

import numpy as np

from resplan.energy import EnergyDistribution
from resplan.scenario import Scenario, Site, TestPoint, gains_from_positions, site_distance_matrix

NOISE_W = 10 ** (-114 / 10) / 1000


def make_scenario(
    site_xy,
    tp_xy,
    harvest,
    *,
    gains=None,
    capacity: int = 12,
    install_cost: float = 60_000.0,
    tx_power: float = 20.0,
    static_power: float = 19.0,
    outage_bound: float = 0.05,
    noise: float = NOISE_W,
    gamma: float = 1.0,
    conn_cost=None,
    unit_cost: float = 10.0,
    loss: float = 0.01,
    price: float = 0.3,
    years: float = 10.0,
) -> Scenario:
    site_xy = np.asarray(site_xy, dtype=float).reshape(-1, 2)
    tp_xy = np.asarray(tp_xy, dtype=float).reshape(-1, 2)
    sites = tuple(
        Site(i, tuple(site_xy[i]), install_cost, tx_power, static_power, outage_bound, EnergyDistribution("uniform", a, b))
        for i, (a, b) in enumerate(harvest)
    )
    tps = tuple(TestPoint(j, tuple(tp_xy[j]), noise, gamma) for j in range(len(tp_xy)))
    if gains is None:
        gains = gains_from_positions(tp_xy, site_xy, 148.1, 37.6)
    unit = None if conn_cost is not None else unit_cost
    if conn_cost is None:
        conn_cost = unit_cost * site_distance_matrix(site_xy)
    return Scenario(
        sites=sites,
        tps=tps,
        gains=np.asarray(gains, dtype=float).reshape(len(tps), len(sites)),
        conn_cost=conn_cost,
        loss=loss,
        capacity=capacity,
        energy_price=price,
        life_cycle_years=years,
        edge_unit_cost=unit,
    )


def random_small_scenario(rng: np.random.Generator, n_sites: int, n_tps: int, capacity: int | None = None) -> Scenario:
    """Random positions in a 2 km square with the default radio and energy constants."""
    site_xy = rng.uniform(0, 2000, size=(n_sites, 2))
    tp_xy = rng.uniform(0, 2000, size=(n_tps, 2))
    harvest = [(float(a), float(b)) for a, b in zip(rng.uniform(0, 100, n_sites), rng.uniform(100, 200, n_sites))]
    gamma = float(10 ** (rng.uniform(-10, 15) / 10))
    return make_scenario(site_xy, tp_xy, harvest, capacity=capacity or max(1, n_tps), gamma=gamma)


# Lines collected by the acceptance tests and printed at the end of the run.
ACCEPTANCE_LOG: dict[float, str] = {}


def record(criterion: int, passed: bool, detail: str) -> bool:
    ACCEPTANCE_LOG[criterion] = f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}"
    return passed


def note(key: float, text: str) -> None:
    """Informational line listed with the verdicts but not graded."""
    ACCEPTANCE_LOG[key] = f"[INFO] {text}"
