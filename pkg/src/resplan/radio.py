"""Pathloss, load-scaled interference, SINR and the big-M QoS linearization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from .scenario import Scenario

# Relative slack on every "SINR >= target" comparison.
SINR_RTOL = 1e-9
MIN_DISTANCE_M = 1.0


def pathloss_gain(distance_m, l_a_db: float = 148.1, l_b_db: float = 37.6):
    """Linear gain of the log-distance model with distance in km.

    Accepts scalars or arrays; distances below 1 m are floored.
    """
    d_km = np.maximum(np.asarray(distance_m, dtype=float), MIN_DISTANCE_M) / 1000.0
    gain = 10.0 ** (-(l_a_db + l_b_db * np.log10(d_km)) / 10.0)
    return float(gain) if np.ndim(gain) == 0 else gain


def meets_target(value, target):
    return np.asarray(value) >= np.asarray(target) * (1.0 - SINR_RTOL)


@dataclass
class Assignment:
    """TP-to-BS assignment matrix ``p`` (M×N) and deployment vector ``b`` (N)."""

    p: np.ndarray
    b: np.ndarray

    def __post_init__(self) -> None:
        self.p = np.asarray(self.p, dtype=bool)
        self.b = np.asarray(self.b, dtype=bool)

    @classmethod
    def empty(cls, n_tps: int, n_sites: int) -> Assignment:
        return cls(np.zeros((n_tps, n_sites), dtype=bool), np.zeros(n_sites, dtype=bool))

    @classmethod
    def from_serving(cls, serving, n_sites: int, b=None) -> Assignment:
        """Build from a per-TP site index (-1 = unassigned)."""
        serving = np.asarray(serving, dtype=int)
        p = np.zeros((serving.shape[0], n_sites), dtype=bool)
        rows = np.flatnonzero(serving >= 0)
        p[rows, serving[rows]] = True
        if b is None:
            b = p.any(axis=0)
        return cls(p, np.asarray(b, dtype=bool))

    @property
    def serving(self) -> np.ndarray:
        """Serving site per TP, -1 where unassigned (first site if several)."""
        out = np.where(self.p.any(axis=1), self.p.argmax(axis=1), -1)
        return out

    @property
    def counts(self) -> np.ndarray:
        return self.p.sum(axis=0)

    def copy(self) -> Assignment:
        return Assignment(self.p.copy(), self.b.copy())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Assignment):
            return NotImplemented
        return np.array_equal(self.p, other.p) and np.array_equal(self.b, other.b)

    def violations(self, capacity: int, *, complete: bool = True) -> list[str]:
        """Names of the structural constraints this assignment breaks."""
        out = []
        if np.any(self.p & ~self.b[None, :]):
            out.append("p[m][n] ≤ b[n]")
        rows = self.p.sum(axis=1)
        if complete and np.any(rows != 1):
            out.append("each TP served by exactly one BS")
        elif np.any(rows > 1):
            out.append("each TP served by at most one BS")
        if np.any(self.counts > capacity * self.b):
            out.append("served count ≤ B·b[n]")
        return out


def load_ratio(assign: Assignment, t: int, capacity: int) -> float:
    return float(assign.p[:, t].sum()) / capacity


def load_ratios(assign: Assignment, capacity: int) -> np.ndarray:
    return assign.p.sum(axis=0) / capacity


def _sum_others(terms: np.ndarray) -> np.ndarray:
    """out[m, n] = sum over t != n of terms[m, t], without cancellation."""
    n = terms.shape[1]
    return terms @ (1.0 - np.eye(n))


def _interference_terms(assign: Assignment, s: Scenario) -> np.ndarray:
    """M×N matrix of rho_t * P_t * h_{m,t}, zero for undeployed t."""
    rho = load_ratios(assign, s.capacity) * assign.b
    return s.gains * (rho * s.tx_power)[None, :]


def sinr(assign: Assignment, m: int, n: int, s: Scenario) -> float:
    rho = load_ratios(assign, s.capacity)
    interference = 0.0
    for t in range(s.n_sites):
        if t != n and assign.b[t]:
            interference += rho[t] * s.tx_power[t] * s.gains[m, t]
    return float(s.tx_power[n] * s.gains[m, n] / (interference + s.noise[m]))


def sinr_matrix(assign: Assignment, s: Scenario) -> np.ndarray:
    """SINR of every (TP, site) pair under the current loads."""
    terms = _interference_terms(assign, s)
    interference = _sum_others(terms)
    return s.tx_power[None, :] * s.gains / (interference + s.noise[:, None])


def serving_sinr(assign: Assignment, s: Scenario) -> np.ndarray:
    """Sum over n of SINR[m,n]*p[m,n]; zero for unassigned TPs."""
    return np.sum(sinr_matrix(assign, s) * assign.p, axis=1)


def big_m(m: int, n: int, s: Scenario) -> float:
    others = sum(s.tx_power[t] * s.gains[m, t] for t in range(s.n_sites) if t != n)
    return float(s.sinr_min[m] * (others + s.noise[m]))


def big_m_matrix(s: Scenario) -> np.ndarray:
    received = s.tx_power[None, :] * s.gains
    others = _sum_others(received)
    return s.sinr_min[:, None] * (others + s.noise[:, None])


def qos_linearized_holds(assign: Assignment, m: int, n: int, s: Scenario) -> bool:
    p_mn = float(assign.p[m, n])
    lhs = big_m(m, n, s) * (1.0 - p_mn) + s.tx_power[n] * s.gains[m, n] * p_mn
    load = 0.0
    for t in range(s.n_sites):
        if t != n:
            load += assign.p[:, t].sum() * s.tx_power[t] * s.gains[m, t]
    rhs = s.sinr_min[m] * (load / s.capacity + s.noise[m])
    return bool(meets_target(lhs, rhs))


def qos_matrix(assign: Assignment, s: Scenario) -> np.ndarray:
    """Vectorized linearized QoS inequality for all (m, n)."""
    p = assign.p.astype(float)
    received = s.tx_power[None, :] * s.gains
    loaded = received * (p.sum(axis=0) / s.capacity)[None, :]
    rhs = s.sinr_min[:, None] * (_sum_others(loaded) + s.noise[:, None])
    lhs = big_m_matrix(s) * (1.0 - p) + received * p
    return meets_target(lhs, rhs)


def infeasible_set(assign: Assignment, s: Scenario) -> set[int]:
    """TPs whose serving SINR misses the target, plus every unassigned TP."""
    ok = meets_target(serving_sinr(assign, s), s.sinr_min) & assign.p.any(axis=1)
    return {int(m) for m in np.flatnonzero(~ok)}
