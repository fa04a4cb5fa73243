"""Small dense linear programs: representation and a two-phase simplex solver.

The solver is a textbook tableau method with Bland's smallest-index rule for
both the entering and the leaving variable, so it cannot cycle and gives the
same answer for the same input. It is meant for problems with at most a few
hundred variables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import LpConstructionError

RELATIONS = ("<=", "=", ">=")
PIVOT_TOL = 1e-9
COST_TOL = 1e-9
FEAS_TOL = 1e-7

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LpProblem:
    """minimize objective @ x  subject to constraints and x >= var_lower."""

    objective: np.ndarray
    constraints: list[tuple[np.ndarray, str, float]] = field(default_factory=list)
    var_lower: np.ndarray | None = None
    var_names: list[str] | None = None

    def __post_init__(self) -> None:
        self.objective = np.asarray(self.objective, dtype=float).ravel()
        n = self.objective.shape[0]
        if not np.all(np.isfinite(self.objective)):
            raise LpConstructionError("objective has non-finite entries")
        if self.var_lower is None:
            self.var_lower = np.zeros(n)
        self.var_lower = np.asarray(self.var_lower, dtype=float).ravel()
        if self.var_lower.shape != (n,):
            raise LpConstructionError(f"var_lower has {self.var_lower.shape[0]} entries, expected {n}")
        if not np.all(np.isfinite(self.var_lower)):
            raise LpConstructionError("variable lower bounds must be finite")
        if self.var_names is None:
            self.var_names = [f"x{j}" for j in range(n)]
        if len(self.var_names) != n:
            raise LpConstructionError(f"{len(self.var_names)} variable names for {n} variables")
        checked = []
        for row in self.constraints:
            checked.append(self._check_row(*row))
        self.constraints = checked

    @property
    def n_vars(self) -> int:
        return self.objective.shape[0]

    def _check_row(self, coeffs: Sequence[float], relation: str, bound: float):
        a = np.asarray(coeffs, dtype=float).ravel()
        if a.shape != (self.n_vars,):
            raise LpConstructionError(f"constraint has {a.shape[0]} coefficients, expected {self.n_vars}")
        if relation not in RELATIONS:
            raise LpConstructionError(f"unknown relation {relation!r}")
        bound = float(bound)
        if not (np.all(np.isfinite(a)) and np.isfinite(bound)):
            raise LpConstructionError("constraint data must be finite")
        return a, relation, bound

    def add_constraint(self, coeffs: Sequence[float], relation: str, bound: float) -> None:
        self.constraints.append(self._check_row(coeffs, relation, bound))

    def max_violation(self, x: np.ndarray) -> float:
        """Largest absolute violation of any constraint or lower bound at x."""
        worst = float(np.max(self.var_lower - x, initial=0.0))
        for a, rel, bound in self.constraints:
            lhs = float(a @ x)
            if rel == "<=":
                v = lhs - bound
            elif rel == ">=":
                v = bound - lhs
            else:
                v = abs(lhs - bound)
            worst = max(worst, v)
        return worst


@dataclass
class LpSolution:
    status: str
    x: np.ndarray | None = None
    objective_value: float = float("nan")

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _pivot(tab: np.ndarray, row: int, col: int) -> None:
    tab[row] /= tab[row, col]
    others = tab[:, col].copy()
    others[row] = 0.0
    tab -= np.outer(others, tab[row])


def _run_simplex(tab: np.ndarray, basis: list[int], allowed: np.ndarray) -> bool:
    """Iterate Bland's rule on a tableau whose last row holds reduced costs.

    Returns False when the problem is unbounded along some column.
    """
    m = tab.shape[0] - 1
    while True:
        reduced = tab[-1, :-1]
        candidates = np.flatnonzero((reduced < -COST_TOL) & allowed)
        if candidates.size == 0:
            return True
        col = int(candidates[0])
        column = tab[:m, col]
        rows = np.flatnonzero(column > PIVOT_TOL)
        if rows.size == 0:
            return False
        ratios = tab[rows, -1] / column[rows]
        best = ratios.min()
        tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
        row = int(min(tied, key=lambda r: basis[r]))
        _pivot(tab, row, col)
        basis[row] = col


def solve_lp(problem: LpProblem) -> LpSolution:
    n = problem.n_vars
    lower = problem.var_lower
    c = problem.objective

    rows_a, rows_b, rels = [], [], []
    for a, rel, bound in problem.constraints:
        rhs = bound - float(a @ lower)
        if rhs < 0:
            a, rhs = -a, -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        rows_a.append(a)
        rows_b.append(rhs)
        rels.append(rel)
    m = len(rows_a)
    if m == 0:
        if np.any(c < 0):
            return LpSolution(UNBOUNDED)
        return LpSolution(OPTIMAL, lower.copy(), float(c @ lower))

    n_slack = sum(r != "=" for r in rels)
    n_art = sum(r != "<=" for r in rels)
    total = n + n_slack + n_art
    tab = np.zeros((m + 1, total + 1))
    basis: list[int] = []
    s_col, a_col = n, n + n_slack
    art_cols = []
    for i, (a, rhs, rel) in enumerate(zip(rows_a, rows_b, rels)):
        tab[i, :n] = a
        tab[i, -1] = rhs
        if rel == "<=":
            tab[i, s_col] = 1.0
            basis.append(s_col)
            s_col += 1
        else:
            if rel == ">=":
                tab[i, s_col] = -1.0
                s_col += 1
            tab[i, a_col] = 1.0
            basis.append(a_col)
            art_cols.append(a_col)
            a_col += 1
    is_art = np.zeros(total, dtype=bool)
    is_art[art_cols] = True

    # Phase 1: minimize the sum of artificial variables.
    if art_cols:
        tab[-1, :] = 0.0
        for i, col in enumerate(basis):
            if is_art[col]:
                tab[-1, :] -= tab[i, :]
        tab[-1, art_cols] = 0.0
        _run_simplex(tab, basis, np.ones(total, dtype=bool))
        scale = max(1.0, float(np.max(np.abs(rows_b))))
        if -tab[-1, -1] > FEAS_TOL * scale:
            return LpSolution(INFEASIBLE)
        # Drive zero-level artificials out of the basis; drop redundant rows.
        keep = []
        for i in range(m):
            if is_art[basis[i]]:
                nonzero = np.flatnonzero((np.abs(tab[i, :total]) > PIVOT_TOL) & ~is_art)
                if nonzero.size == 0:
                    continue
                j = int(nonzero[0])
                _pivot(tab, i, j)
                basis[i] = j
            keep.append(i)
        if len(keep) < m:
            tab = np.vstack([tab[keep], tab[-1:]])
            basis = [basis[i] for i in keep]
            m = len(keep)

    # Phase 2 on the original objective, artificials frozen out.
    cost = np.zeros(total)
    cost[:n] = c
    tab[-1, :-1] = cost
    tab[-1, -1] = 0.0
    for i, col in enumerate(basis):
        if cost[col] != 0.0:
            tab[-1, :] -= cost[col] * tab[i, :]
    if not _run_simplex(tab, basis, ~is_art):
        return LpSolution(UNBOUNDED)

    y = np.zeros(total)
    # Re-solve the basic system from the original data to shed pivot round-off.
    full = np.zeros((len(rows_a), total))
    for i, (a, rel) in enumerate(zip(rows_a, rels)):
        full[i, :n] = a
    s_col, a_col = n, n + n_slack
    for i, rel in enumerate(rels):
        if rel == "<=":
            full[i, s_col] = 1.0
            s_col += 1
        else:
            if rel == ">=":
                full[i, s_col] = -1.0
                s_col += 1
            full[i, a_col] = 1.0
            a_col += 1
    rhs = np.asarray(rows_b)
    try:
        sol, *_ = np.linalg.lstsq(full[:, basis], rhs, rcond=None)
        y[basis] = sol
    except np.linalg.LinAlgError:
        y[basis] = tab[:m, -1]
    if np.any(y < -FEAS_TOL) or np.max(np.abs(full @ np.maximum(y, 0) - rhs), initial=0.0) > FEAS_TOL:
        y[:] = 0.0
        y[basis] = tab[:m, -1]
    y = np.maximum(y, 0.0)
    x = y[:n] + lower
    return LpSolution(OPTIMAL, x, float(c @ x))
