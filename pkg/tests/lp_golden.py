"""Hand-solved linear programs shared by the LP unit tests and the acceptance run."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from resplan.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LpProblem

LT = 26.28


@dataclass
class Golden:
    name: str
    problem: LpProblem
    status: str
    value: float | None = None
    x: tuple | None = None


def _lp(c, rows=(), lower=None):
    return LpProblem(np.asarray(c, dtype=float), [(np.asarray(a, dtype=float), r, b) for a, r, b in rows], lower)


def golden_suite() -> list[Golden]:
    beale = _lp(
        [-0.75, 150, -0.02, 6],
        [
            ([0.25, -60, -0.04, 9], "<=", 0),
            ([0.5, -90, -0.02, 3], "<=", 0),
            ([0, 0, 1, 0], "<=", 1),
        ],
    )
    return [
        Golden("single lower bound", _lp([1], [([1], ">=", 5)]), OPTIMAL, 5.0, (5.0,)),
        Golden(
            "import beats grid",
            _lp([1, 0.002628], [([-1, -0.99], "<=", -50)]),
            OPTIMAL,
            0.002628 * 50 / 0.99,
            (0.0, 50 / 0.99),
        ),
        Golden("contradictory bounds", _lp([1], [([1], "<=", 1), ([1], ">=", 2)]), INFEASIBLE),
        Golden("unbounded ray", _lp([-1]), UNBOUNDED),
        Golden("two variable cap", _lp([-1, -1], [([1, 1], "<=", 4), ([1, 0], "<=", 3)]), OPTIMAL, -4.0),
        Golden(
            "wyndor",
            _lp([-3, -5], [([1, 0], "<=", 4), ([0, 2], "<=", 12), ([3, 2], "<=", 18)]),
            OPTIMAL,
            -36.0,
            (2.0, 6.0),
        ),
        Golden("covering", _lp([2, 3], [([1, 1], ">=", 10), ([1, 0], "<=", 4)]), OPTIMAL, 26.0, (4.0, 6.0)),
        Golden("equalities", _lp([1, 1], [([1, 2], "=", 6), ([1, -1], "=", 0)]), OPTIMAL, 4.0, (2.0, 2.0)),
        Golden(
            "redundant equalities",
            _lp([1, 1], [([1, 1], "=", 0), ([2, 2], "=", 0), ([1, -1], "=", 0)]),
            OPTIMAL,
            0.0,
            (0.0, 0.0),
        ),
        Golden(
            "negative lower bounds",
            _lp([1, 1], [([1, 1], ">=", 0)], lower=[-3, -2]),
            OPTIMAL,
            0.0,
        ),
        Golden("free of constraints", _lp([1], lower=[-5]), OPTIMAL, -5.0, (-5.0,)),
        Golden("degenerate cycling example", beale, OPTIMAL, -0.05),
        Golden(
            "inconsistent equalities",
            _lp([1, 1], [([1, 1], "=", 1), ([1, 1], "=", 2)]),
            INFEASIBLE,
        ),
        Golden("unbounded with constraint", _lp([-1, 0], [([1, -1], "<=", 1)]), UNBOUNDED),
        Golden("negated bound", _lp([1], [([-1], "<=", -3)]), OPTIMAL, 3.0, (3.0,)),
        Golden("zero objective", _lp([0, 0], [([1, 1], "<=", 5)]), OPTIMAL, 0.0),
        Golden(
            "diet",
            _lp([1, 1], [([1, 2], ">=", 4), ([3, 1], ">=", 6)]),
            OPTIMAL,
            2.8,
            (1.6, 1.2),
        ),
        Golden(
            "transportation",
            # x11 x12 x21 x22 with supplies 20, 30 and demands 25, 25
            _lp(
                [1, 2, 3, 1],
                [
                    ([1, 1, 0, 0], "<=", 20),
                    ([0, 0, 1, 1], "<=", 30),
                    ([1, 0, 1, 0], ">=", 25),
                    ([0, 1, 0, 1], ">=", 25),
                ],
            ),
            OPTIMAL,
            60.0,
            (20.0, 0.0, 5.0, 25.0),
        ),
        Golden("lower bound only", _lp([1], [([1], ">=", -5)], lower=[-10]), OPTIMAL, -5.0),
        Golden(
            "two-site balancing",
            # grid0, grid1, flow 1->0; site 0 short 50 W, site 1 has 100 W spare
            _lp(
                [LT, LT, LT * 0.01],
                [([-1, 0, -0.99], "<=", -50), ([0, -1, 1], "<=", 100)],
            ),
            OPTIMAL,
            LT * 0.01 * 50 / 0.99,
            (0.0, 0.0, 50 / 0.99),
        ),
        Golden(
            "limited exporter",
            # site 0 short 80 W, site 1 only 50 W spare
            _lp(
                [LT, LT, LT * 0.01],
                [([-1, 0, -0.99], "<=", -80), ([0, -1, 1], "<=", 50)],
            ),
            OPTIMAL,
            LT * (80 - 0.99 * 50) + LT * 0.01 * 50,
            (80 - 0.99 * 50, 0.0, 50.0),
        ),
    ]
