"""Planning of cellular networks whose base stations run on energy harvesters."""

from .cost import CostBreakdown, cost_c1, cost_c2, lambda_t_eur_per_watt, objective_cost
from .energy import EnergyDistribution, EnergyPlan
from .lp import LpProblem, LpSolution, solve_lp
from .oracle import ExactResult, solve_exact
from .phase1 import Phase1Result, initial_assignment, run_phase1
from .phase2 import Phase2Result, build_balancing_lp, run_phase2
from .radio import Assignment
from .scenario import GenerationParams, Scenario, generate_scenario, load_scenario, save_scenario

__all__ = [
    "Assignment",
    "CostBreakdown",
    "EnergyDistribution",
    "EnergyPlan",
    "ExactResult",
    "GenerationParams",
    "LpProblem",
    "LpSolution",
    "Phase1Result",
    "Phase2Result",
    "Scenario",
    "build_balancing_lp",
    "cost_c1",
    "cost_c2",
    "generate_scenario",
    "initial_assignment",
    "lambda_t_eur_per_watt",
    "load_scenario",
    "objective_cost",
    "run_phase1",
    "run_phase2",
    "save_scenario",
    "solve_exact",
    "solve_lp",
]
