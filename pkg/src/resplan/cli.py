"""Command-line entry point: ``resplan plan|sweep|compare-oracle|generate``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .cost import objective_cost
from .energy import EnergyPlan
from .errors import PlanningError
from .experiments import (
    NO_RES_INSTALL_COST_EUR,
    SweepSpec,
    run_lifecycle_sweep,
    run_oracle_compare,
    run_spread_sweep,
)
from .phase1 import SURPLUS_AFTER, SURPLUS_BEFORE, run_phase1
from .phase2 import run_phase2
from .scenario import GenerationParams, Scenario, generate_scenario, load_scenario, save_scenario


def plan_document(
    s: Scenario,
    seed: int = 0,
    no_res: bool = False,
    balancing: bool = True,
    surplus_check: str = SURPLUS_BEFORE,
    no_res_install_cost: float = NO_RES_INSTALL_COST_EUR,
) -> dict:
    """Run the planner on one scenario and describe the result as plain data."""
    if no_res:
        s = s.without_res(no_res_install_cost)
    p1 = run_phase1(s, seed, surplus_check)
    doc: dict = {"found": p1.found, "phase1_outer_iterations": p1.outer_iterations}
    if not p1.found:
        doc["infeasible_note"] = "initial nearest-site assignment misses some SINR target"
        return doc
    plan = EnergyPlan.grid_only(p1.grid)
    if balancing and not no_res:
        p2 = run_phase2(p1, s)
        plan = p2.plan
        doc["phase2_iterations"] = p2.iterations
        doc["phase2_fell_back"] = p2.fell_back
    assign = p1.assign
    doc["deployed_sites"] = [int(n) for n in np.flatnonzero(assign.b)]
    doc["assignments"] = [{"tp": int(m), "site": int(n)} for m, n in enumerate(assign.serving)]
    doc["edges"] = [
        {"from": int(t), "to": int(n), "flow_w": float(plan.flows[t, n])} for t, n in zip(*np.nonzero(plan.edges))
    ]
    doc["grid_w"] = {str(int(n)): float(plan.grid[n]) for n in np.flatnonzero(assign.b)}
    doc["cost"] = objective_cost(assign, plan, s).as_dict()
    return doc


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_plan(args: argparse.Namespace) -> int:
    s = load_scenario(Path(args.scenario).read_text())
    doc = plan_document(s, args.seed, args.no_res, not args.no_balancing, args.surplus_check)
    _write(json.dumps(doc, indent=2) + "\n", args.out)
    return 0 if doc["found"] else 2


def _cmd_sweep(args: argparse.Namespace) -> int:
    spec = SweepSpec(
        kind=args.kind,
        runs=args.runs,
        confidence=args.confidence,
        seed=args.seed,
        b_caps=tuple(args.b) if args.b else None,
        workers=args.workers,
        surplus_check=args.surplus_check,
    )
    result = run_lifecycle_sweep(spec) if args.kind == "lifecycle" else run_spread_sweep(spec)
    _write(result.to_csv(), args.out)
    return 0


def _cmd_compare(args: argparse.Namespace) -> int:
    report = run_oracle_compare(args.instances, args.seed, workers=args.workers, surplus_check=args.surplus_check)
    _write(report.to_csv(), args.out)
    summary = report.summary()
    print(" ".join(f"{k}={v:.4g}" for k, v in summary.items()), file=sys.stderr)
    return 0


def _cmd_generate(args: argparse.Namespace) -> int:
    params = GenerationParams(
        area_m=args.area, n_sites=args.sites, n_tps=args.tps, capacity=args.capacity, life_cycle_years=args.years
    )
    _write(save_scenario(generate_scenario(params, args.seed)), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="resplan", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        p.add_argument(
            "--surplus-check",
            choices=(SURPLUS_BEFORE, SURPLUS_AFTER),
            default=SURPLUS_BEFORE,
            help="when a receiving site's energy surplus is tested during BS removal",
        )

    p = sub.add_parser("plan", help="plan one scenario file")
    p.add_argument("scenario")
    p.add_argument("--no-res", action="store_true", help="ignore harvesters (zero supply, 55 kEUR sites)")
    p.add_argument("--no-balancing", action="store_true", help="skip inter-RES line selection")
    common(p)
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("sweep", help="Monte-Carlo cost sweeps, CSV output")
    p.add_argument("kind", choices=("lifecycle", "spread"))
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--b", type=int, action="append", choices=(6, 12), help="capacity B (repeatable)")
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("compare-oracle", help="heuristic vs exact optimum on small instances")
    p.add_argument("--instances", type=int, default=50)
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("generate", help="write a random scenario file")
    p.add_argument("--area", type=float, default=3000.0)
    p.add_argument("--sites", type=int, default=9)
    p.add_argument("--tps", type=int, default=20)
    p.add_argument("--capacity", type=int, default=12)
    p.add_argument("--years", type=float, default=10.0)
    common(p)
    p.set_defaults(func=_cmd_generate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (PlanningError, OSError) as exc:
        print(f"resplan: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
