"""Monte-Carlo sweeps over life cycle and harvest spread, plus the oracle comparison.

Every run derives its seeds from ``(base_seed, stream, run)`` through
``numpy.random.SeedSequence``, so results do not depend on execution order
or on how runs are split across workers.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from statistics import NormalDist
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from .errors import InfeasibleError, StatisticsError
from .oracle import solve_exact
from .phase1 import SURPLUS_BEFORE, run_phase1
from .phase2 import run_phase2
from .scenario import GenerationParams, Scenario, generate_scenario

logger = logging.getLogger(__name__)

NO_RES = "no-res"
RES_NO_CONN = "res-no-conn"
RES_CONN = "res-conn"
CONFIGS = (NO_RES, RES_NO_CONN, RES_CONN)

NO_RES_INSTALL_COST_EUR = 55_000.0
LIFECYCLE_YEARS = tuple(range(6, 21, 2))
SPREAD_STEPS = tuple(range(10))
SPREAD_LIFE_CYCLE_YEARS = 10.0
SPREAD_B_MAX_W = 190.0
SPREAD_FAMILY = "a_n = 100 - 10k W, b_n = 190 W for every site (k = 0..9; spread 90+10k W, mean 145-5k W)"
ORACLE_PARAMS = GenerationParams(area_m=2000.0, n_sites=4, n_tps=6, capacity=3)

CSV_COLUMNS = ("sweep_x", "config", "b_cap", "n_runs", "n_infeasible", "mean_cost_eur", "ci_half_width_eur")

# Seed streams.
_SCENARIO, _PLANNER, _SPREAD_LAYOUT, _ORACLE_SCENARIO, _ORACLE_PLANNER = range(1, 6)


def derive_seed(base: int, *keys: int) -> int:
    return int(np.random.SeedSequence([int(base), *map(int, keys)]).generate_state(1)[0])


def batch_mean_ci(samples: Sequence[float], confidence: float = 0.95) -> tuple[float, float]:
    """Sample mean and normal-approximation half-width z * s / sqrt(n)."""
    x = np.asarray(samples, dtype=float)
    if x.size < 2:
        raise StatisticsError(f"need at least 2 samples, got {x.size}")
    if not 0 < confidence < 1:
        raise StatisticsError(f"confidence must lie in (0, 1), got {confidence}")
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    return float(x.mean()), float(z * x.std(ddof=1) / math.sqrt(x.size))


@dataclass
class SweepSpec:
    kind: str
    runs: int = 100
    confidence: float = 0.95
    seed: int = 0
    overrides: dict[str, Any] = field(default_factory=dict)
    b_caps: tuple[int, ...] | None = None
    workers: int = 1
    surplus_check: str = SURPLUS_BEFORE

    def __post_init__(self) -> None:
        if self.runs < 1:
            raise ValueError("runs must be ≥ 1")
        if not 0 < self.confidence < 1:
            raise ValueError("confidence must lie in (0, 1)")

    def params(self, **extra: Any) -> GenerationParams:
        return replace(GenerationParams(), **{**self.overrides, **extra})


@dataclass
class SweepRow:
    x: float
    config: str
    b_cap: int
    mean_cost: float
    ci_half_width: float
    n_runs: int
    n_infeasible: int = 0


@dataclass
class RunTrace:
    """Termination counters for one planner run."""

    n_sites: int
    outer_iterations: int
    initial_edges: int = 0
    phase2_iterations: int = 0

    @property
    def within_bounds(self) -> bool:
        return self.outer_iterations <= self.n_sites and self.phase2_iterations <= self.initial_edges


@dataclass
class SweepResult:
    rows: list[SweepRow]
    traces: list[RunTrace] = field(default_factory=list)
    header: list[str] = field(default_factory=list)

    def row(self, x: float, config: str, b_cap: int) -> SweepRow:
        for r in self.rows:
            if r.x == x and r.config == config and r.b_cap == b_cap:
                return r
        raise KeyError((x, config, b_cap))

    def to_csv(self) -> str:
        return rows_to_csv(self.rows, self.header)


def plan_costs(
    s: Scenario, seed: int, configs: Iterable[str] = CONFIGS, surplus_check: str = SURPLUS_BEFORE
) -> tuple[dict[str, float | None], list[RunTrace]]:
    """Cost of each configuration on one scenario (None when phase 1 fails)."""
    out: dict[str, float | None] = {}
    traces = []
    configs = tuple(configs)
    if NO_RES in configs:
        p0 = run_phase1(s.without_res(NO_RES_INSTALL_COST_EUR), seed, surplus_check)
        out[NO_RES] = p0.cost if p0.found else None
        traces.append(RunTrace(s.n_sites, p0.outer_iterations))
    if RES_NO_CONN in configs or RES_CONN in configs:
        p1 = run_phase1(s, seed, surplus_check)
        if RES_NO_CONN in configs:
            out[RES_NO_CONN] = p1.cost if p1.found else None
        trace = RunTrace(s.n_sites, p1.outer_iterations)
        if RES_CONN in configs:
            if p1.found:
                p2 = run_phase2(p1, s)
                out[RES_CONN] = p2.cost
                trace.initial_edges, trace.phase2_iterations = p2.initial_edges, p2.iterations
            else:
                out[RES_CONN] = None
        traces.append(trace)
    return out, traces


def _aggregate(samples: dict[tuple, list[float | None]], confidence: float) -> list[SweepRow]:
    rows = []
    for (x, config, b_cap), values in samples.items():
        ok = [v for v in values if v is not None]
        bad = len(values) - len(ok)
        if len(ok) >= 2:
            mean, hw = batch_mean_ci(ok, confidence)
        elif ok:
            mean, hw = float(ok[0]), float("nan")
        else:
            mean, hw = float("nan"), float("nan")
        rows.append(SweepRow(float(x), config, int(b_cap), mean, hw, len(ok), bad))
    return rows


def _map(fn: Callable, items: list, workers: int) -> list:
    if workers <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * workers))))


def _lifecycle_cap(spec: SweepSpec) -> int:
    return spec.b_caps[0] if spec.b_caps else 12


def _lifecycle_run(job: tuple) -> list[tuple[float, dict, list[RunTrace]]]:
    spec, run, years = job
    s = generate_scenario(spec.params(capacity=_lifecycle_cap(spec)), derive_seed(spec.seed, _SCENARIO, run))
    seed = derive_seed(spec.seed, _PLANNER, run)
    return [(t, *plan_costs(s.with_life_cycle(float(t)), seed, surplus_check=spec.surplus_check)) for t in years]


def run_lifecycle_sweep(spec: SweepSpec, years: Sequence[float] = LIFECYCLE_YEARS) -> SweepResult:
    """Cost versus network life cycle (B = 12 unless overridden), harvest redrawn per run.

    Each run evaluates one random instance at every life-cycle value (common
    random numbers across the x axis).
    """
    cap = _lifecycle_cap(spec)
    samples: dict[tuple, list[float | None]] = {(float(t), c, cap): [] for t in years for c in CONFIGS}
    traces: list[RunTrace] = []
    for run_out in _map(_lifecycle_run, [(spec, r, tuple(years)) for r in range(spec.runs)], spec.workers):
        for t, costs, run_traces in run_out:
            for c in CONFIGS:
                samples[(float(t), c, cap)].append(costs[c])
            traces.extend(run_traces)
    header = [
        f"sweep=lifecycle; B={cap}; a_n~U[0,100] W, b_n~U[100,200] W redrawn per run; "
        f"runs={spec.runs}; confidence={spec.confidence}; seed={spec.seed}"
    ]
    return SweepResult(_aggregate(samples, spec.confidence), traces, header)


def spread_harvest(k: int) -> tuple[float, float]:
    return 100.0 - 10.0 * k, SPREAD_B_MAX_W


def _spread_run(job: tuple) -> list[tuple[int, int, dict, list[RunTrace]]]:
    spec, run, steps, caps = job
    layout_seed = derive_seed(spec.seed, _SPREAD_LAYOUT)
    seed = derive_seed(spec.seed, _PLANNER, run)
    out = []
    for cap in caps:
        for k in steps:
            a, b = spread_harvest(k)
            params = spec.params(capacity=cap, life_cycle_years=SPREAD_LIFE_CYCLE_YEARS)
            params = replace(params, harvest=((a, b),) * params.n_sites)
            s = generate_scenario(params, layout_seed)
            out.append((k, cap, *plan_costs(s, seed, (RES_NO_CONN, RES_CONN), spec.surplus_check)))
    return out


def run_spread_sweep(spec: SweepSpec, steps: Sequence[int] = SPREAD_STEPS) -> SweepResult:
    """Cost versus harvest spread at T = 10 years on one fixed TP layout."""
    caps = spec.b_caps or (6, 12)
    configs = (RES_NO_CONN, RES_CONN)
    samples: dict[tuple, list[float | None]] = {}
    for cap in caps:
        for k in steps:
            a, b = spread_harvest(k)
            for c in configs:
                samples[(b - a, c, cap)] = []
    traces: list[RunTrace] = []
    jobs = [(spec, r, tuple(steps), tuple(caps)) for r in range(spec.runs)]
    for run_out in _map(_spread_run, jobs, spec.workers):
        for k, cap, costs, run_traces in run_out:
            a, b = spread_harvest(k)
            for c in configs:
                samples[(b - a, c, cap)].append(costs[c])
            traces.extend(run_traces)
    header = [
        f"sweep=spread; T={SPREAD_LIFE_CYCLE_YEARS:g} y; harvest family: {SPREAD_FAMILY}; "
        f"runs={spec.runs}; confidence={spec.confidence}; seed={spec.seed}"
    ]
    return SweepResult(_aggregate(samples, spec.confidence), traces, header)


def rows_to_csv(rows: Sequence[SweepRow], header: Sequence[str] = ()) -> str:
    buf = io.StringIO()
    for line in header:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow(
            [repr(r.x), r.config, r.b_cap, r.n_runs, r.n_infeasible, repr(r.mean_cost), repr(r.ci_half_width)]
        )
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Oracle comparison


@dataclass
class OracleComparison:
    instance: int
    status: str
    exact_cost: float = float("nan")
    heuristic_cost: float = float("nan")
    outer_iterations: int = 0
    phase2_iterations: int = 0
    initial_edges: int = 0
    n_sites: int = 0

    @property
    def gap(self) -> float:
        return (self.heuristic_cost - self.exact_cost) / self.exact_cost


@dataclass
class OracleReport:
    rows: list[OracleComparison]
    seed: int
    params: GenerationParams = ORACLE_PARAMS

    @property
    def compared(self) -> list[OracleComparison]:
        return [r for r in self.rows if r.status == "ok"]

    @property
    def gaps(self) -> np.ndarray:
        return np.array([r.gap for r in self.compared])

    def summary(self) -> dict[str, float]:
        g = self.gaps
        out: dict[str, float] = {"instances": len(self.rows), "compared": len(self.compared)}
        out["skipped"] = len(self.rows) - len(self.compared)
        if g.size:
            for q in (0.0, 0.25, 0.5, 0.75, 1.0):
                out[f"gap_q{int(q * 100)}"] = float(np.quantile(g, q))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(
            f"# compare-oracle; N={self.params.n_sites}, M={self.params.n_tps}, "
            f"B={self.params.capacity}, area={self.params.area_m:g} m; seed={self.seed}\n"
        )
        for key, value in self.summary().items():
            buf.write(f"# {key}={value!r}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("instance", "status", "exact_cost_eur", "heuristic_cost_eur", "rel_gap"))
        for r in self.rows:
            gap = r.gap if r.status == "ok" else float("nan")
            writer.writerow((r.instance, r.status, repr(r.exact_cost), repr(r.heuristic_cost), repr(gap)))
        return buf.getvalue()


def _oracle_run(job: tuple) -> OracleComparison:
    base, i, params, surplus_check = job
    s = generate_scenario(params, derive_seed(base, _ORACLE_SCENARIO, i))
    p1 = run_phase1(s, derive_seed(base, _ORACLE_PLANNER, i), surplus_check)
    row = OracleComparison(i, "ok", n_sites=s.n_sites, outer_iterations=p1.outer_iterations)
    if not p1.found:
        row.status = "heuristic-infeasible"
        return row
    p2 = run_phase2(p1, s)
    row.heuristic_cost = p2.cost
    row.phase2_iterations, row.initial_edges = p2.iterations, p2.initial_edges
    try:
        row.exact_cost = solve_exact(s).best_cost
    except InfeasibleError:
        row.status = "oracle-infeasible"
    return row


def run_oracle_compare(
    instances: int = 50,
    seed: int = 0,
    params: GenerationParams = ORACLE_PARAMS,
    workers: int = 1,
    surplus_check: str = SURPLUS_BEFORE,
) -> OracleReport:
    jobs = [(seed, i, params, surplus_check) for i in range(instances)]
    return OracleReport(_map(_oracle_run, jobs, workers), seed, params)
