import csv
import io
import math

import numpy as np
import pytest

from resplan.errors import StatisticsError
from resplan.experiments import (
    CONFIGS,
    CSV_COLUMNS,
    LIFECYCLE_YEARS,
    NO_RES,
    RES_CONN,
    RES_NO_CONN,
    SweepSpec,
    batch_mean_ci,
    derive_seed,
    plan_costs,
    run_lifecycle_sweep,
    run_oracle_compare,
    run_spread_sweep,
    spread_harvest,
)
from resplan.scenario import GenerationParams, generate_scenario


def test_ci_constant_samples():
    mean, hw = batch_mean_ci([3.0] * 10)
    assert mean == 3.0 and hw == 0.0


def test_ci_two_points():
    mean, hw = batch_mean_ci([0.0, 2.0], 0.95)
    assert mean == 1.0
    assert hw == pytest.approx(1.959964 * math.sqrt(2) / math.sqrt(2), abs=1e-4)


def test_ci_scales_with_data():
    rng = np.random.default_rng(0)
    x = rng.normal(size=40)
    m1, h1 = batch_mean_ci(x)
    m2, h2 = batch_mean_ci(5 * x + 7)
    assert m2 == pytest.approx(5 * m1 + 7) and h2 == pytest.approx(5 * h1)
    assert batch_mean_ci(x, 0.99)[1] > h1 > batch_mean_ci(x, 0.8)[1]


def test_ci_errors():
    with pytest.raises(StatisticsError):
        batch_mean_ci([1.0])
    with pytest.raises(StatisticsError):
        batch_mean_ci([1.0, 2.0], 1.0)


def test_seed_derivation_is_stable_and_separated():
    assert derive_seed(0, 1, 2) == derive_seed(0, 1, 2)
    assert len({derive_seed(0, 1, r) for r in range(100)}) == 100
    assert derive_seed(0, 1, 2) != derive_seed(0, 2, 1)


def test_spread_family():
    assert spread_harvest(0) == (100.0, 190.0)
    assert spread_harvest(9) == (10.0, 190.0)
    spreads = [b - a for a, b in map(spread_harvest, range(10))]
    assert all(x < y for x, y in zip(spreads, spreads[1:]))


def test_plan_costs_orders_configs():
    s = generate_scenario(GenerationParams(), 1)
    costs, traces = plan_costs(s, 1)
    assert set(costs) == set(CONFIGS)
    assert costs[RES_CONN] <= costs[RES_NO_CONN] + 1e-6
    assert all(t.within_bounds for t in traces)


def _parse(text: str):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(lines))))


@pytest.fixture(scope="module")
def small_lifecycle():
    return run_lifecycle_sweep(SweepSpec("lifecycle", runs=3, seed=5))


def test_lifecycle_csv_complete(small_lifecycle):
    rows = _parse(small_lifecycle.to_csv())
    assert tuple(rows[0].keys()) == CSV_COLUMNS
    assert len(rows) == len(LIFECYCLE_YEARS) * 3
    keys = {(float(r["sweep_x"]), r["config"]) for r in rows}
    assert keys == {(float(t), c) for t in LIFECYCLE_YEARS for c in CONFIGS}
    for r in rows:
        assert int(r["n_runs"]) + int(r["n_infeasible"]) == 3
        assert float(r["mean_cost_eur"]) > 0 and float(r["ci_half_width_eur"]) >= 0
    assert small_lifecycle.to_csv().startswith("# ")


def test_lifecycle_no_res_grows_with_horizon(small_lifecycle):
    costs = [small_lifecycle.row(float(t), NO_RES, 12).mean_cost for t in LIFECYCLE_YEARS]
    assert all(x < y for x, y in zip(costs, costs[1:]))


def test_sweep_deterministic_and_parallel_safe(small_lifecycle):
    again = run_lifecycle_sweep(SweepSpec("lifecycle", runs=3, seed=5))
    assert again.to_csv() == small_lifecycle.to_csv()
    parallel = run_lifecycle_sweep(SweepSpec("lifecycle", runs=3, seed=5, workers=3))
    assert parallel.to_csv() == small_lifecycle.to_csv()


def test_seed_changes_results(small_lifecycle):
    other = run_lifecycle_sweep(SweepSpec("lifecycle", runs=3, seed=6))
    assert other.to_csv() != small_lifecycle.to_csv()


def test_spread_sweep_rows():
    res = run_spread_sweep(SweepSpec("spread", runs=2, seed=1), steps=(0, 9))
    rows = _parse(res.to_csv())
    assert {(r["sweep_x"], r["config"], r["b_cap"]) for r in rows} == {
        (x, c, b) for x in ("90.0", "180.0") for c in (RES_NO_CONN, RES_CONN) for b in ("6", "12")
    }
    assert all(t.within_bounds for t in res.traces)


def test_sweep_settings_validation():
    with pytest.raises(ValueError):
        SweepSpec("lifecycle", runs=0)
    with pytest.raises(ValueError):
        SweepSpec("lifecycle", confidence=1.5)


def test_oracle_compare_small():
    report = run_oracle_compare(instances=3, seed=2)
    assert len(report.rows) == 3
    for r in report.compared:
        assert r.heuristic_cost >= r.exact_cost * (1 - 1e-9)
    text = report.to_csv()
    assert "N=4, M=6, B=3" in text and "# compared=" in text
