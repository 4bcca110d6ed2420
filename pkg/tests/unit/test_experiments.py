import math

import pytest

from bench.experiments import ces_scaling, power_law_exponent, rhoc_horizon_sweep


def test_power_law_exponent():
    xs = [1, 2, 4, 8, 16]
    assert power_law_exponent(xs, [x ** 2 for x in xs]) == pytest.approx(2.0)
    assert power_law_exponent(xs, [3.0] * 5) == pytest.approx(0.0, abs=1e-9)


def test_ces_scaling_small():
    result = ces_scaling(node_count=6, team_sizes=(2, 3), pair_counts=(1, 2), fixed_pairs=1, fixed_team=2,
                         seeds=(0,), timeout=30)
    assert [r["robots"] for r in result.team_rows] == [2, 3]
    assert [r["support_pairs"] for r in result.pair_rows] == [1, 2]
    assert result.team_exponent is not None
    assert result.pair_growth > 0
    assert {row["sweep"] for row in result.rows()} == {"robots", "support_pairs"}


def test_horizon_sweep_small():
    result = rhoc_horizon_sweep(node_counts=(6,), team_sizes=(2,), horizons=(1, 3), seeds=(0, 1), timeout=30)
    assert [r["k"] for r in result.rows] == [1, 3]
    for row in result.csv_rows():
        assert set(row) == {"k", "mean_runtime_s", "mean_cost", "completed"}
    completed = [r for r in result.rows if r["completed"]]
    assert all(not math.isnan(r["mean_cost"]) for r in completed)
