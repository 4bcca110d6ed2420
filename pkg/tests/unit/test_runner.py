from fractions import Fraction

import pytest
from pydantic import ValidationError

from bench.metrics import BenchMetrics
from bench.runner import CSV_FIELDS, SuiteConfig, build_cases, run_bench, run_cell
from core.model import InstanceDescriptor
from solvers.registry import SolveOptions


@pytest.fixture
def t1_case(t1):
    return t1, InstanceDescriptor.from_instance(t1, "sparse", 0)


def test_exact_and_naive_ratios(t1_case):
    metrics = BenchMetrics()
    records = run_bench([t1_case], ["naive", "jsg-ucs", "ces"], per_run_timeout=10, metrics=metrics)
    by_algo = {r.algorithm: r for r in records}

    assert by_algo["jsg-ucs"].true_optimality == 1
    assert by_algo["jsg-ucs"].naive_optimality == Fraction(11, 3)
    assert by_algo["naive"].naive_optimality == 1
    assert by_algo["naive"].true_optimality == Fraction(3, 11)
    assert by_algo["ces"].cost == 3
    assert metrics.cell_count("jsg-ucs", "ok") == 1


def test_tiny_timeout_becomes_a_record(t1_case):
    inst, descriptor = t1_case
    record = run_cell(inst, descriptor, SolveOptions(algo="jsg-ucs", timeout=1e-9))
    assert record.timeout
    assert record.status == "timeout"
    assert record.cost is None
    assert record.to_row()["cost"] == ""
    assert record.to_row()["timeout"] == "1"


def test_no_optimum_without_exact_algorithm(t1_case):
    records = run_bench([t1_case], ["naive", "rhoc-astar"], per_run_timeout=10)
    assert all(r.true_optimality is None for r in records)
    assert all(r.completed for r in records)


def test_row_has_every_column(t1_case):
    record = run_bench([t1_case], ["jsg-astar"], per_run_timeout=10)[0]
    row = record.to_row()
    assert tuple(row) == CSV_FIELDS
    assert row["cost"] == "3"
    assert row["true_opt"] == "1"
    assert row["robots"] == "2"


def test_oracle_limit_becomes_an_error_record():
    from bench.generator import GeneratorConfig, generate_instance

    inst = generate_instance(GeneratorConfig(node_count=10, seed=1, robot_count=2))
    descriptor = InstanceDescriptor.from_instance(inst, "sparse", 1)
    record = run_cell(inst, descriptor, SolveOptions(algo="oracle"))
    assert record.status == "error"
    assert not record.completed


def test_empty_algorithm_list(t1_case):
    with pytest.raises(ValueError):
        run_bench([t1_case], [])


def test_suite_config_validation():
    with pytest.raises(ValidationError):
        SuiteConfig(algorithms=[])
    with pytest.raises(ValidationError):
        SuiteConfig(algorithms=["dijkstra"])


def test_build_cases_shares_graphs():
    cfg = SuiteConfig(node_counts=[10], tiers=["sparse"], graphs_per_tier=2, team_sizes=[2, 3])
    cases = build_cases(cfg)
    assert len(cases) == 4
    assert cases[0][0].graph == cases[1][0].graph
    assert [d.robot_count for _, d in cases] == [2, 3, 2, 3]
