from dataclasses import replace

import pytest

from core.costs import validate_solution
from core.errors import InfeasiblePlanError, OracleLimitError
from core.model import CoordinationTriple, Graph, ProblemInstance
from solvers.oracle import OracleLimits, coordination_sets, oracle_solve
from tests.conftest import exhaustive_limits, make_tiny_instance


def test_t1_optimum(t1, t1_optimal):
    sol, cost = oracle_solve(t1)
    assert cost == 3
    assert sol == t1_optimal


def test_refuses_large_instances():
    graph = Graph.build(7, edges=[(i, i + 1, 1) for i in range(6)])
    inst = ProblemInstance(graph=graph, starts=(0,), goals=(6,), supporter_cost=1)
    with pytest.raises(OracleLimitError):
        oracle_solve(inst)


def test_refuses_large_teams(t1):
    graph = Graph.build(4, edges=[(0, 1, 1), (1, 2, 1), (2, 3, 1)])
    inst = ProblemInstance(graph=graph, starts=(0, 1, 2, 3), goals=(3, 2, 1, 0), supporter_cost=1)
    with pytest.raises(OracleLimitError):
        oracle_solve(inst)


def test_infeasible_within_step_bound(t1):
    with pytest.raises(InfeasiblePlanError):
        oracle_solve(t1, OracleLimits(max_steps=1))


def test_starts_at_goals(t1):
    sol, cost = oracle_solve(t1.with_starts(t1.goals))
    assert cost == 0
    assert sol.makespan == 0


def test_step_bound_defaults(t1):
    assert OracleLimits().steps_for(t1) == 8
    assert OracleLimits().steps_for(replace(t1, horizon=3)) == 3
    assert OracleLimits(max_steps=5).steps_for(t1) == 5


def test_cost_never_rises_with_more_steps():
    for seed in range(10):
        inst = make_tiny_instance(seed, max_robots=2)
        previous = None
        for steps in range(1, 7):
            try:
                _, cost = oracle_solve(inst, OracleLimits(max_steps=steps))
            except InfeasiblePlanError:
                assert previous is None
                continue
            if previous is not None:
                assert cost <= previous
            previous = cost


def test_coordination_sets_t1(t1):
    sets = list(coordination_sets(t1, (1, 3), (2, 3)))
    assert frozenset() in sets
    assert frozenset({CoordinationTriple(0, 1, (1, 2))}) in sets
    assert len(sets) == 2
    assert list(coordination_sets(t1, (1, 0), (2, 0))) == [frozenset()]


def test_plans_validate():
    for seed in range(10):
        inst = make_tiny_instance(seed)
        sol, cost = oracle_solve(inst, exhaustive_limits(inst))
        check = validate_solution(inst, sol)
        assert check.ok
        assert check.cost == cost


def test_no_risky_edges_sum_of_shortest_paths():
    graph = Graph.build(4, edges=[(0, 1, 2), (1, 2, 3), (2, 3, 1), (0, 3, 7)])
    inst = ProblemInstance(graph=graph, starts=(0, 3), goals=(2, 1), supporter_cost=1)
    _, cost = oracle_solve(inst)
    assert cost == 5 + 4
