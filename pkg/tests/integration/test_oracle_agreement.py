"""
Cross-checks of every solver against the brute-force optimum on tiny instances
"""
import pytest

from core.costs import validate_solution
from core.routing import all_goal_distances, heuristic, naive_solve
from solvers.ces import solve_ces
from solvers.jsg import solve_astar, solve_ucs
from solvers.oracle import oracle_solve
from solvers.rhoc import RhocConfig, solve_rhoc
from tests.conftest import exhaustive_limits, make_tiny_instance


def _check(seed: int) -> None:
    inst = make_tiny_instance(seed)
    oracle, optimum = oracle_solve(inst, exhaustive_limits(inst))
    ucs, ucs_stats = solve_ucs(inst)
    astar, astar_stats = solve_astar(inst)

    assert ucs.total_cost == optimum
    assert astar.total_cost == optimum
    assert astar_stats.states_expanded <= ucs_stats.states_expanded
    for sol in (oracle, ucs, astar):
        assert validate_solution(inst, sol).ok

    # admissible: the heuristic never overestimates from any start
    distances = all_goal_distances(inst)
    for t in range(ucs.makespan + 1):
        state = ucs.state_at(t)
        remaining, _ = solve_ucs(inst.with_starts(state))
        assert heuristic(inst, state, distances) <= remaining.total_cost

    ces, _ = solve_ces(inst)
    assert validate_solution(inst, ces).ok
    assert optimum <= ces.total_cost <= naive_solve(inst).total_cost
    uses = {}
    for event in oracle.events:
        key = (event.triple().edge, event.support_node)
        uses[key] = uses.get(key, 0) + 1
    if all(count == 1 for count in uses.values()):
        assert ces.total_cost == optimum

    for k in (1, 2, 3):
        rhoc, _ = solve_rhoc(inst, RhocConfig(horizon=k))
        assert validate_solution(inst, rhoc).ok
        assert optimum <= rhoc.total_cost <= naive_solve(inst).total_cost


@pytest.mark.parametrize("seed", range(30))
def test_agreement(seed):
    _check(seed)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(30, 200))
def test_agreement_full(seed):
    _check(seed)
