import itertools

import pytest

from bench.generator import GeneratorConfig, generate_instance
from core.costs import validate_solution
from core.errors import ResourceLimitError
from core.model import ZERO
from core.routing import CostView, all_goal_distances, naive_solve
from solvers.jsg import min_transition_cost, solve_ucs
from solvers.oracle import oracle_solve
from solvers.rhoc import (
    DutyState, PairingRule, RhocConfig, plan_pair_window, plan_solo_window, solve_rhoc,
)
from tests.conftest import make_tiny_instance


@pytest.mark.parametrize("k", [1, 2])
def test_t1_reaches_optimum(t1, k):
    sol, stats = solve_rhoc(t1, RhocConfig(horizon=k))
    assert sol.total_cost == 3
    assert sol.paths == ((0, 1, 2), (3, 3, 3))
    assert stats.overrides == 0
    assert validate_solution(t1, sol).ok


def test_nearest_support_rule(t1):
    sol, _ = solve_rhoc(t1, RhocConfig(horizon=1, pairing_rule="nearest_support"))
    assert sol.total_cost == 3


def test_solo_window_is_overridden_to_progress(t1):
    window = plan_solo_window(t1, 0, 1, horizon=1)
    assert window.override
    assert window.states == [(1,), (2,)]
    assert window.cost == 10


def test_solo_window_on_a_line(line_graph):
    window = plan_solo_window(line_graph, 0, 0, horizon=1)
    assert window.states == [(0,), (1,)]
    assert window.cost == 1
    assert not window.override


def test_pair_window_uses_support(t1):
    window = plan_pair_window(t1, (0, 1), (1, 3), horizon=2)
    assert window.states == [(1, 3), (2, 3)]
    assert window.cost == 2
    assert len(window.coordination[0]) == 1


def test_window_at_goal_is_empty(t1):
    window = plan_pair_window(t1, (0, 1), (2, 3), horizon=2)
    assert window.states == [(2, 3)]
    assert window.cost == 0


def test_config_rejects_zero_horizon():
    with pytest.raises(ValueError):
        RhocConfig(horizon=0)
    with pytest.raises(ValueError):
        RhocConfig(pairing_rule="closest")


def test_round_cap(t1):
    with pytest.raises(ResourceLimitError) as excinfo:
        solve_rhoc(t1, RhocConfig(horizon=1, step_cap=1))
    assert excinfo.value.diagnostics["on_duty"] == [0, 1]


def test_everyone_starts_on_duty(t1):
    duty = DutyState.initial(t1.with_starts(t1.goals))
    assert duty.on_duty == [0, 1]


def test_starts_at_goals(t1):
    sol, stats = solve_rhoc(t1.with_starts(t1.goals))
    assert sol.total_cost == 0
    assert stats.rounds == 1


def test_never_below_optimum():
    for seed in range(20):
        inst = make_tiny_instance(seed)
        optimum, _ = solve_ucs(inst)
        for rule in PairingRule:
            sol, _ = solve_rhoc(inst, RhocConfig(horizon=2, pairing_rule=rule))
            assert sol.total_cost >= optimum.total_cost
            assert validate_solution(inst, sol).ok


def test_pair_window_from_start(t1):
    window = plan_pair_window(t1, (0, 1), (0, 3), horizon=2)
    assert window.states == [(0, 3), (1, 3), (2, 3)]
    assert window.cost == 3


def test_one_step_window_crosses_supported(t1):
    window = plan_pair_window(t1, (0, 1), (1, 3), horizon=1)
    assert window.states == [(1, 3), (2, 3)]
    assert window.cost == 2


def _pair_sums(inst, pair):
    optimistic = all_goal_distances(inst)
    pessimistic = all_goal_distances(inst, CostView.pessimistic())

    def h(state):
        return sum(optimistic[n][v] for n, v in zip(pair, state))

    def p(state):
        return sum(pessimistic[n][v] for n, v in zip(pair, state))

    return h, p


def _segments(sub, start, horizon):
    """Every joint segment of 1 to K steps as (states, cost)"""
    options = [(v,) + sub.graph.neighbors(v) for v in range(sub.graph.node_count)]
    layer = [((start,), ZERO)]
    for _ in range(horizon):
        grown = []
        for states, g in layer:
            here = states[-1]
            for target in itertools.product(*(options[v] for v in here)):
                if target == here:
                    continue
                cost, _ = min_transition_cost(sub, here, target)
                grown.append((states + (target,), g + cost))
        yield from grown
        layer = grown


def _two_robot_seeds(seeds):
    return [s for s in seeds if make_tiny_instance(s, max_robots=2).robot_count == 2]


def _check_full_horizon(seed):
    inst = make_tiny_instance(seed, max_robots=2)
    sol, _ = solve_rhoc(inst, RhocConfig(horizon=inst.graph.node_count))
    _, optimum = oracle_solve(inst)
    assert sol.total_cost == optimum
    assert validate_solution(inst, sol).ok


@pytest.mark.parametrize("seed", _two_robot_seeds(range(60)))
def test_full_horizon_matches_oracle_for_pairs(seed):
    _check_full_horizon(seed)


@pytest.mark.slow
@pytest.mark.parametrize("seed", _two_robot_seeds(range(60, 200)))
def test_full_horizon_matches_oracle_for_pairs_full(seed):
    _check_full_horizon(seed)


def test_never_above_naive_on_tiny_instances():
    for seed in range(200):
        inst = make_tiny_instance(seed)
        naive = naive_solve(inst).total_cost
        for k in (1, 2, 3, 4):
            sol, _ = solve_rhoc(inst, RhocConfig(horizon=k))
            assert sol.total_cost <= naive, (seed, k)


def test_never_above_naive_on_generated_instances():
    for seed in range(30):
        for tier in ("sparse", "moderate", "dense"):
            inst = generate_instance(GeneratorConfig(node_count=10, connectivity_tier=tier,
                                                     robot_count=4, seed=seed))
            sol, _ = solve_rhoc(inst, RhocConfig(horizon=2))
            assert sol.total_cost <= naive_solve(inst).total_cost, (seed, tier)
            assert validate_solution(inst, sol).ok


def test_lone_robot_waits_instead_of_wandering(line_graph):
    sol, stats = solve_rhoc(line_graph, RhocConfig(horizon=4))
    assert sol.paths == ((0, 1, 2),)
    assert sol.total_cost == 2
    assert stats.rounds == 1


def test_committed_windows_make_progress():
    for seed in range(10):
        inst = make_tiny_instance(seed)
        if inst.robot_count < 2:
            continue
        pair = (0, 1)
        h, p = _pair_sums(inst, pair)
        for locations in itertools.product(range(inst.graph.node_count), repeat=2):
            if locations == inst.goals[:2]:
                continue
            for k in (1, 2, 3):
                window = plan_pair_window(inst, pair, locations, horizon=k)
                end = window.states[-1]
                assert window.cost + p(end) <= p(locations)
                reached = end == inst.goals[:2]
                assert reached or h(end) < h(locations) or (window.override and p(end) < p(locations))


@pytest.mark.parametrize("k", [1, 2])
def test_window_is_best_segment_by_enumeration(k):
    checked = 0
    for seed in range(15):
        inst = make_tiny_instance(seed)
        if inst.robot_count < 2:
            continue
        pair = (0, 1)
        locations = inst.starts[:2]
        sub = inst.sub_team(pair, starts=locations)
        h, p = _pair_sums(inst, pair)
        window = plan_pair_window(inst, pair, locations, horizon=k)

        allowed = [(g, states[-1]) for states, g in _segments(sub, locations, k)
                   if g + p(states[-1]) <= p(locations)]
        goal_costs = [g for g, end in allowed if sub.is_goal(end)]
        if goal_costs:
            assert sub.is_goal(window.states[-1])
            assert window.cost == min(goal_costs)
        elif not window.override:
            best = min(g + h(end) for g, end in allowed if h(end) < h(locations))
            assert window.cost + h(window.states[-1]) == best
        checked += 1
    assert checked > 0
