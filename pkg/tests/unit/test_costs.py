import random
from dataclasses import replace
from fractions import Fraction

import pytest

from core.costs import (
    Accounting, check_transition, coordination_savings, transition_cost, validate_solution,
)
from core.errors import InvalidTransitionError
from core.model import CoordinationEvent, CoordinationTriple, JointTransition, Solution
from solvers.oracle import coordination_sets
from tests.conftest import make_tiny_instance


def test_supported_crossing_costs_supported_cost(t1):
    tr = JointTransition((1, 3), (2, 3), {CoordinationTriple(0, 1, (1, 2))})
    assert transition_cost(t1, tr) == 2


def test_unsupported_crossing_pays_base_cost(t1):
    tr = JointTransition((1, 0), (2, 0))
    assert transition_cost(t1, tr) == 10


def test_ordinary_edge(t1):
    assert transition_cost(t1, JointTransition((0, 3), (1, 3))) == 1


def test_original_accounting_splits_the_cost(t1):
    tr = JointTransition((1, 3), (2, 3), {CoordinationTriple(0, 1, (1, 2))})
    assert transition_cost(t1, tr, Accounting.ORIGINAL) == 2


@pytest.mark.parametrize("tr, fragment", [
    (JointTransition((1, 0), (2, 0), {CoordinationTriple(0, 1, (1, 2))}), "not on a support node"),
    (JointTransition((1, 3), (2, 0), {CoordinationTriple(0, 1, (1, 2))}), "moves"),
    (JointTransition((1, 3), (2, 3), {CoordinationTriple(0, 0, (1, 2))}), "support itself"),
    (JointTransition((0, 3), (1, 3), {CoordinationTriple(0, 1, (0, 1))}), "not risky"),
    (JointTransition((0, 3), (2, 3)), "not an edge"),
    (JointTransition((0, 3), (0, 3)), "no-stagnation"),
])
def test_invalid_transitions_are_rejected(t1, tr, fragment):
    with pytest.raises(InvalidTransitionError) as excinfo:
        transition_cost(t1, tr)
    assert any(fragment in v for v in excinfo.value.violations)


def test_robot_in_two_triples_is_rejected(repeat_support):
    tr = JointTransition((0, 0, 2), (1, 1, 2), {
        CoordinationTriple(0, 2, (0, 1)),
        CoordinationTriple(1, 2, (0, 1)),
    })
    assert any("more than one" in v for v in check_transition(repeat_support, tr))


def test_all_stay_allowed_at_joint_goal(t1):
    assert check_transition(t1, JointTransition((2, 3), (2, 3))) == []
    assert transition_cost(t1, JointTransition((2, 3), (2, 3))) == 0


def _random_transitions(inst, rng, count):
    for _ in range(count):
        source = tuple(rng.randrange(inst.graph.node_count) for _ in range(inst.robot_count))
        target = tuple(rng.choice((v,) + inst.graph.neighbors(v)) for v in source)
        if source == target and not inst.is_goal(source):
            continue
        for triples in coordination_sets(inst, source, target):
            yield JointTransition(source, target, triples)


def test_reassignment_is_cost_neutral():
    rng = random.Random(3)
    checked = 0
    for seed in range(20):
        inst = make_tiny_instance(seed)
        for tr in _random_transitions(inst, rng, 10):
            assert transition_cost(inst, tr) == transition_cost(inst, tr, Accounting.ORIGINAL)
            checked += 1
    assert checked > 0


def test_cost_is_zero_iff_everyone_stays_or_supports():
    rng = random.Random(5)
    for seed in range(20):
        inst = make_tiny_instance(seed)
        for tr in _random_transitions(inst, rng, 10):
            # generated edge costs are all positive
            cost = transition_cost(inst, tr)
            if tr.movers():
                assert cost > 0
            else:
                assert cost == 0


def test_raising_an_edge_cost_never_lowers_unsupported_moves(t1):
    tr = JointTransition((0, 3), (1, 0))
    before = transition_cost(t1, tr)
    dearer = t1.with_graph(t1.graph.with_base_cost(0, 1, 5))
    assert transition_cost(dearer, tr) >= before


def test_validate_optimal_t1_plan(t1, t1_optimal):
    check = validate_solution(t1, t1_optimal)
    assert check.ok
    assert check.cost == 3


def test_all_stay_before_goals_is_a_violation(t1):
    stalled = Solution(
        paths=((0, 0, 1, 2), (3, 3, 3, 3)),
        events=(CoordinationEvent(2, 0, 1, (1, 2), 3),),
        per_robot_cost=(3, 0),
        total_cost=3,
    )
    check = validate_solution(t1, stalled)
    assert not check.ok
    assert any("step 0" in v and "no-stagnation" in v for v in check.violations)


def test_cost_mismatch_is_reported(t1, t1_optimal):
    wrong = replace(t1_optimal, total_cost=Fraction(2))
    check = validate_solution(t1, wrong)
    assert check.cost == 3
    assert any("cost mismatch" in v for v in check.violations)


def test_event_must_match_paths(t1, t1_optimal):
    moved = replace(t1_optimal, events=(CoordinationEvent(0, 0, 1, (1, 2), 3),))
    assert not validate_solution(t1, moved).ok


def test_repeated_event_is_a_violation(t1, t1_optimal):
    doubled = replace(t1_optimal, events=t1_optimal.events * 2)
    check = validate_solution(t1, doubled)
    assert check.cost is None
    assert any("events[1]: duplicate event" in v for v in check.violations)


def test_wrong_endpoints(t1, t1_optimal):
    check = validate_solution(replace(t1, goals=(1, 3)), t1_optimal)
    assert any("ends at" in v for v in check.violations)


def test_savings_split_matches_total(t1, t1_optimal):
    savings = coordination_savings(t1, t1_optimal)
    assert savings.pessimistic_cost == 11
    assert savings.reduction == 8
    assert savings.total == t1_optimal.total_cost
