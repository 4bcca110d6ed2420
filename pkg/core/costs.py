"""
Cost accounting and plan feasibility checks
Per-step team cost under reassigned (receiver pays ĉ) and original
(receiver pays c̃, supporter pays c′) accounting
"""
from __future__ import annotations
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence
import logging

from config import settings
from core.errors import InvalidTransitionError
from core.model import (
    ZERO, CoordinationEvent, CoordinationTriple, JointState, JointTransition,
    ProblemInstance, Solution, edge_key,
)

logger = logging.getLogger(__name__)


class Accounting(str, Enum):
    """Who pays for a coordination behavior"""
    REASSIGNED = "reassigned"  # receiver pays c̃ + c′, supporter pays 0
    ORIGINAL = "original"      # receiver pays c̃, supporter pays c′


@dataclass(frozen=True)
class SolutionCheck:
    """Result of validate_solution"""
    cost: Optional[Fraction]
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class CoordinationSavings:
    """Movement cost without coordination and the reduction coordination buys"""
    pessimistic_cost: Fraction
    reduction: Fraction

    @property
    def total(self) -> Fraction:
        return self.pessimistic_cost - self.reduction


def check_transition(inst: ProblemInstance, tr: JointTransition) -> List[str]:
    """
    List every movement or coordination rule a transition breaks

    Args:
        inst: Problem instance
        tr: Transition to check

    Returns:
        Violations (empty if the transition is legal)
    """
    violations: List[str] = []
    graph = inst.graph
    n_robots = inst.robot_count

    if len(tr.source) != n_robots or len(tr.target) != n_robots:
        return [f"state length must equal robot count {n_robots}"]

    for n, (a, b) in enumerate(zip(tr.source, tr.target)):
        if a != b and not graph.has_edge(a, b):
            violations.append(f"robot {n}: {a} -> {b} is not an edge")

    if tr.is_all_stay() and not inst.is_goal(tr.source):
        violations.append("no-stagnation: all robots stay before reaching goals")

    seen: Dict[int, CoordinationTriple] = {}
    for triple in sorted(tr.coordination):
        r, s, e = triple
        for robot in (r, s):
            if not 0 <= robot < n_robots:
                violations.append(f"coordination {triple}: robot {robot} out of range")
                continue
            if robot in seen:
                violations.append(f"robot {robot}: more than one coordination behavior")
            seen[robot] = triple
        if r == s:
            violations.append(f"coordination {triple}: robot cannot support itself")
            continue
        if not (0 <= r < n_robots and 0 <= s < n_robots):
            continue

        info = graph.risky_edge(*e)
        if info is None:
            violations.append(f"coordination {triple}: edge {e} is not risky")
            continue
        if edge_key(tr.source[r], tr.target[r]) != e or tr.source[r] == tr.target[r]:
            violations.append(f"coordination {triple}: receiver {r} does not cross {e}")
        if tr.source[s] != tr.target[s]:
            violations.append(f"coordination {triple}: supporter {s} moves")
        elif tr.source[s] not in info.support_nodes:
            violations.append(f"coordination {triple}: supporter {s} not on a support node")

    return violations


def robot_step_costs(inst: ProblemInstance, source: JointState, target: JointState,
                     coordination: Iterable[CoordinationTriple] = (),
                     accounting: Accounting = Accounting.REASSIGNED) -> List[Fraction]:
    """Per-robot cost of one step, no legality checks"""
    costs = [ZERO] * len(source)
    receivers = {}
    for r, s, e in coordination:
        receivers[r] = e
        if accounting is Accounting.ORIGINAL:
            costs[s] = inst.supporter_cost

    for n, (a, b) in enumerate(zip(source, target)):
        if a == b:
            continue
        if n in receivers:
            info = inst.graph.risky_edge(a, b)
            if accounting is Accounting.ORIGINAL:
                costs[n] = info.reduced_cost
            else:
                costs[n] = info.reduced_cost + inst.supporter_cost
        else:
            costs[n] = inst.graph.base_cost(a, b)
    return costs


def step_cost(inst: ProblemInstance, source: JointState, target: JointState,
              coordination: Iterable[CoordinationTriple] = ()) -> Fraction:
    """Team cost of one step under reassigned accounting, no legality checks"""
    return sum(robot_step_costs(inst, source, target, coordination), ZERO)


def transition_cost(inst: ProblemInstance, tr: JointTransition,
                    accounting: Accounting = Accounting.REASSIGNED) -> Fraction:
    """
    Team cost of a legal transition

    Raises:
        InvalidTransitionError: transition breaks a movement or coordination rule
    """
    violations = check_transition(inst, tr)
    if violations:
        raise InvalidTransitionError(violations)
    return sum(robot_step_costs(inst, tr.source, tr.target, tr.coordination, accounting), ZERO)


def per_robot_costs(inst: ProblemInstance, sol: Solution,
                    accounting: Accounting = Accounting.REASSIGNED) -> List[Fraction]:
    """Per-robot totals of a plan, no legality checks"""
    totals = [ZERO] * sol.robot_count
    for t in range(sol.makespan):
        step = robot_step_costs(inst, sol.state_at(t), sol.state_at(t + 1),
                                sol.coordination_at(t), accounting)
        totals = [a + b for a, b in zip(totals, step)]
    return totals


def solution_from_states(inst: ProblemInstance, states: Sequence[JointState],
                         coordination: Sequence[FrozenSet[CoordinationTriple]]) -> Solution:
    """
    Assemble a Solution from a joint-state sequence

    Args:
        inst: Problem instance
        states: Joint states, first is the start
        coordination: Triples used on each step (len(states) - 1 entries)

    Returns:
        Solution with events and reassigned per-robot costs
    """
    if len(coordination) != max(len(states) - 1, 0):
        raise ValueError("need one coordination set per step")

    paths = tuple(tuple(state[n] for state in states) for n in range(inst.robot_count))
    events = []
    totals = [ZERO] * inst.robot_count
    for t, triples in enumerate(coordination):
        source, target = states[t], states[t + 1]
        for r, s, _ in sorted(triples):
            events.append(CoordinationEvent(
                step=t, receiver=r, supporter=s,
                edge=(source[r], target[r]), support_node=source[s],
            ))
        step = robot_step_costs(inst, source, target, triples)
        totals = [a + b for a, b in zip(totals, step)]

    return Solution(paths=paths, events=tuple(events),
                    per_robot_cost=tuple(totals), total_cost=sum(totals, ZERO))


def validate_solution(inst: ProblemInstance, sol: Solution,
                      tolerance: float = settings.COST_TOLERANCE) -> SolutionCheck:
    """
    Rebuild every step of a plan, check it and recompute its cost

    Args:
        inst: Problem instance
        sol: Plan to check
        tolerance: Allowed gap between claimed and recomputed costs

    Returns:
        SolutionCheck with the recomputed total (None if the plan is malformed)
    """
    n_robots = inst.robot_count

    if len(sol.paths) != n_robots:
        return SolutionCheck(None, [f"paths: expected {n_robots} paths, got {len(sol.paths)}"])
    lengths = {len(p) for p in sol.paths}
    if len(lengths) != 1 or 0 in lengths:
        return SolutionCheck(None, ["paths: all paths must be nonempty and equally long"])

    violations: List[str] = []
    for n, path in enumerate(sol.paths):
        if any(not 0 <= v < inst.graph.node_count for v in path):
            return SolutionCheck(None, [f"paths[{n}]: node out of range"])
        if path[0] != inst.starts[n]:
            violations.append(f"paths[{n}]: starts at {path[0]}, expected {inst.starts[n]}")
        if path[-1] != inst.goals[n]:
            violations.append(f"paths[{n}]: ends at {path[-1]}, expected {inst.goals[n]}")

    listed = set()
    for i, event in enumerate(sol.events):
        where = f"events[{i}]"
        key = (event.step, event.receiver, event.supporter)
        if key in listed:
            violations.append(f"{where}: duplicate event for step {event.step}, "
                              f"receiver {event.receiver}, supporter {event.supporter}")
            continue
        listed.add(key)
        if not 0 <= event.step < sol.makespan:
            violations.append(f"{where}: step {event.step} outside plan")
            continue
        if not (0 <= event.receiver < n_robots and 0 <= event.supporter < n_robots):
            violations.append(f"{where}: robot out of range")
            continue
        crossed = (sol.paths[event.receiver][event.step], sol.paths[event.receiver][event.step + 1])
        if crossed != tuple(event.edge):
            violations.append(f"{where}: receiver path crosses {crossed}, not {tuple(event.edge)}")
        if sol.paths[event.supporter][event.step] != event.support_node:
            violations.append(f"{where}: supporter is not at support node {event.support_node}")

    for t in range(sol.makespan):
        tr = JointTransition(sol.state_at(t), sol.state_at(t + 1), sol.coordination_at(t))
        for problem in check_transition(inst, tr):
            violations.append(f"step {t}: {problem}")

    if violations:
        return SolutionCheck(None, violations)

    recomputed = per_robot_costs(inst, sol)
    total = sum(recomputed, ZERO)

    if sol.per_robot_cost:
        if len(sol.per_robot_cost) != n_robots:
            violations.append("per_robot_cost: length differs from robot count")
        else:
            for n, (claimed, actual) in enumerate(zip(sol.per_robot_cost, recomputed)):
                if abs(float(claimed - actual)) > tolerance:
                    violations.append(
                        f"per_robot_cost[{n}]: cost mismatch, claimed {claimed}, recomputed {actual}")
    if abs(float(sol.total_cost - total)) > tolerance:
        violations.append(f"total_cost: cost mismatch, claimed {sol.total_cost}, recomputed {total}")

    if violations:
        logger.debug(f"Solution rejected: {violations[0]}")
    return SolutionCheck(total, violations)


def coordination_savings(inst: ProblemInstance, sol: Solution) -> CoordinationSavings:
    """
    Split a plan's cost into unsupported movement cost and coordination reduction
    total = pessimistic_cost - reduction
    """
    pessimistic = ZERO
    for path in sol.paths:
        for a, b in zip(path, path[1:]):
            if a != b:
                pessimistic += inst.graph.base_cost(a, b)
    reduction = sum((inst.reduction(*e.edge) for e in sol.events), ZERO)
    return CoordinationSavings(pessimistic_cost=pessimistic, reduction=reduction)


if __name__ == "__main__":
    from core.model import fixture_t1

    print("=== Cost Accounting Test ===\n")
    inst = fixture_t1()
    supported = JointTransition((1, 3), (2, 3), {CoordinationTriple(0, 1, (1, 2))})
    print(f"✓ Supported crossing: {transition_cost(inst, supported)}")
    print(f"✓ Original accounting: {transition_cost(inst, supported, Accounting.ORIGINAL)}")
