"""
Receding-horizon optimistic cooperative A*
Robots on duty are paired each round; every pair plans a K-step joint
window with the optimistic goal distance beyond the horizon and commits it
"""
from __future__ import annotations
from dataclasses import dataclass, asdict
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, FrozenSet, List, Optional, Sequence, Tuple
import heapq
import logging

import networkx as nx

from config import settings
from core.budget import SearchBudget
from core.costs import robot_step_costs, solution_from_states
from core.errors import ResourceLimitError
from core.model import ZERO, CoordinationTriple, JointState, ProblemInstance, Solution
from core.routing import CostView, all_goal_distances, naive_solve, pad_paths, shortest_path
from solvers.jsg import expand, min_transition_cost

logger = logging.getLogger(__name__)


class PairingRule(str, Enum):
    INDEX_ORDER = "index_order"
    NEAREST_SUPPORT = "nearest_support"


@dataclass
class RhocConfig:
    """Receding-horizon settings"""
    horizon: int = settings.RHOC_HORIZON
    pairing_rule: PairingRule = PairingRule.INDEX_ORDER
    step_cap: Optional[int] = None  # rounds; default factor * |V|

    def __post_init__(self):
        self.pairing_rule = PairingRule(self.pairing_rule)
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if self.step_cap is not None and self.step_cap < 1:
            raise ValueError("step_cap must be positive")

    def cap_for(self, inst: ProblemInstance) -> int:
        if self.step_cap is not None:
            return self.step_cap
        return settings.RHOC_STEP_CAP_FACTOR * inst.graph.node_count


@dataclass
class DutyState:
    """Where every robot is and who still plans"""
    locations: List[int]
    at_goal: List[bool]
    costs: List[Fraction]

    @classmethod
    def initial(cls, inst: ProblemInstance) -> DutyState:
        n = inst.robot_count
        return cls(list(inst.starts), [False] * n, [ZERO] * n)

    @property
    def on_duty(self) -> List[int]:
        return [n for n, done in enumerate(self.at_goal) if not done]


@dataclass
class RhocStats:
    windows: int = 0
    overrides: int = 0
    rounds: int = 0
    nodes: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class WindowResult:
    """Committed segment of one window"""
    states: List[JointState]
    coordination: List[FrozenSet[CoordinationTriple]]
    cost: Fraction
    override: bool = False


def _goal_hops(inst: ProblemInstance) -> List[Dict[int, int]]:
    """Per robot, fewest edges from every node to that robot's goal"""

    def compute() -> List[Dict[int, int]]:
        graph = inst.graph.to_networkx()
        by_goal = {g: nx.single_source_shortest_path_length(graph, g) for g in set(inst.goals)}
        return [by_goal[g] for g in inst.goals]

    return inst.cached(("goal_hops",), compute)


def _pessimistic_prefix(inst: ProblemInstance, sub: ProblemInstance, robots: Sequence[int],
                        locations: Sequence[int], horizon: int) -> WindowResult:
    """First K steps of every robot's unsupported shortest path"""
    view = CostView.pessimistic()
    paths = [shortest_path(inst.graph, v, inst.goals[n], view).path[:horizon + 1]
             for n, v in zip(robots, locations)]
    padded = pad_paths(paths)
    states = [tuple(p[t] for p in padded) for t in range(len(padded[0]))]

    coordination, cost = [], ZERO
    for source, target in zip(states, states[1:]):
        step, triples = min_transition_cost(sub, source, target)
        cost += step
        coordination.append(triples)
    return WindowResult(states, coordination, cost, override=True)


def _window(inst: ProblemInstance, robots: Sequence[int], locations: Sequence[int], horizon: int,
            distances: List[Dict[int, Fraction]], budget: Optional[SearchBudget],
            stats: Optional[RhocStats]) -> WindowResult:
    """
    A* over (joint state, depth) of a sub-team, depth at most K

    A segment may end at any depth. The cheapest segment reaching the
    sub-team goal wins when one fits in the window; otherwise the segment
    with least g + h among those lowering the summed goal distance. Every
    committed segment keeps g + P(end) <= P(start), P being the summed
    unsupported goal distance, so the plan never costs more than the
    no-coordination baseline. When no segment qualifies the window walks
    the first K steps of the unsupported shortest paths.
    """
    sub = inst.sub_team(robots, starts=locations)
    start = tuple(locations)
    pessimistic = all_goal_distances(inst, CostView.pessimistic())
    hops = _goal_hops(inst)

    def h(state: JointState) -> Fraction:
        return sum((distances[n][v] for n, v in zip(robots, state)), ZERO)

    def p(state: JointState) -> Fraction:
        return sum((pessimistic[n][v] for n, v in zip(robots, state)), ZERO)

    if sub.is_goal(start):
        return WindowResult([start], [], ZERO)

    h_start, p_start = h(start), p(start)
    goal_in_reach = all(hops[n][v] <= horizon for n, v in zip(robots, start))
    frontier = [(h_start, h_start, start, 0, ZERO)]
    best_g: Dict[Tuple[JointState, int], Fraction] = {(start, 0): ZERO}
    parent: Dict[Tuple[JointState, int], Tuple[Tuple[JointState, int], FrozenSet]] = {}
    closed = set()
    stagnant: Optional[bool] = None
    candidate = None

    def trace(node: Tuple[JointState, int]) -> WindowResult:
        states, steps = [node[0]], []
        cost = best_g[node]
        while node in parent:
            node, triples = parent[node]
            states.append(node[0])
            steps.append(triples)
        states.reverse()
        steps.reverse()
        return WindowResult(states, steps, cost, override=bool(stagnant))

    while frontier:
        _, h_value, state, depth, g = heapq.heappop(frontier)
        node = (state, depth)
        if node in closed or g > best_g[node]:
            continue
        closed.add(node)
        if budget is not None:
            budget.charge()
        if stats is not None:
            stats.nodes += 1

        at_goal = sub.is_goal(state)
        if depth > 0:
            progress = at_goal or h_value < h_start
            if stagnant is None:
                # the least g + h segment decides whether this window stagnates
                stagnant = not progress
            if progress and g + p(state) <= p_start:
                if at_goal:
                    return trace(node)
                if candidate is None:
                    candidate = node
                if not goal_in_reach:
                    return trace(candidate)

        if at_goal or depth == horizon:
            continue
        for tr in expand(sub, state):
            child = (tr.target, depth + 1)
            cost = g + tr.cost
            if child in best_g and cost >= best_g[child]:
                continue
            best_g[child] = cost
            parent[child] = (node, tr.coordination)
            h_child = h(tr.target)
            heapq.heappush(frontier, (cost + h_child, h_child, tr.target, depth + 1, cost))

    if candidate is not None:
        return trace(candidate)
    return _pessimistic_prefix(inst, sub, robots, locations, horizon)


def plan_pair_window(inst: ProblemInstance, pair: Tuple[int, int], locations: Tuple[int, int],
                     horizon: int, distances: Optional[List[Dict[int, Fraction]]] = None,
                     budget: Optional[SearchBudget] = None,
                     stats: Optional[RhocStats] = None) -> WindowResult:
    """
    Best K-step joint segment for two robots

    Args:
        inst: Full problem instance
        pair: Robot indices
        locations: Current nodes of the two robots
        horizon: Window length K
        distances: Optimistic goal distances per robot (computed if omitted)

    Returns:
        WindowResult with the segment's joint states, coordination and cost
    """
    distances = distances or all_goal_distances(inst)
    return _window(inst, pair, locations, horizon, distances, budget, stats)


def plan_solo_window(inst: ProblemInstance, robot: int, location: int, horizon: int,
                     distances: Optional[List[Dict[int, Fraction]]] = None,
                     budget: Optional[SearchBudget] = None,
                     stats: Optional[RhocStats] = None) -> WindowResult:
    """Best K-step segment for a robot without partner, pessimistic edge costs"""
    distances = distances or all_goal_distances(inst)
    return _window(inst, (robot,), (location,), horizon, distances, budget, stats)


def _index_pairs(robots: List[int], inst: ProblemInstance, duty: DutyState) -> List[Tuple[int, ...]]:
    return [tuple(robots[i:i + 2]) for i in range(0, len(robots), 2)]


def _support_score(inst: ProblemInstance, receiver_path: Sequence[int], supporter_path: Sequence[int]) -> int:
    nodes = set(supporter_path)
    score = 0
    for a, b in zip(receiver_path, receiver_path[1:]):
        info = inst.graph.risky_edge(a, b)
        if info is not None and info.support_nodes & nodes:
            score += 1
    return score


def _nearest_support_pairs(robots: List[int], inst: ProblemInstance, duty: DutyState) -> List[Tuple[int, ...]]:
    """Greedy disjoint pairing by shared supportable risky edges"""
    view = CostView.optimistic(inst)
    paths = {}
    for n in robots:
        result = shortest_path(inst.graph, duty.locations[n], inst.goals[n], view)
        paths[n] = result.path if result else (duty.locations[n],)

    scored = []
    for i, a in enumerate(robots):
        for b in robots[i + 1:]:
            score = _support_score(inst, paths[a], paths[b]) + _support_score(inst, paths[b], paths[a])
            scored.append((-score, a, b))
    scored.sort()

    groups, used = [], set()
    for _, a, b in scored:
        if a not in used and b not in used:
            groups.append((a, b))
            used.update((a, b))
    leftover = [n for n in robots if n not in used]
    groups.extend((n,) for n in leftover)
    return groups


PAIRING: Dict[PairingRule, Callable[[List[int], ProblemInstance, DutyState], List[Tuple[int, ...]]]] = {
    PairingRule.INDEX_ORDER: _index_pairs,
    PairingRule.NEAREST_SUPPORT: _nearest_support_pairs,
}


def solve_rhoc(inst: ProblemInstance, cfg: Optional[RhocConfig] = None,
               budget: Optional[SearchBudget] = None) -> Tuple[Solution, RhocStats]:
    """
    Plan by rounds of pairwise K-step windows

    Args:
        inst: Problem instance
        cfg: Horizon, pairing rule and round cap
        budget: Optional work meter charged per window node

    Returns:
        (Solution, RhocStats)

    Raises:
        ResourceLimitError: round cap exceeded before every robot is released
    """
    cfg = cfg or RhocConfig()
    distances = all_goal_distances(inst)
    duty = DutyState.initial(inst)
    stats = RhocStats()
    cap = cfg.cap_for(inst)

    timeline: List[JointState] = [tuple(duty.locations)]
    coordination: List[FrozenSet[CoordinationTriple]] = []

    logger.info(f"🔍 RHOC-A*: K={cfg.horizon}, {inst.robot_count} robots, rule {cfg.pairing_rule.value}")

    while duty.on_duty:
        if stats.rounds >= cap:
            logger.warning(f"RHOC-A*: round cap {cap} reached with robots {duty.on_duty} on duty")
            raise ResourceLimitError(
                f"rhoc-astar exceeded {cap} rounds",
                diagnostics={**stats.to_dict(), "on_duty": duty.on_duty, "locations": list(duty.locations)},
            )
        stats.rounds += 1

        groups = PAIRING[cfg.pairing_rule](duty.on_duty, inst, duty)
        segments = []
        for robots in groups:
            locations = tuple(duty.locations[n] for n in robots)
            stats.windows += 1
            window = _window(inst, robots, locations, cfg.horizon, distances, budget, stats)
            if window.override:
                stats.overrides += 1
                logger.warning(f"RHOC-A*: window for robots {robots} overridden to make progress")
            logger.debug(f"Round {stats.rounds}: robots {robots} commit {len(window.states) - 1} steps "
                         f"at cost {window.cost}")
            segments.append((robots, window))

        length = max(len(w.states) - 1 for _, w in segments)
        for t in range(length):
            source = list(timeline[-1])
            target = list(source)
            triples = set()
            for robots, window in segments:
                if t >= len(window.states) - 1:
                    continue
                for i, n in enumerate(robots):
                    target[n] = window.states[t + 1][i]
                for r, s, e in window.coordination[t]:
                    triples.add(CoordinationTriple(robots[r], robots[s], e))
            timeline.append(tuple(target))
            coordination.append(frozenset(triples))
            step = robot_step_costs(inst, tuple(source), tuple(target), triples)
            duty.costs = [a + b for a, b in zip(duty.costs, step)]

        for robots, window in segments:
            end = window.states[-1]
            for i, n in enumerate(robots):
                duty.locations[n] = end[i]
            if all(duty.locations[n] == inst.goals[n] for n in robots):
                for n in robots:
                    duty.at_goal[n] = True

    solution = solution_from_states(inst, timeline, coordination)
    assert list(solution.per_robot_cost) == duty.costs

    naive = naive_solve(inst)
    if naive.total_cost < solution.total_cost:
        logger.warning(f"RHOC-A*: plan cost {solution.total_cost} above naive {naive.total_cost}, using naive")
        solution = naive
    logger.info(f"✅ RHOC-A*: cost {solution.total_cost}, {stats.windows} windows, "
                f"{stats.overrides} overrides")
    return solution, stats


if __name__ == "__main__":
    from core.model import fixture_t1

    print("=== RHOC-A* Test ===\n")
    for k in (1, 2):
        sol, stats = solve_rhoc(fixture_t1(), RhocConfig(horizon=k))
        print(f"✓ K={k}: cost {sol.total_cost}, {stats.to_dict()}")
