"""
Coordination-exhaustive search
Enumerates support-pair subsets, their orders, crossing directions and
(receiver, supporter) assignments around individual shortest paths
"""
from __future__ import annotations
from dataclasses import dataclass, asdict
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union
import itertools
import logging
import math

from config import settings
from core.budget import SearchBudget
from core.costs import per_robot_costs
from core.model import ZERO, CoordinationEvent, ProblemInstance, Solution
from core.routing import CostView, PathResult, all_goal_distances, naive_solve, pad_paths, shortest_path

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SupportPair:
    """Risky edge together with one of its support nodes"""
    risky_edge: Tuple[int, int]
    support_node: int


@dataclass(frozen=True)
class RiskyCrossing:
    """Receiver item: cross a directed risky edge"""
    edge: Tuple[int, int]
    event: int


@dataclass(frozen=True)
class SupportPost:
    """Supporter item: hold a support node"""
    node: int
    event: int


Item = Union[RiskyCrossing, SupportPost]
IndividualCoordinationSet = Tuple[Tuple[Item, ...], ...]  # one waypoint list per robot


@dataclass
class EnumerationCounters:
    subsets_visited: int = 0
    permutations_visited: int = 0
    assignments_visited: int = 0
    cost_calculations: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def enumeration_bound(robot_count: int, pair_count: int) -> int:
    """(2N²)^m · m! cap on cost calculations for m support pairs"""
    return (2 * robot_count ** 2) ** pair_count * math.factorial(pair_count)


def build_coordination_set(inst: ProblemInstance) -> List[SupportPair]:
    """One undirected support pair per (risky edge, support node)"""
    return [
        SupportPair(edge, node)
        for edge, info in sorted(inst.graph.risky.items())
        for node in sorted(info.support_nodes)
    ]


def _segment(inst: ProblemInstance, src: int, dst: int) -> Optional[PathResult]:
    return inst.cached(("pessimistic_path", src, dst),
                       lambda: shortest_path(inst.graph, src, dst, CostView.pessimistic()))


def ics_cost(inst: ProblemInstance, ics: IndividualCoordinationSet,
             bound: Optional[Fraction] = None) -> Optional[Fraction]:
    """
    Team cost of an ICS, None if infeasible or not below bound

    Receivers pay the supported cost on their risky edge; supporters pay
    only the walk to their post.
    """
    total = ZERO
    for n, items in enumerate(ics):
        location = inst.starts[n]
        for item in items:
            if isinstance(item, RiskyCrossing):
                tail, head = item.edge
                seg = _segment(inst, location, tail)
                if seg is None:
                    return None
                total += seg.cost + inst.supported_cost(tail, head)
                location = head
            else:
                seg = _segment(inst, location, item.node)
                if seg is None:
                    return None
                total += seg.cost
                location = item.node
            if bound is not None and total >= bound:
                return None
        seg = _segment(inst, location, inst.goals[n])
        if seg is None:
            return None
        total += seg.cost
        if bound is not None and total >= bound:
            return None
    return total


def assemble_plan(inst: ProblemInstance, ics: IndividualCoordinationSet) -> Solution:
    """
    Timed plan for an ICS

    Events are processed in their global order. Both partners walk to the
    event, the earlier one waits, the receiver crosses while the supporter
    stays put. Steps where every robot stays are dropped.
    """
    n_robots = inst.robot_count
    timelines: List[List[int]] = [[s] for s in inst.starts]
    cursor = [0] * n_robots

    roles: Dict[int, Dict[str, Tuple[int, Item]]] = {}
    for n, items in enumerate(ics):
        for item in items:
            role = "receiver" if isinstance(item, RiskyCrossing) else "supporter"
            roles.setdefault(item.event, {})[role] = (n, item)

    def walk(n: int, dst: int) -> None:
        seg = _segment(inst, timelines[n][-1], dst)
        timelines[n].extend(seg.path[1:])

    def wait_until(n: int, step: int) -> None:
        while len(timelines[n]) - 1 < step:
            timelines[n].append(timelines[n][-1])

    events = []
    for event_id in sorted(roles):
        r, crossing = roles[event_id]["receiver"]
        s, post = roles[event_id]["supporter"]
        tail, head = crossing.edge
        walk(r, tail)
        walk(s, post.node)
        step = max(len(timelines[r]), len(timelines[s])) - 1
        wait_until(r, step)
        wait_until(s, step + 1)
        timelines[r].append(head)
        events.append((step, r, s, (tail, head), post.node))

    for n in range(n_robots):
        walk(n, inst.goals[n])
    paths = pad_paths(timelines)

    # drop all-stay steps and renumber events
    length = len(paths[0])
    keep = [0] + [t for t in range(1, length)
                  if any(p[t] != p[t - 1] for p in paths)]
    new_index = {}
    for i, t in enumerate(keep):
        new_index[t] = i
    paths = tuple(tuple(p[t] for t in keep) for p in paths)
    timed_events = tuple(
        CoordinationEvent(new_index[step + 1] - 1, r, s, edge, node)
        for step, r, s, edge, node in events
    )

    plan = Solution(paths=paths, events=timed_events)
    costs = per_robot_costs(inst, plan)
    return Solution(paths=paths, events=timed_events,
                    per_robot_cost=tuple(costs), total_cost=sum(costs, ZERO))


def cost_calculation(inst: ProblemInstance, ics: IndividualCoordinationSet,
                     bound: Optional[Fraction] = None) -> Optional[Tuple[Solution, Fraction]]:
    """
    Cost and timed plan of one ICS

    Returns:
        (Solution, cost), or None if infeasible or not cheaper than bound
    """
    cost = ics_cost(inst, ics, bound)
    if cost is None:
        return None
    plan = assemble_plan(inst, ics)
    assert plan.total_cost == cost
    return plan, cost


def _subsets(pair_count: int, max_uses: int) -> List[Tuple[int, ...]]:
    """Multisets of support-pair indices, each used at most max_uses times"""
    subsets = []
    for counts in itertools.product(range(max_uses + 1), repeat=pair_count):
        subsets.append(tuple(i for i, c in enumerate(counts) for _ in range(c)))
    subsets.sort(key=lambda items: (len(items), items))
    return subsets


def _orders(items: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
    seen = set()
    for order in itertools.permutations(items):
        if order not in seen:
            seen.add(order)
            yield order


def _build_ics(robot_count: int, pairs: Sequence[SupportPair], order: Sequence[int],
               directions: Sequence[int], assignment: Sequence[Tuple[int, int]]) -> IndividualCoordinationSet:
    items: List[List[Item]] = [[] for _ in range(robot_count)]
    for event, (index, direction, (r, s)) in enumerate(zip(order, directions, assignment)):
        u, v = pairs[index].risky_edge
        edge = (u, v) if direction == 0 else (v, u)
        items[r].append(RiskyCrossing(edge, event))
        items[s].append(SupportPost(pairs[index].support_node, event))
    return tuple(tuple(robot_items) for robot_items in items)


def solve_ces(inst: ProblemInstance, max_uses_per_pair: int = settings.CES_MAX_USES_PER_PAIR,
              budget: Optional[SearchBudget] = None,
              max_cost_calculations: Optional[int] = None) -> Tuple[Solution, EnumerationCounters]:
    """
    Cheapest plan over the naive baseline and every coordination choice

    Args:
        inst: Problem instance
        max_uses_per_pair: Times one support pair may appear in a subset
        budget: Work meter charged per cost calculation
        max_cost_calculations: Cap used when no budget is given

    Returns:
        (best Solution, enumeration counters)

    Raises:
        ResourceLimitError: cost-calculation cap exceeded
        SolverTimeout: budget deadline passed
    """
    if max_uses_per_pair < 1:
        raise ValueError("max_uses_per_pair must be positive")
    if budget is None:
        budget = SearchBudget(
            max_units=max_cost_calculations or settings.CES_MAX_COST_CALCULATIONS, label="ces")

    counters = EnumerationCounters()
    best = naive_solve(inst)
    best_cost = best.total_cost

    pairs = build_coordination_set(inst)
    if not pairs:
        return best, counters

    optimistic = all_goal_distances(inst)
    lower = sum((optimistic[n][s] for n, s in enumerate(inst.starts)), ZERO)
    if lower >= best_cost:
        logger.info(f"CES: optimistic bound {lower} ≥ naive {best_cost}, nothing to gain")
        return best, counters

    robot_pairs = [(r, s) for r in range(inst.robot_count) for s in range(inst.robot_count) if r != s]
    logger.info(f"🔍 CES: {len(pairs)} support pairs, {inst.robot_count} robots, "
                f"up to {max_uses_per_pair} uses each")

    for subset in _subsets(len(pairs), max_uses_per_pair):
        counters.subsets_visited += 1
        if not subset or not robot_pairs:
            continue
        for order in _orders(subset):
            counters.permutations_visited += 1
            for directions in itertools.product((0, 1), repeat=len(order)):
                for assignment in itertools.product(robot_pairs, repeat=len(order)):
                    counters.assignments_visited += 1
                    ics = _build_ics(inst.robot_count, pairs, order, directions, assignment)
                    budget.charge()
                    counters.cost_calculations += 1
                    result = cost_calculation(inst, ics, best_cost)
                    if result is not None:
                        best, best_cost = result
                        logger.debug(f"CES: improved to {best_cost} with subset {subset}")

    assert counters.cost_calculations <= enumeration_bound(
        inst.robot_count, len(pairs) * max_uses_per_pair)
    logger.info(f"✅ CES: cost {best_cost}, {counters.cost_calculations} cost calculations")
    return best, counters


if __name__ == "__main__":
    from core.model import fixture_t1

    print("=== CES Test ===\n")
    sol, counters = solve_ces(fixture_t1())
    print(f"✓ Cost: {sol.total_cost}")
    print(f"✓ Counters: {counters.to_dict()}")
