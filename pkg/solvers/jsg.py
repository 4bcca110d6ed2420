"""
Joint State Graph search
Optimal team plans by UCS or A* over joint states, with successors and
their minimum coordination cost generated on demand
"""
from __future__ import annotations
from dataclasses import dataclass, asdict
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple
import heapq
import itertools
import logging

from config import settings
from core.budget import SearchBudget
from core.costs import solution_from_states
from core.errors import InfeasiblePlanError
from core.model import ZERO, CoordinationTriple, JointState, JointTransition, ProblemInstance, Solution, edge_key
from core.routing import all_goal_distances, heuristic
from solvers.matching import max_weight_matching

logger = logging.getLogger(__name__)


@dataclass
class ExpansionStats:
    """Search effort counters"""
    states_generated: int = 0
    states_expanded: int = 0
    matchings_solved: int = 0
    peak_frontier: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def min_transition_cost(inst: ProblemInstance, source: JointState, target: JointState,
                        stats: Optional[ExpansionStats] = None) -> Tuple[Fraction, FrozenSet[CoordinationTriple]]:
    """
    Cheapest coordination assignment for one joint step

    Receivers are robots crossing a risky edge whose supported cost is
    lower than its base cost; supporters are robots staying on one of that
    edge's support nodes. The best assignment is a maximum-weight matching
    with weight Δc = c − ĉ.

    Args:
        inst: Problem instance
        source: Joint state before the step
        target: Joint state after the step (moves assumed legal)
        stats: Counters to update

    Returns:
        (team step cost, coordination triples)
    """
    graph = inst.graph
    base = ZERO
    receivers: Dict[int, Tuple[Tuple[int, int], frozenset, Fraction]] = {}
    for n, (a, b) in enumerate(zip(source, target)):
        if a == b:
            continue
        base += graph.base_cost(a, b)
        info = graph.risky_edge(a, b)
        if info is not None:
            delta = inst.reduction(a, b)
            if delta > 0:
                receivers[n] = (edge_key(a, b), info.support_nodes, delta)

    if not receivers:
        return base, frozenset()

    stayers = [m for m, (a, b) in enumerate(zip(source, target)) if a == b]
    weights = {
        (r, s): delta
        for r, (_, support, delta) in receivers.items()
        for s in stayers
        if source[s] in support
    }
    if not weights:
        return base, frozenset()

    if stats is not None:
        stats.matchings_solved += 1
    reduction, pairs = max_weight_matching(weights)
    triples = frozenset(CoordinationTriple(r, s, receivers[r][0]) for r, s in pairs)
    return base - reduction, triples


def expand(inst: ProblemInstance, state: JointState,
           stats: Optional[ExpansionStats] = None) -> List[JointTransition]:
    """
    All successors of a joint state with their minimum costs

    Each robot stays or moves to a neighbor; the all-stay successor is
    never produced.
    """
    options = [(v,) + inst.graph.neighbors(v) for v in state]
    transitions = []
    for target in itertools.product(*options):
        if target == state:
            continue
        cost, triples = min_transition_cost(inst, state, target, stats)
        transitions.append(JointTransition(state, target, triples, cost))
    return transitions


def _search(inst: ProblemInstance, use_heuristic: bool,
            budget: Optional[SearchBudget], max_expansions: Optional[int]) -> Tuple[Solution, ExpansionStats]:
    label = "jsg-astar" if use_heuristic else "jsg-ucs"
    if budget is None:
        budget = SearchBudget(max_units=max_expansions or settings.JSG_MAX_EXPANSIONS, label=label)

    distances = all_goal_distances(inst) if use_heuristic else None

    def h(state: JointState) -> Fraction:
        return heuristic(inst, state, distances) if use_heuristic else ZERO

    stats = ExpansionStats()
    start = inst.start_state
    best_g: Dict[JointState, Fraction] = {start: ZERO}
    parent: Dict[JointState, Tuple[Optional[JointState], FrozenSet[CoordinationTriple]]] = {
        start: (None, frozenset())
    }
    h_start = h(start)
    frontier = [(h_start, h_start, start, ZERO)]
    closed = set()
    stats.states_generated = 1
    stats.peak_frontier = 1

    logger.info(f"🔍 {label}: {inst.robot_count} robots, {inst.graph.node_count} nodes")

    while frontier:
        f, h_value, state, g = heapq.heappop(frontier)
        if state in closed or g > best_g[state]:
            continue

        if inst.is_goal(state):
            states = [state]
            steps = []
            while parent[states[-1]][0] is not None:
                prev, triples = parent[states[-1]]
                steps.append(triples)
                states.append(prev)
            states.reverse()
            steps.reverse()
            solution = solution_from_states(inst, states, steps)
            assert solution.total_cost == g
            logger.info(f"✅ {label}: cost {g}, expanded {stats.states_expanded}, "
                        f"generated {stats.states_generated}")
            return solution, stats

        closed.add(state)
        budget.charge()
        stats.states_expanded += 1

        for tr in expand(inst, state, stats):
            successor = tr.target
            candidate = g + tr.cost
            if successor in closed:
                # consistent heuristic: a closed state is never improved
                assert candidate >= best_g[successor]
                continue
            if successor not in best_g:
                stats.states_generated += 1
            elif candidate >= best_g[successor]:
                continue
            best_g[successor] = candidate
            parent[successor] = (state, tr.coordination)
            h_next = h(successor)
            heapq.heappush(frontier, (candidate + h_next, h_next, successor, candidate))

        stats.peak_frontier = max(stats.peak_frontier, len(frontier))

    raise InfeasiblePlanError(f"{label}: joint goal unreachable")


def solve_ucs(inst: ProblemInstance, budget: Optional[SearchBudget] = None,
              max_expansions: Optional[int] = None) -> Tuple[Solution, ExpansionStats]:
    """
    Optimal plan by uniform cost search

    Raises:
        ResourceLimitError: expansion cap exceeded
        SolverTimeout: budget deadline passed
    """
    return _search(inst, False, budget, max_expansions)


def solve_astar(inst: ProblemInstance, budget: Optional[SearchBudget] = None,
                max_expansions: Optional[int] = None) -> Tuple[Solution, ExpansionStats]:
    """
    Optimal plan by A* with the sum of optimistic goal distances as heuristic

    Raises:
        ResourceLimitError: expansion cap exceeded
        SolverTimeout: budget deadline passed
    """
    return _search(inst, True, budget, max_expansions)


if __name__ == "__main__":
    from core.model import fixture_t1

    print("=== JSG Search Test ===\n")
    inst = fixture_t1()
    for solve in (solve_ucs, solve_astar):
        sol, stats = solve(inst)
        print(f"✓ {solve.__name__}: cost {sol.total_cost}, {stats.to_dict()}")
