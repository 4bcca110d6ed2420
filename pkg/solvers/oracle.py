"""
Brute-force optimum for tiny instances
Layered enumeration of every joint move and every coordination set per
step, kept independent of the matching used by the JSG solvers
"""
from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple
import itertools
import logging

from config import settings
from core.budget import SearchBudget
from core.costs import robot_step_costs, solution_from_states
from core.errors import InfeasiblePlanError, OracleLimitError
from core.model import ZERO, CoordinationTriple, JointState, ProblemInstance, Solution, edge_key

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleLimits:
    """Size limits for exhaustive enumeration"""
    max_nodes: int = settings.ORACLE_MAX_NODES
    max_robots: int = settings.ORACLE_MAX_ROBOTS
    max_steps: Optional[int] = None  # default: horizon, else factor * |V|

    def steps_for(self, inst: ProblemInstance) -> int:
        if self.max_steps is not None:
            return self.max_steps
        if inst.horizon is not None:
            return inst.horizon
        return settings.ORACLE_STEP_FACTOR * inst.graph.node_count


def coordination_sets(inst: ProblemInstance, source: JointState,
                      target: JointState) -> Iterator[FrozenSet[CoordinationTriple]]:
    """
    Every valid coordination set for one step, the empty set included

    A triple needs its receiver crossing a risky edge and its supporter
    staying on a support node of that edge; no robot is in two triples.
    """
    graph = inst.graph
    candidates = []
    for r, (a, b) in enumerate(zip(source, target)):
        if a == b or not graph.is_risky(a, b):
            continue
        support = graph.risky_edge(a, b).support_nodes
        for s, (c, d) in enumerate(zip(source, target)):
            if s != r and c == d and c in support:
                candidates.append(CoordinationTriple(r, s, edge_key(a, b)))

    def build(i: int, used: FrozenSet[int], chosen: Tuple[CoordinationTriple, ...]):
        if i == len(candidates):
            yield frozenset(chosen)
            return
        yield from build(i + 1, used, chosen)
        triple = candidates[i]
        if triple.receiver not in used and triple.supporter not in used:
            yield from build(i + 1, used | {triple.receiver, triple.supporter}, chosen + (triple,))

    yield from build(0, frozenset(), ())


def oracle_solve(inst: ProblemInstance, limits: Optional[OracleLimits] = None,
                 budget: Optional[SearchBudget] = None) -> Tuple[Solution, Fraction]:
    """
    Exact optimum over all joint plans of at most T steps

    Args:
        inst: Problem instance
        limits: Size limits and step bound
        budget: Optional work meter, charged once per layer entry

    Returns:
        (optimal Solution, optimal cost)

    Raises:
        OracleLimitError: instance larger than the limits
        InfeasiblePlanError: no plan reaches every goal within T steps
    """
    limits = limits or OracleLimits()
    if inst.graph.node_count > limits.max_nodes or inst.robot_count > limits.max_robots:
        raise OracleLimitError(
            f"oracle limited to {limits.max_nodes} nodes and {limits.max_robots} robots, "
            f"got {inst.graph.node_count} nodes and {inst.robot_count} robots")

    horizon = limits.steps_for(inst)
    start = inst.start_state
    if inst.is_goal(start):
        return solution_from_states(inst, [start], []), ZERO

    options = [None] * inst.graph.node_count
    for v in range(inst.graph.node_count):
        options[v] = (v,) + inst.graph.neighbors(v)

    # layers[t][state] = (cost, previous state, coordination)
    layers: List[Dict[JointState, Tuple[Fraction, Optional[JointState], FrozenSet]]] = [
        {start: (ZERO, None, frozenset())}
    ]
    cheapest_seen: Dict[JointState, Fraction] = {start: ZERO}
    best_cost: Optional[Fraction] = None
    best_at: Optional[int] = None

    for t in range(horizon):
        layer: Dict[JointState, Tuple[Fraction, Optional[JointState], FrozenSet]] = {}
        for state, (cost, _, _) in sorted(layers[t].items()):
            if inst.is_goal(state):
                continue
            if budget is not None:
                budget.charge()
            for target in itertools.product(*(options[v] for v in state)):
                if target == state:
                    continue
                step_best = None
                step_triples: FrozenSet = frozenset()
                for triples in coordination_sets(inst, state, target):
                    c = sum(robot_step_costs(inst, state, target, triples), ZERO)
                    if step_best is None or c < step_best:
                        step_best, step_triples = c, triples
                total = cost + step_best
                if best_cost is not None and total >= best_cost:
                    continue
                if target in layer and layer[target][0] <= total:
                    continue
                layer[target] = (total, state, step_triples)

        # a state reached earlier at no higher cost dominates this entry
        pruned = {}
        for state, entry in layer.items():
            if state in cheapest_seen and cheapest_seen[state] <= entry[0]:
                continue
            pruned[state] = entry
        for state, entry in pruned.items():
            cheapest_seen[state] = entry[0]
            if inst.is_goal(state) and (best_cost is None or entry[0] < best_cost):
                best_cost, best_at = entry[0], t + 1
        layers.append(pruned)
        logger.debug(f"Oracle layer {t + 1}: {len(pruned)} states")
        if not pruned:
            break

    if best_cost is None:
        raise InfeasiblePlanError(f"no plan reaches the goals within {horizon} steps")

    states = [inst.goal_state]
    steps = []
    for t in range(best_at, 0, -1):
        _, prev, triples = layers[t][states[-1]]
        states.append(prev)
        steps.append(triples)
    states.reverse()
    steps.reverse()

    solution = solution_from_states(inst, states, steps)
    logger.info(f"🔎 Oracle optimum {best_cost} in {best_at} steps")
    return solution, best_cost
