"""
Single-robot shortest paths
Dijkstra under pessimistic or optimistic edge costs, goal-distance tables
and the no-coordination baseline
"""
from __future__ import annotations
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple
import heapq
import logging

from core.model import ZERO, Graph, ProblemInstance, Solution

logger = logging.getLogger(__name__)


class ViewMode(str, Enum):
    PESSIMISTIC = "pessimistic"  # c_ij on every edge
    OPTIMISTIC = "optimistic"    # min(c_ij, ĉ_ij), every risky edge assumed supported


@dataclass(frozen=True)
class CostView:
    """Edge cost function used by a search"""
    mode: ViewMode = ViewMode.PESSIMISTIC
    supporter_cost: Fraction = ZERO

    @classmethod
    def pessimistic(cls) -> CostView:
        return cls(ViewMode.PESSIMISTIC)

    @classmethod
    def optimistic(cls, inst: ProblemInstance) -> CostView:
        return cls(ViewMode.OPTIMISTIC, inst.supporter_cost)

    def edge_cost(self, graph: Graph, u: int, v: int) -> Fraction:
        base = graph.base_cost(u, v)
        if self.mode is ViewMode.PESSIMISTIC:
            return base
        info = graph.risky_edge(u, v)
        if info is None:
            return base
        return min(base, info.reduced_cost + self.supporter_cost)


@dataclass(frozen=True)
class PathResult:
    path: Tuple[int, ...]
    cost: Fraction


def shortest_path(graph: Graph, src: int, dst: int, view: CostView) -> Optional[PathResult]:
    """
    Minimum-cost path between two nodes

    Ties between equal-cost paths go to the lexicographically smallest
    node sequence.

    Args:
        graph: Graph to search
        src: Start node
        dst: Target node
        view: Edge cost function

    Returns:
        PathResult, or None if dst is unreachable
    """
    if src == dst:
        return PathResult((src,), ZERO)

    frontier: List[Tuple[Fraction, Tuple[int, ...]]] = [(ZERO, (src,))]
    settled = set()
    while frontier:
        cost, path = heapq.heappop(frontier)
        node = path[-1]
        if node in settled:
            continue
        settled.add(node)
        if node == dst:
            return PathResult(path, cost)
        for nxt in graph.neighbors(node):
            if nxt not in settled:
                heapq.heappush(frontier, (cost + view.edge_cost(graph, node, nxt), path + (nxt,)))

    return None


def distances_to(graph: Graph, target: int, view: CostView) -> Dict[int, Fraction]:
    """Backward Dijkstra: distance from every reachable node to target"""
    dist: Dict[int, Fraction] = {target: ZERO}
    frontier = [(ZERO, target)]
    while frontier:
        cost, node = heapq.heappop(frontier)
        if cost > dist.get(node, cost):
            continue
        for nxt in graph.neighbors(node):
            candidate = cost + view.edge_cost(graph, node, nxt)
            if nxt not in dist or candidate < dist[nxt]:
                dist[nxt] = candidate
                heapq.heappush(frontier, (candidate, nxt))
    return dist


def all_goal_distances(inst: ProblemInstance, view: Optional[CostView] = None) -> List[Dict[int, Fraction]]:
    """
    Per robot, distance from every node to that robot's goal
    Cached on the instance
    """
    view = view or CostView.optimistic(inst)

    def compute() -> List[Dict[int, Fraction]]:
        by_goal = {g: distances_to(inst.graph, g, view) for g in set(inst.goals)}
        return [by_goal[g] for g in inst.goals]

    return inst.cached(("goal_distances", view), compute)


def heuristic(inst: ProblemInstance, state, distances: Optional[List[Dict[int, Fraction]]] = None) -> Fraction:
    """Sum of optimistic distances to goal over all robots"""
    distances = distances or all_goal_distances(inst)
    return sum((distances[n][v] for n, v in enumerate(state)), ZERO)


def pad_paths(paths: List[Tuple[int, ...]]) -> Tuple[Tuple[int, ...], ...]:
    """Repeat last nodes so every path has the same length"""
    length = max((len(p) for p in paths), default=1)
    return tuple(tuple(p) + (p[-1],) * (length - len(p)) for p in paths)


def naive_solve(inst: ProblemInstance) -> Solution:
    """
    No-coordination baseline
    Every robot follows its own pessimistic shortest path
    """
    paths = []
    costs = []
    view = CostView.pessimistic()
    for n, (s, g) in enumerate(zip(inst.starts, inst.goals)):
        result = shortest_path(inst.graph, s, g, view)
        if result is None:
            raise ValueError(f"robot {n}: goal {g} unreachable from {s}")
        paths.append(result.path)
        costs.append(result.cost)

    total = sum(costs, ZERO)
    logger.debug(f"Naive plan cost {total}")
    return Solution(paths=pad_paths(paths), events=(), per_robot_cost=tuple(costs), total_cost=total)
