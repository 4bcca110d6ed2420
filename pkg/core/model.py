"""
Core data models for team coordination planning
Graph with risky edges, problem instances, joint transitions and plans
"""
from __future__ import annotations
from dataclasses import dataclass, field, replace
from fractions import Fraction
from enum import Enum
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Tuple, Union
import logging

import networkx as nx

logger = logging.getLogger(__name__)

Node = int
Edge = Tuple[int, int]
JointState = Tuple[int, ...]  # one location per robot
CostLike = Union[int, float, str, Fraction]

ZERO = Fraction(0)


def to_fraction(value: CostLike) -> Fraction:
    """Exact rational from an int, decimal float, 'p/q' string or Fraction"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError(f"Unsupported cost value: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # repr keeps the decimal the user wrote (0.1 -> 1/10)
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"Unsupported cost value: {value!r}")


def edge_key(u: int, v: int) -> Edge:
    """Undirected edge key"""
    return (u, v) if u <= v else (v, u)


class ConnectivityTier(str, Enum):
    """Edge density classes used by the generator"""
    SPARSE = "sparse"
    MODERATE = "moderate"
    DENSE = "dense"


@dataclass(frozen=True)
class RiskyEdge:
    """Reduced cost and support nodes of a risky edge"""
    reduced_cost: Fraction
    support_nodes: FrozenSet[int]

    def __post_init__(self):
        object.__setattr__(self, "reduced_cost", to_fraction(self.reduced_cost))
        object.__setattr__(self, "support_nodes", frozenset(self.support_nodes))


@dataclass(frozen=True)
class Graph:
    """
    Undirected weighted graph with risky edges
    Edge keys are (min, max) node pairs
    """
    node_count: int
    edges: Dict[Edge, Fraction]
    risky: Dict[Edge, RiskyEdge] = field(default_factory=dict)
    _adjacency: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "edges", {
            edge_key(u, v): to_fraction(cost) for (u, v), cost in self.edges.items()
        })
        object.__setattr__(self, "risky", {
            edge_key(u, v): info for (u, v), info in self.risky.items()
        })

        adjacency = [set() for _ in range(max(self.node_count, 0))]
        for u, v in self.edges:
            if u != v and 0 <= u < self.node_count and 0 <= v < self.node_count:
                adjacency[u].add(v)
                adjacency[v].add(u)
        object.__setattr__(self, "_adjacency", tuple(tuple(sorted(nbrs)) for nbrs in adjacency))

    @classmethod
    def build(cls, node_count: int,
              edges: Iterable[Tuple[int, int, CostLike]],
              risky: Iterable[Tuple[int, int, CostLike, Iterable[int]]] = ()) -> Graph:
        """
        Build a graph from edge and risky-edge lists

        Args:
            node_count: Number of nodes
            edges: (u, v, base_cost) triples
            risky: (u, v, reduced_cost, support_nodes) entries

        Returns:
            Graph instance
        """
        edge_costs = {edge_key(u, v): to_fraction(cost) for u, v, cost in edges}
        risky_map = {
            edge_key(u, v): RiskyEdge(to_fraction(reduced), frozenset(support))
            for u, v, reduced, support in risky
        }
        return cls(node_count=node_count, edges=edge_costs, risky=risky_map)

    def neighbors(self, node: int) -> Tuple[int, ...]:
        """Sorted neighbors of a node"""
        return self._adjacency[node]

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edges

    def base_cost(self, u: int, v: int) -> Fraction:
        """c_ij of an existing edge"""
        return self.edges[edge_key(u, v)]

    def risky_edge(self, u: int, v: int) -> Optional[RiskyEdge]:
        return self.risky.get(edge_key(u, v))

    def is_risky(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.risky

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def risky_count(self) -> int:
        return len(self.risky)

    @property
    def support_pair_count(self) -> int:
        """|CS|: one per (risky edge, support node) combination"""
        return sum(len(info.support_nodes) for info in self.risky.values())

    def to_networkx(self) -> nx.Graph:
        """Export as a networkx graph with 'weight' attributes"""
        g = nx.Graph()
        g.add_nodes_from(range(self.node_count))
        for (u, v), cost in self.edges.items():
            if 0 <= u < self.node_count and 0 <= v < self.node_count:
                g.add_edge(u, v, weight=cost, risky=(u, v) in self.risky)
        return g

    def is_connected(self) -> bool:
        if self.node_count <= 0:
            return False
        return nx.is_connected(self.to_networkx())

    def with_base_cost(self, u: int, v: int, cost: CostLike) -> Graph:
        """Copy with one edge's base cost replaced"""
        edges = dict(self.edges)
        edges[edge_key(u, v)] = to_fraction(cost)
        return Graph(node_count=self.node_count, edges=edges, risky=dict(self.risky))

    def relabel(self, mapping: List[int]) -> Graph:
        """Copy with node i renamed to mapping[i]"""
        edges = {edge_key(mapping[u], mapping[v]): cost for (u, v), cost in self.edges.items()}
        risky = {
            edge_key(mapping[u], mapping[v]): RiskyEdge(
                info.reduced_cost, frozenset(mapping[s] for s in info.support_nodes))
            for (u, v), info in self.risky.items()
        }
        return Graph(node_count=self.node_count, edges=edges, risky=risky)


@dataclass(frozen=True)
class ProblemInstance:
    """
    TCGRE problem instance
    Graph, robot starts and goals, supporter cost and optional horizon
    """
    graph: Graph
    starts: JointState
    goals: JointState
    supporter_cost: Fraction
    horizon: Optional[int] = None
    _cache: Dict[Any, Any] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "starts", tuple(self.starts))
        object.__setattr__(self, "goals", tuple(self.goals))
        object.__setattr__(self, "supporter_cost", to_fraction(self.supporter_cost))

    @property
    def robot_count(self) -> int:
        return len(self.starts)

    @property
    def start_state(self) -> JointState:
        return self.starts

    @property
    def goal_state(self) -> JointState:
        return self.goals

    def is_goal(self, state: JointState) -> bool:
        return tuple(state) == self.goals

    def supported_cost(self, u: int, v: int) -> Optional[Fraction]:
        """ĉ_ij = c̃_ij + c′ for a risky edge, None otherwise"""
        info = self.graph.risky_edge(u, v)
        if info is None:
            return None
        return info.reduced_cost + self.supporter_cost

    def reduction(self, u: int, v: int) -> Fraction:
        """Δc_ij = c_ij − ĉ_ij (zero for ordinary edges)"""
        supported = self.supported_cost(u, v)
        if supported is None:
            return ZERO
        return self.graph.base_cost(u, v) - supported

    def cached(self, key: Any, factory: Callable[[], Any]) -> Any:
        """Memoize a derived value on this instance"""
        if key not in self._cache:
            self._cache[key] = factory()
        return self._cache[key]

    def with_starts(self, starts: Iterable[int]) -> ProblemInstance:
        """Same problem from another joint state"""
        return replace(self, starts=tuple(starts))

    def with_graph(self, graph: Graph) -> ProblemInstance:
        return replace(self, graph=graph)

    def sub_team(self, robots: Iterable[int], starts: Optional[Iterable[int]] = None) -> ProblemInstance:
        """Instance restricted to some robots, optionally from new locations"""
        robots = list(robots)
        locations = tuple(starts) if starts is not None else tuple(self.starts[n] for n in robots)
        return replace(
            self,
            starts=locations,
            goals=tuple(self.goals[n] for n in robots),
        )


class CoordinationTriple(NamedTuple):
    """One coordination behavior within a single step"""
    receiver: int
    supporter: int
    edge: Edge  # undirected key of the risky edge crossed


@dataclass(frozen=True)
class JointTransition:
    """One synchronized team step"""
    source: JointState
    target: JointState
    coordination: FrozenSet[CoordinationTriple] = frozenset()
    cost: Fraction = ZERO

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))
        object.__setattr__(self, "coordination", frozenset(
            CoordinationTriple(r, s, edge_key(*e)) for r, s, e in self.coordination
        ))
        object.__setattr__(self, "cost", to_fraction(self.cost))

    def movers(self) -> List[int]:
        return [n for n, (a, b) in enumerate(zip(self.source, self.target)) if a != b]

    def is_all_stay(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class CoordinationEvent:
    """Receiver crosses a risky edge while the supporter holds a support node"""
    step: int
    receiver: int
    supporter: int
    edge: Edge  # directed as crossed
    support_node: int

    def triple(self) -> CoordinationTriple:
        return CoordinationTriple(self.receiver, self.supporter, edge_key(*self.edge))

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "receiver": self.receiver,
            "supporter": self.supporter,
            "edge": list(self.edge),
            "support_node": self.support_node,
        }

    @classmethod
    def from_dict(cls, data: dict) -> CoordinationEvent:
        return cls(
            step=int(data["step"]),
            receiver=int(data["receiver"]),
            supporter=int(data["supporter"]),
            edge=(int(data["edge"][0]), int(data["edge"][1])),
            support_node=int(data["support_node"]),
        )


@dataclass(frozen=True)
class Solution:
    """
    Timed team plan
    paths[n][t] is robot n's node at step t
    """
    paths: Tuple[Tuple[int, ...], ...]
    events: Tuple[CoordinationEvent, ...] = ()
    per_robot_cost: Tuple[Fraction, ...] = ()
    total_cost: Fraction = ZERO

    def __post_init__(self):
        object.__setattr__(self, "paths", tuple(tuple(p) for p in self.paths))
        object.__setattr__(self, "events", tuple(sorted(
            self.events, key=lambda e: (e.step, e.receiver, e.supporter))))
        object.__setattr__(self, "per_robot_cost", tuple(to_fraction(c) for c in self.per_robot_cost))
        object.__setattr__(self, "total_cost", to_fraction(self.total_cost))

    @property
    def robot_count(self) -> int:
        return len(self.paths)

    @property
    def makespan(self) -> int:
        """Number of steps"""
        return max((len(p) for p in self.paths), default=1) - 1

    def state_at(self, step: int) -> JointState:
        return tuple(path[step] for path in self.paths)

    def states(self) -> List[JointState]:
        return [self.state_at(t) for t in range(self.makespan + 1)]

    def coordination_at(self, step: int) -> FrozenSet[CoordinationTriple]:
        return frozenset(e.triple() for e in self.events if e.step == step)

    def to_dict(self) -> dict:
        """Convert to solution-file dictionary (costs stay exact)"""
        return {
            "paths": [list(p) for p in self.paths],
            "events": [e.to_dict() for e in self.events],
            "per_robot_cost": list(self.per_robot_cost),
            "total_cost": self.total_cost,
        }

    @classmethod
    def from_dict(cls, data: dict) -> Solution:
        return cls(
            paths=tuple(tuple(int(v) for v in p) for p in data["paths"]),
            events=tuple(CoordinationEvent.from_dict(e) for e in data.get("events", [])),
            per_robot_cost=tuple(to_fraction(c) for c in data.get("per_robot_cost", [])),
            total_cost=to_fraction(data["total_cost"]),
        )


@dataclass(frozen=True)
class InstanceDescriptor:
    """Summary of an instance for benchmark records"""
    node_count: int
    edge_count: int
    risky_count: int
    support_pair_count: int
    robot_count: int
    connectivity_tier: str = ""
    seed: Optional[int] = None

    @classmethod
    def from_instance(cls, inst: ProblemInstance, tier: str = "",
                      seed: Optional[int] = None) -> InstanceDescriptor:
        return cls(
            node_count=inst.graph.node_count,
            edge_count=inst.graph.edge_count,
            risky_count=inst.graph.risky_count,
            support_pair_count=inst.graph.support_pair_count,
            robot_count=inst.robot_count,
            connectivity_tier=tier,
            seed=seed,
        )

    def to_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "risky_count": self.risky_count,
            "support_pair_count": self.support_pair_count,
            "robot_count": self.robot_count,
            "connectivity_tier": self.connectivity_tier,
            "seed": self.seed,
        }


def validate_instance(inst: ProblemInstance) -> List[str]:
    """
    Check every model invariant of an instance

    Args:
        inst: Instance to check

    Returns:
        Violations as "field: rule" strings (empty if valid)
    """
    violations: List[str] = []
    graph = inst.graph
    n = graph.node_count

    def valid_node(v: Any) -> bool:
        return isinstance(v, int) and not isinstance(v, bool) and 0 <= v < n

    if not isinstance(n, int) or n < 1:
        violations.append(f"graph.node_count: must be a positive integer, got {n!r}")
        return violations

    endpoints_ok = True
    for (u, v), cost in sorted(graph.edges.items()):
        if not (valid_node(u) and valid_node(v)):
            violations.append(f"graph.edges[{u}, {v}]: endpoint out of range")
            endpoints_ok = False
        elif u == v:
            violations.append(f"graph.edges[{u}, {v}]: self-loop edge")
        if cost < 0:
            violations.append(f"graph.edges[{u}, {v}]: negative base cost")

    for (u, v), info in sorted(graph.risky.items()):
        where = f"graph.risky[{u}, {v}]"
        if (u, v) not in graph.edges:
            violations.append(f"{where}: risky edge is not an edge")
        elif info.reduced_cost > graph.edges[(u, v)]:
            violations.append(f"{where}: reduced cost exceeds base cost")
        if info.reduced_cost < 0:
            violations.append(f"{where}: negative reduced cost")
        if not info.support_nodes:
            violations.append(f"{where}: risky edge lacks support node")
        for s in sorted(info.support_nodes):
            if not valid_node(s):
                violations.append(f"{where}: support node {s} out of range")

    if endpoints_ok and not graph.is_connected():
        violations.append("graph: graph is not connected")

    if len(inst.starts) < 1:
        violations.append("starts: at least one robot required")
    if len(inst.starts) != len(inst.goals):
        violations.append(
            f"goals: length {len(inst.goals)} differs from starts length {len(inst.starts)}")
    for i, v in enumerate(inst.starts):
        if not valid_node(v):
            violations.append(f"starts[{i}]: node {v} out of range")
    for i, v in enumerate(inst.goals):
        if not valid_node(v):
            violations.append(f"goals[{i}]: node {v} out of range")

    if inst.supporter_cost < 0:
        violations.append("supporter_cost: must be non-negative")
    if inst.horizon is not None and (not isinstance(inst.horizon, int) or inst.horizon < 1):
        violations.append(f"horizon: must be a positive integer, got {inst.horizon!r}")

    return violations


def fixture_t1() -> ProblemInstance:
    """
    Four-node reference instance
    Robot 0 goes 0 -> 2 over risky edge (1, 2); robot 1 waits at support node 3
    """
    graph = Graph.build(
        4,
        edges=[(0, 1, 1), (1, 2, 10), (0, 3, 2)],
        risky=[(1, 2, 1, [3])],
    )
    return ProblemInstance(graph=graph, starts=(0, 3), goals=(2, 3), supporter_cost=Fraction(1))


if __name__ == "__main__":
    print("=== Model Test ===\n")

    inst = fixture_t1()
    print(f"✓ Nodes: {inst.graph.node_count}, edges: {inst.graph.edge_count}")
    print(f"✓ Supported cost on (1, 2): {inst.supported_cost(1, 2)}")
    print(f"✓ Violations: {validate_instance(inst)}")
