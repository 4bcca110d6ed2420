"""
Shared fixtures
"""
import random
from fractions import Fraction

import pytest

from bench.generator import GeneratorConfig, generate_instance
from core.model import CoordinationEvent, Graph, ProblemInstance, Solution, fixture_t1
from solvers.oracle import OracleLimits


@pytest.fixture
def t1():
    return fixture_t1()


@pytest.fixture
def t1_optimal():
    return Solution(
        paths=((0, 1, 2), (3, 3, 3)),
        events=(CoordinationEvent(step=1, receiver=0, supporter=1, edge=(1, 2), support_node=3),),
        per_robot_cost=(Fraction(3), Fraction(0)),
        total_cost=Fraction(3),
    )


@pytest.fixture
def repeat_support():
    """Two robots must both cross the same risky edge with the same supporter"""
    graph = Graph.build(3, edges=[(0, 1, 10), (1, 2, 1)], risky=[(0, 1, 1, [2])])
    return ProblemInstance(graph=graph, starts=(0, 0, 2), goals=(1, 1, 2), supporter_cost=1)


@pytest.fixture
def line_graph():
    graph = Graph.build(3, edges=[(0, 1, 1), (1, 2, 1)])
    return ProblemInstance(graph=graph, starts=(0,), goals=(2,), supporter_cost=1)


def make_tiny_instance(seed: int, max_robots: int = 3) -> ProblemInstance:
    """Random instance with at most 6 nodes, 3 robots and 2 risky edges"""
    rng = random.Random(seed)
    nodes = rng.randint(3, 6)
    cfg = GeneratorConfig(
        node_count=nodes,
        connectivity_tier=rng.choice(["sparse", "moderate", "dense"]),
        risky_fraction=0.5,
        max_risky_edges=2,
        support_nodes_per_edge=rng.randint(1, 2) if nodes > 3 else 1,
        base_cost_range=(1, 6),
        risky_base_range=(6, 15),
        reduced_cost_range=(1, 3),
        supporter_cost=1,
        robot_count=rng.randint(1, min(max_robots, nodes)),
        seed=seed,
    )
    return generate_instance(cfg)


def exhaustive_limits(inst: ProblemInstance) -> OracleLimits:
    """Step bound long enough for any cycle-free joint plan"""
    return OracleLimits(max_steps=inst.graph.node_count ** inst.robot_count)


@pytest.fixture
def tiny_instance():
    return make_tiny_instance
