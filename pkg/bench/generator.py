"""
Random instance generator
Connected graphs in three density tiers with a few risky edges, plus
robot placement
"""
from __future__ import annotations
from typing import List, Optional, Sequence, Tuple
import logging
import math
import random

from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import settings
from core.errors import GeneratorConfigError
from core.model import ConnectivityTier, Graph, ProblemInstance, RiskyEdge, edge_key

logger = logging.getLogger(__name__)


class GeneratorConfig(BaseModel):
    """Parameters of one generated instance"""
    model_config = ConfigDict(extra="forbid")

    node_count: int = Field(default=10, ge=2)
    connectivity_tier: ConnectivityTier = ConnectivityTier.SPARSE
    risky_fraction: float = Field(default=settings.GEN_RISKY_FRACTION, ge=0, lt=1)
    max_risky_edges: Optional[int] = Field(default=settings.GEN_MAX_RISKY_EDGES, ge=0)
    support_nodes_per_edge: int = Field(default=settings.GEN_SUPPORT_NODES_PER_EDGE, ge=1)
    base_cost_range: Tuple[int, int] = settings.GEN_BASE_COST_RANGE
    risky_base_range: Tuple[int, int] = settings.GEN_RISKY_BASE_RANGE
    reduced_cost_range: Tuple[int, int] = settings.GEN_REDUCED_COST_RANGE
    supporter_cost: int = Field(default=settings.GEN_SUPPORTER_COST, ge=0)
    robot_count: int = Field(default=3, ge=1)
    seed: int = 0

    @model_validator(mode="after")
    def check_ranges(self) -> GeneratorConfig:
        for name in ("base_cost_range", "risky_base_range", "reduced_cost_range"):
            low, high = getattr(self, name)
            if low < 0 or low > high:
                raise ValueError(f"{name} must be a nonnegative (low, high) pair")
        return self


def _edge_probability(tier: ConnectivityTier, n: int) -> float:
    if tier is ConnectivityTier.DENSE:
        return settings.GEN_DENSE_EDGE_PROBABILITY
    return min(1.0, 2 * math.log(n) / n)


def generate_graph(cfg: GeneratorConfig) -> Graph:
    """
    Connected graph for a config, independent of the robot count

    Raises:
        GeneratorConfigError: risky fraction rounds to zero edges, or too
            few nodes to pick support nodes
    """
    rng = random.Random(cfg.seed)
    n = cfg.node_count

    # random spanning tree first
    order = rng.sample(range(n), n)
    edges = set()
    for i in range(1, n):
        edges.add(edge_key(order[i], order[rng.randrange(i)]))

    candidates = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in edges]
    if cfg.connectivity_tier is ConnectivityTier.SPARSE:
        extra = min(len(candidates), math.ceil(settings.GEN_SPARSE_EXTRA_EDGE_RATIO * n))
        edges.update(rng.sample(candidates, extra))
    else:
        p = _edge_probability(cfg.connectivity_tier, n)
        edges.update(e for e in candidates if rng.random() < p)

    edge_list = sorted(edges)
    costs = {e: rng.randint(*cfg.base_cost_range) for e in edge_list}

    risky_count = 0
    if cfg.risky_fraction > 0:
        risky_count = round(cfg.risky_fraction * len(edge_list))
        if risky_count == 0:
            raise GeneratorConfigError(
                f"risky_fraction {cfg.risky_fraction} rounds to 0 of {len(edge_list)} edges")
        if cfg.max_risky_edges is not None:
            risky_count = min(risky_count, cfg.max_risky_edges)

    risky = {}
    for u, v in sorted(rng.sample(edge_list, risky_count)):
        others = [w for w in range(n) if w not in (u, v)]
        if len(others) < cfg.support_nodes_per_edge:
            raise GeneratorConfigError(
                f"edge ({u}, {v}) needs {cfg.support_nodes_per_edge} support nodes, "
                f"only {len(others)} available")
        base = rng.randint(*cfg.risky_base_range)
        reduced = min(base, rng.randint(*cfg.reduced_cost_range))
        costs[(u, v)] = base
        risky[(u, v)] = RiskyEdge(reduced, frozenset(rng.sample(others, cfg.support_nodes_per_edge)))

    graph = Graph(node_count=n, edges=costs, risky=risky)
    logger.debug(f"Generated graph: {n} nodes, {graph.edge_count} edges, "
                 f"{graph.risky_count} risky, tier {cfg.connectivity_tier.value}, seed {cfg.seed}")
    return graph


def place_robots(graph: Graph, robot_count: int, seed: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Distinct starts and distinct goals"""
    if robot_count > graph.node_count:
        raise GeneratorConfigError(f"{robot_count} robots do not fit on {graph.node_count} nodes")
    rng = random.Random(f"robots-{seed}-{robot_count}")
    starts = tuple(rng.sample(range(graph.node_count), robot_count))
    goals = tuple(rng.sample(range(graph.node_count), robot_count))
    return starts, goals


def generate_instance(cfg: GeneratorConfig, graph: Optional[Graph] = None) -> ProblemInstance:
    """
    Seeded random instance

    Args:
        cfg: Generator config
        graph: Prebuilt graph for cfg (generated if omitted)

    Returns:
        ProblemInstance
    """
    graph = graph or generate_graph(cfg)
    starts, goals = place_robots(graph, cfg.robot_count, cfg.seed)
    return ProblemInstance(graph=graph, starts=starts, goals=goals, supporter_cost=cfg.supporter_cost)


def suite_configs(node_counts: Sequence[int] = settings.BENCH_NODE_COUNTS,
                  tiers: Sequence[ConnectivityTier] = tuple(ConnectivityTier),
                  graphs_per_tier: int = settings.BENCH_GRAPHS_PER_TIER,
                  base_seed: int = 0, **overrides) -> List[GeneratorConfig]:
    """One config per (node count, tier, replicate), seeds counting up from base_seed"""
    configs = []
    seed = base_seed
    for n in node_counts:
        for tier in tiers:
            for _ in range(graphs_per_tier):
                configs.append(GeneratorConfig(node_count=n, connectivity_tier=tier, seed=seed, **overrides))
                seed += 1
    return configs
