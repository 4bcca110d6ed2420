"""
Focused experiments
CES runtime scaling in team size and support pairs, RHOC-A* horizon sweep
"""
from __future__ import annotations
from dataclasses import dataclass, field
from statistics import mean
from typing import Dict, List, Optional, Sequence
import logging

import numpy as np

from bench.generator import GeneratorConfig, generate_graph, generate_instance
from config import settings
from core.errors import ResourceLimitError
from core.model import ConnectivityTier
from solvers.registry import SolveOptions, run_algorithm

logger = logging.getLogger(__name__)

MIN_RUNTIME = 1e-9


def power_law_exponent(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Slope of log(y) against log(x)"""
    x = np.log(np.asarray(xs, dtype=float))
    y = np.log(np.maximum(np.asarray(ys, dtype=float), MIN_RUNTIME))
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


@dataclass
class CesScalingResult:
    team_rows: List[Dict[str, float]] = field(default_factory=list)
    pair_rows: List[Dict[str, float]] = field(default_factory=list)
    team_exponent: Optional[float] = None
    pair_growth: Optional[float] = None  # runtime ratio, most pairs over fewest

    def rows(self) -> List[Dict[str, str]]:
        out = []
        for sweep, rows in (("robots", self.team_rows), ("support_pairs", self.pair_rows)):
            for row in rows:
                out.append({
                    "sweep": sweep,
                    "robots": str(int(row["robots"])),
                    "support_pairs": str(int(row["support_pairs"])),
                    "runtime_s": f"{row['runtime_s']:.6f}",
                    "completed": str(int(row["completed"])),
                })
        return out


def _mean_ces_runtime(node_count: int, robots: int, pairs: int, seeds: Sequence[int],
                      timeout: float) -> Dict[str, float]:
    runtimes = []
    for seed in seeds:
        cfg = GeneratorConfig(
            node_count=node_count,
            connectivity_tier=ConnectivityTier.MODERATE,
            risky_fraction=0.9,
            max_risky_edges=pairs,
            support_nodes_per_edge=1,
            robot_count=robots,
            seed=seed,
        )
        inst = generate_instance(cfg)
        try:
            result = run_algorithm(inst, SolveOptions(algo="ces", timeout=timeout))
        except ResourceLimitError:
            continue
        runtimes.append(result.runtime_s)
    return {
        "robots": robots,
        "support_pairs": pairs,
        "runtime_s": mean(runtimes) if runtimes else float("nan"),
        "completed": len(runtimes),
    }


def ces_scaling(node_count: int = 10, team_sizes: Sequence[int] = settings.BENCH_TEAM_SIZES,
                pair_counts: Sequence[int] = (2, 3, 4, 5), fixed_pairs: int = 2, fixed_team: int = 3,
                seeds: Sequence[int] = (0, 1, 2), timeout: float = settings.BENCH_TIMEOUT_S) -> CesScalingResult:
    """
    CES runtime against team size at fixed support pairs, and against
    support pairs at fixed team size
    """
    result = CesScalingResult()
    for robots in team_sizes:
        result.team_rows.append(_mean_ces_runtime(node_count, robots, fixed_pairs, seeds, timeout))
    for pairs in pair_counts:
        result.pair_rows.append(_mean_ces_runtime(node_count, fixed_team, pairs, seeds, timeout))

    finished = [r for r in result.team_rows if r["completed"]]
    if len(finished) >= 2:
        result.team_exponent = power_law_exponent(
            [r["robots"] for r in finished], [r["runtime_s"] for r in finished])
    finished_pairs = [r for r in result.pair_rows if r["completed"]]
    if len(finished_pairs) >= 2:
        result.pair_growth = (max(finished_pairs[-1]["runtime_s"], MIN_RUNTIME)
                              / max(finished_pairs[0]["runtime_s"], MIN_RUNTIME))

    logger.info(f"CES scaling: exponent in N {result.team_exponent}, "
                f"growth over support pairs {result.pair_growth}")
    return result


@dataclass
class HorizonSweepResult:
    rows: List[Dict[str, float]] = field(default_factory=list)

    @property
    def runtime_monotone(self) -> bool:
        runtimes = [r["mean_runtime_s"] for r in self.rows]
        return all(a <= b for a, b in zip(runtimes, runtimes[1:]))

    def csv_rows(self) -> List[Dict[str, str]]:
        return [{
            "k": str(int(r["k"])),
            "mean_runtime_s": f"{r['mean_runtime_s']:.6f}",
            "mean_cost": f"{r['mean_cost']:.6f}",
            "completed": str(int(r["completed"])),
        } for r in self.rows]


def rhoc_horizon_sweep(node_counts: Sequence[int] = (10, 15), team_sizes: Sequence[int] = (3, 4, 5),
                       horizons: Sequence[int] = (1, 2, 3, 4), seeds: Sequence[int] = (0, 1, 2),
                       timeout: float = settings.BENCH_TIMEOUT_S) -> HorizonSweepResult:
    """Mean RHOC-A* runtime and cost per horizon on moderate-tier graphs"""
    cases = []
    for n in node_counts:
        for seed in seeds:
            cfg = GeneratorConfig(node_count=n, connectivity_tier=ConnectivityTier.MODERATE, seed=seed)
            graph = generate_graph(cfg)
            for robots in team_sizes:
                if robots <= n:
                    cases.append(generate_instance(cfg.model_copy(update={"robot_count": robots}), graph))

    result = HorizonSweepResult()
    for k in horizons:
        runtimes, costs = [], []
        for inst in cases:
            try:
                run = run_algorithm(inst, SolveOptions(algo="rhoc-astar", k=k, timeout=timeout))
            except ResourceLimitError:
                continue
            runtimes.append(run.runtime_s)
            costs.append(float(run.solution.total_cost))
        result.rows.append({
            "k": k,
            "mean_runtime_s": mean(runtimes) if runtimes else float("nan"),
            "mean_cost": mean(costs) if costs else float("nan"),
            "completed": len(runtimes),
        })
        logger.info(f"RHOC-A* K={k}: {len(runtimes)}/{len(cases)} runs completed")
    return result
