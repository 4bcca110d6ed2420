"""
Benchmark runner
Runs every (instance, team size, algorithm) cell under a wall-clock budget
and turns the outcomes into records with optimality ratios
"""
from __future__ import annotations
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from pydantic import BaseModel, ConfigDict, Field, field_validator

from bench.generator import generate_graph, generate_instance, suite_configs
from bench.metrics import BenchMetrics
from config import settings
from core.costs import validate_solution
from core.errors import GeneratorConfigError, ResourceLimitError, SolverTimeout, TcgreError
from core.model import ConnectivityTier, InstanceDescriptor, ProblemInstance
from core.routing import naive_solve
from solvers.registry import ALGORITHMS, EXACT_ALGORITHMS, SolveOptions, run_algorithm
from solvers.rhoc import PairingRule

logger = logging.getLogger(__name__)

CSV_FIELDS = ("algo", "nodes", "edges", "risky", "support_pairs", "robots", "tier", "seed",
              "cost", "true_opt", "naive_opt", "runtime_s", "timeout", "expanded", "cost_calcs")


class SuiteConfig(BaseModel):
    """Benchmark suite: graphs, team sizes, algorithms and limits"""
    model_config = ConfigDict(extra="forbid")

    node_counts: List[int] = list(settings.BENCH_NODE_COUNTS)
    tiers: List[ConnectivityTier] = list(ConnectivityTier)
    graphs_per_tier: int = Field(default=settings.BENCH_GRAPHS_PER_TIER, ge=1)
    team_sizes: List[int] = list(settings.BENCH_TEAM_SIZES)
    algorithms: List[str] = list(settings.BENCH_ALGORITHMS)
    timeout: float = Field(default=settings.BENCH_TIMEOUT_S, gt=0)
    workers: int = Field(default=settings.BENCH_WORKERS, ge=1)
    base_seed: int = 0
    k: int = Field(default=settings.RHOC_HORIZON, ge=1)
    max_uses: int = Field(default=settings.CES_MAX_USES_PER_PAIR, ge=1)
    pairing_rule: PairingRule = PairingRule(settings.RHOC_PAIRING_RULE)
    risky_fraction: float = Field(default=settings.GEN_RISKY_FRACTION, ge=0, lt=1)
    max_risky_edges: Optional[int] = Field(default=settings.GEN_MAX_RISKY_EDGES, ge=0)
    support_nodes_per_edge: int = Field(default=settings.GEN_SUPPORT_NODES_PER_EDGE, ge=1)

    @field_validator("algorithms")
    @classmethod
    def known_algorithms(cls, value: List[str]) -> List[str]:
        if not value:
            raise ValueError("at least one algorithm is required")
        unknown = [a for a in value if a not in ALGORITHMS]
        if unknown:
            raise ValueError(f"unknown algorithms: {', '.join(unknown)}")
        return value


@dataclass(frozen=True)
class BenchRecord:
    """Outcome of one benchmark cell"""
    algorithm: str
    descriptor: InstanceDescriptor
    cost: Optional[Fraction]
    naive_cost: Fraction
    runtime_s: float
    timeout: bool = False
    status: str = "ok"  # ok, timeout or error
    true_optimality: Optional[Fraction] = None
    naive_optimality: Optional[Fraction] = None
    expanded: Optional[int] = None
    cost_calcs: Optional[int] = None
    error: str = ""

    @property
    def completed(self) -> bool:
        return self.status == "ok"

    def with_optimal(self, optimal: Optional[Fraction]) -> BenchRecord:
        """Fill both optimality ratios"""
        if not self.completed:
            return self
        true_opt = _ratio(optimal, self.cost) if optimal is not None else None
        return replace(self, true_optimality=true_opt, naive_optimality=_ratio(self.naive_cost, self.cost))

    def to_row(self) -> Dict[str, str]:
        """CSV row keyed by CSV_FIELDS"""
        d = self.descriptor

        def fmt(value) -> str:
            if value is None:
                return ""
            if isinstance(value, Fraction):
                return f"{float(value):.10g}"
            return str(value)

        return {
            "algo": self.algorithm,
            "nodes": str(d.node_count),
            "edges": str(d.edge_count),
            "risky": str(d.risky_count),
            "support_pairs": str(d.support_pair_count),
            "robots": str(d.robot_count),
            "tier": d.connectivity_tier,
            "seed": fmt(d.seed),
            "cost": fmt(self.cost),
            "true_opt": fmt(self.true_optimality),
            "naive_opt": fmt(self.naive_optimality),
            "runtime_s": f"{self.runtime_s:.6f}",
            "timeout": "1" if self.timeout else "0",
            "expanded": fmt(self.expanded),
            "cost_calcs": fmt(self.cost_calcs),
        }


def _ratio(numerator: Fraction, denominator: Fraction) -> Fraction:
    if denominator == 0:
        return Fraction(1)
    return Fraction(numerator) / Fraction(denominator)


def run_cell(inst: ProblemInstance, descriptor: InstanceDescriptor, options: SolveOptions,
             naive_cost: Optional[Fraction] = None) -> BenchRecord:
    """
    Run one algorithm on one instance; failures become records

    Every returned solution is checked before it counts as completed.
    """
    naive_cost = naive_cost if naive_cost is not None else naive_solve(inst).total_cost
    base = dict(algorithm=options.algo, descriptor=descriptor, naive_cost=naive_cost)
    try:
        result = run_algorithm(inst, options)
    except SolverTimeout as e:
        logger.warning(f"⏱️ {options.algo} timed out on seed {descriptor.seed}, N={descriptor.robot_count}")
        return BenchRecord(cost=None, runtime_s=options.timeout or 0.0, timeout=True, status="timeout",
                           error=str(e), **base)
    except ResourceLimitError as e:
        logger.warning(f"{options.algo} hit its cap on seed {descriptor.seed}: {e}")
        return BenchRecord(cost=None, runtime_s=e.diagnostics.get("elapsed_s", 0.0), timeout=True,
                           status="timeout", error=str(e), **base)
    except TcgreError as e:
        logger.warning(f"{options.algo} failed on seed {descriptor.seed}: {e}")
        return BenchRecord(cost=None, runtime_s=0.0, status="error", error=str(e), **base)

    check = validate_solution(inst, result.solution)
    if not check.ok:
        logger.error(f"❌ {options.algo} produced an invalid plan: {check.violations[0]}")
        return BenchRecord(cost=None, runtime_s=result.runtime_s, status="error",
                           error="; ".join(check.violations), **base)

    return BenchRecord(
        cost=result.solution.total_cost,
        runtime_s=result.runtime_s,
        expanded=result.expanded,
        cost_calcs=result.cost_calcs,
        **base,
    )


def _run_cell_args(args: Tuple[ProblemInstance, InstanceDescriptor, SolveOptions, Fraction]) -> BenchRecord:
    return run_cell(*args)


def run_bench(cases: Sequence[Tuple[ProblemInstance, InstanceDescriptor]], algorithms: Sequence[str],
              per_run_timeout: float = settings.BENCH_TIMEOUT_S, workers: int = 1,
              options: Optional[SolveOptions] = None,
              metrics: Optional[BenchMetrics] = None) -> List[BenchRecord]:
    """
    Benchmark every (case, algorithm) cell

    Args:
        cases: Instances with their descriptors
        algorithms: Algorithm ids
        per_run_timeout: Wall-clock seconds per cell
        workers: Process pool size (1 runs in-process)
        options: Template for k / max_uses / pairing rule
        metrics: Counters to update

    Returns:
        Records ordered by (case, algorithm)
    """
    if not algorithms:
        raise ValueError("at least one algorithm is required")
    template = options or SolveOptions()

    naive_costs = [naive_solve(inst).total_cost for inst, _ in cases]
    cells = []
    for i, (inst, descriptor) in enumerate(cases):
        for algo in algorithms:
            cell_options = template.model_copy(update={"algo": algo, "timeout": per_run_timeout})
            cells.append((inst, descriptor, cell_options, naive_costs[i]))

    logger.info(f"🏁 Benchmark: {len(cases)} instances × {len(algorithms)} algorithms, "
                f"{per_run_timeout}s per cell, {workers} worker(s)")

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(_run_cell_args, cells))
    else:
        raw = [_run_cell_args(cell) for cell in cells]

    records = []
    per_case = len(algorithms)
    for i in range(len(cases)):
        group = raw[i * per_case:(i + 1) * per_case]
        exact = [r.cost for r in group if r.completed and r.algorithm in EXACT_ALGORITHMS]
        optimal = min(exact) if exact else None
        if exact and len(set(exact)) > 1:
            logger.error(f"❌ Exact algorithms disagree on case {i}: {sorted(set(exact))}")
        for record in group:
            record = record.with_optimal(optimal)
            if optimal is not None and record.cost is not None and record.cost < optimal:
                logger.error(f"❌ {record.algorithm} beat the optimum on case {i}")
            records.append(record)
            if metrics is not None:
                metrics.observe(record.algorithm, record.status, record.runtime_s)

    done = sum(1 for r in records if r.completed)
    logger.info(f"✅ Benchmark finished: {done}/{len(records)} cells completed")
    return records


def build_cases(cfg: SuiteConfig) -> List[Tuple[ProblemInstance, InstanceDescriptor]]:
    """Suite graphs crossed with team sizes; one graph serves every team size"""
    cases = []
    configs = suite_configs(
        cfg.node_counts, cfg.tiers, cfg.graphs_per_tier, cfg.base_seed,
        risky_fraction=cfg.risky_fraction, max_risky_edges=cfg.max_risky_edges,
        support_nodes_per_edge=cfg.support_nodes_per_edge,
    )
    for gen_cfg in configs:
        graph = generate_graph(gen_cfg)
        for team_size in cfg.team_sizes:
            sized = gen_cfg.model_copy(update={"robot_count": team_size})
            try:
                inst = generate_instance(sized, graph)
            except GeneratorConfigError as e:
                logger.warning(f"Skipping seed {gen_cfg.seed}, N={team_size}: {e}")
                continue
            descriptor = InstanceDescriptor.from_instance(inst, gen_cfg.connectivity_tier.value, gen_cfg.seed)
            cases.append((inst, descriptor))
    return cases


def run_suite(cfg: SuiteConfig, metrics: Optional[BenchMetrics] = None) -> List[BenchRecord]:
    """Generate the suite and benchmark it"""
    cases = build_cases(cfg)
    options = SolveOptions(k=cfg.k, max_uses=cfg.max_uses, pairing_rule=cfg.pairing_rule)
    return run_bench(cases, cfg.algorithms, cfg.timeout, cfg.workers, options, metrics)
