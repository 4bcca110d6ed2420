"""
Algorithm dispatch
One entry point shared by the CLI, the benchmark runner and the planning service
"""
from __future__ import annotations
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple
import logging
import time

from pydantic import BaseModel, ConfigDict, Field, field_validator

from config import settings
from core.budget import SearchBudget
from core.model import ProblemInstance, Solution
from core.routing import naive_solve
from solvers.ces import solve_ces
from solvers.jsg import solve_astar, solve_ucs
from solvers.oracle import oracle_solve
from solvers.rhoc import PairingRule, RhocConfig, solve_rhoc

logger = logging.getLogger(__name__)

ALGORITHMS = ("naive", "jsg-ucs", "jsg-astar", "ces", "rhoc-astar", "oracle")
EXACT_ALGORITHMS = ("jsg-ucs", "jsg-astar", "oracle")


class SolveOptions(BaseModel):
    """Per-run solver options"""
    model_config = ConfigDict(extra="forbid")

    algo: str = "jsg-astar"
    k: int = Field(default=settings.RHOC_HORIZON, ge=1)
    max_uses: int = Field(default=settings.CES_MAX_USES_PER_PAIR, ge=1)
    timeout: Optional[float] = Field(default=None, gt=0)
    pairing_rule: PairingRule = PairingRule(settings.RHOC_PAIRING_RULE)

    @field_validator("algo")
    @classmethod
    def known_algorithm(cls, value: str) -> str:
        if value not in ALGORITHMS:
            raise ValueError(f"unknown algorithm '{value}', expected one of {', '.join(ALGORITHMS)}")
        return value


@dataclass
class SolveResult:
    """Solution plus effort counters of one run"""
    algorithm: str
    solution: Solution
    runtime_s: float
    counters: Dict[str, int] = field(default_factory=dict)

    @property
    def expanded(self) -> Optional[int]:
        if "states_expanded" in self.counters:
            return self.counters["states_expanded"]
        return self.counters.get("nodes")

    @property
    def cost_calcs(self) -> Optional[int]:
        return self.counters.get("cost_calculations")

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "total_cost": str(self.solution.total_cost),
            "runtime_s": round(self.runtime_s, 6),
            "counters": dict(self.counters),
        }


def _run(inst: ProblemInstance, options: SolveOptions, budget: SearchBudget) -> Tuple[Solution, Dict[str, int]]:
    algo = options.algo
    if algo == "naive":
        return naive_solve(inst), {}
    if algo == "jsg-ucs":
        sol, stats = solve_ucs(inst, budget=budget)
        return sol, stats.to_dict()
    if algo == "jsg-astar":
        sol, stats = solve_astar(inst, budget=budget)
        return sol, stats.to_dict()
    if algo == "ces":
        sol, counters = solve_ces(inst, max_uses_per_pair=options.max_uses, budget=budget)
        return sol, counters.to_dict()
    if algo == "rhoc-astar":
        cfg = RhocConfig(horizon=options.k, pairing_rule=options.pairing_rule)
        sol, stats = solve_rhoc(inst, cfg, budget=budget)
        return sol, stats.to_dict()
    sol, _ = oracle_solve(inst, budget=budget)
    return sol, {}


def _default_cap(algo: str) -> Optional[int]:
    if algo in ("jsg-ucs", "jsg-astar"):
        return settings.JSG_MAX_EXPANSIONS
    if algo == "ces":
        return settings.CES_MAX_COST_CALCULATIONS
    return None


def run_algorithm(inst: ProblemInstance, options: Optional[SolveOptions] = None, **kwargs) -> SolveResult:
    """
    Solve an instance with the named algorithm

    Args:
        inst: Validated instance
        options: Solver options (keyword arguments build one if omitted)

    Returns:
        SolveResult

    Raises:
        ResourceLimitError: cap exceeded or timeout (SolverTimeout)
        OracleLimitError: oracle asked for a too-large instance
    """
    options = options or SolveOptions(**kwargs)
    budget = SearchBudget(max_units=_default_cap(options.algo), timeout_s=options.timeout,
                          label=options.algo)
    started = time.perf_counter()
    solution, counters = _run(inst, options, budget)
    runtime = time.perf_counter() - started
    logger.info(f"{options.algo}: cost {solution.total_cost} in {runtime:.3f}s")
    return SolveResult(options.algo, solution, runtime, counters)
