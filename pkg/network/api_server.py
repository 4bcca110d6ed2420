"""
TCGRE Planning Service
FastAPI front end for the central planner
"""
from typing import Any, Dict, Optional
import logging
import os
import sys

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, ConfigDict, Field
import uvicorn

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config import settings
from core.costs import validate_solution
from core.errors import (
    InfeasiblePlanError, InstanceParseError, InstanceValidationError, OracleLimitError, ResourceLimitError,
    SolverTimeout,
)
from core.instance_io import encode_cost, instance_from_dict, solution_from_dict, solution_to_dict
from solvers.registry import ALGORITHMS, SolveOptions, run_algorithm
from solvers.rhoc import PairingRule

logger = logging.getLogger(__name__)

VERSION = "1.0"

app = FastAPI(title="TCGRE Planning API", version=VERSION)

# CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


class SolveRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    instance: Dict[str, Any]
    algo: str = "jsg-astar"
    k: int = Field(default=settings.RHOC_HORIZON, ge=1)
    max_uses: int = Field(default=settings.CES_MAX_USES_PER_PAIR, ge=1)
    timeout: Optional[float] = Field(default=None, gt=0)
    pairing_rule: PairingRule = PairingRule(settings.RHOC_PAIRING_RULE)


class VerifyRequest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    instance: Dict[str, Any]
    solution: Dict[str, Any]


def _load_instance(data: Dict[str, Any]):
    try:
        return instance_from_dict(data)
    except (InstanceParseError, InstanceValidationError) as e:
        raise HTTPException(400, str(e))


@app.get("/")
def root():
    """API root"""
    return {"name": "TCGRE Planning API", "version": VERSION}


@app.get("/health")
def health():
    """Health check"""
    return {"status": "ok"}


@app.get("/algorithms")
def algorithms():
    """Algorithm ids accepted by /solve"""
    return {"algorithms": list(ALGORITHMS)}


@app.post("/solve")
def solve(request: SolveRequest):
    """Solve an instance"""
    inst = _load_instance(request.instance)
    if request.algo not in ALGORITHMS:
        raise HTTPException(400, f"unknown algorithm '{request.algo}'")

    options = SolveOptions(
        algo=request.algo,
        k=request.k,
        max_uses=request.max_uses,
        timeout=request.timeout or settings.API_DEFAULT_TIMEOUT_S,
        pairing_rule=request.pairing_rule,
    )
    try:
        result = run_algorithm(inst, options)
    except SolverTimeout as e:
        raise HTTPException(408, str(e))
    except (ResourceLimitError, OracleLimitError, InfeasiblePlanError) as e:
        raise HTTPException(400, str(e))

    logger.info(f"Solved with {request.algo}: cost {result.solution.total_cost}")
    return {
        "algorithm": result.algorithm,
        "cost": encode_cost(result.solution.total_cost),
        "runtime_s": round(result.runtime_s, 6),
        "counters": result.counters,
        "solution": solution_to_dict(result.solution),
    }


@app.post("/verify")
def verify(request: VerifyRequest):
    """Recompute a plan's cost"""
    inst = _load_instance(request.instance)
    try:
        sol = solution_from_dict(request.solution)
    except InstanceParseError as e:
        raise HTTPException(400, str(e))

    check = validate_solution(inst, sol)
    return {
        "valid": check.ok,
        "cost": encode_cost(check.cost) if check.cost is not None else None,
        "violations": check.violations,
    }


if __name__ == "__main__":
    logging.basicConfig(level=settings.LOG_LEVEL)
    print("🚀 Starting TCGRE Planning API...")
    uvicorn.run(app, host=settings.API_HOST, port=settings.API_PORT)
