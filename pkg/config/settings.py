"""
TCGRE Planner Configuration
Defaults for solvers, generator and benchmark harness.
Every value can be overridden through the environment or a .env file.
"""
import os

from dotenv import load_dotenv

load_dotenv()


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    return int(value) if value not in (None, "") else default


def _env_float(name: str, default: float) -> float:
    value = os.environ.get(name)
    return float(value) if value not in (None, "") else default


def _env_str(name: str, default: str) -> str:
    return os.environ.get(name) or default


def _env_ints(name: str, default: tuple) -> tuple:
    value = os.environ.get(name)
    if not value:
        return default
    return tuple(int(part) for part in value.split(",") if part.strip())


# Logging
LOG_LEVEL = _env_str("TCGRE_LOG_LEVEL", "INFO")

# JSG search
JSG_MAX_EXPANSIONS = _env_int("TCGRE_JSG_MAX_EXPANSIONS", 10_000_000)

# Coordination-exhaustive search
CES_MAX_COST_CALCULATIONS = _env_int("TCGRE_CES_MAX_COST_CALCULATIONS", 1_000_000)
CES_MAX_USES_PER_PAIR = _env_int("TCGRE_CES_MAX_USES_PER_PAIR", 1)

# Receding horizon
RHOC_HORIZON = _env_int("TCGRE_RHOC_HORIZON", 2)  # steps per window
RHOC_PAIRING_RULE = _env_str("TCGRE_RHOC_PAIRING_RULE", "index_order")
RHOC_STEP_CAP_FACTOR = _env_int("TCGRE_RHOC_STEP_CAP_FACTOR", 4)  # rounds per node

# Oracle
ORACLE_MAX_NODES = _env_int("TCGRE_ORACLE_MAX_NODES", 6)
ORACLE_MAX_ROBOTS = _env_int("TCGRE_ORACLE_MAX_ROBOTS", 3)
ORACLE_STEP_FACTOR = _env_int("TCGRE_ORACLE_STEP_FACTOR", 2)  # T = factor * |V|

# Benchmark
BENCH_TIMEOUT_S = _env_float("TCGRE_BENCH_TIMEOUT_S", 60.0)  # seconds per cell
BENCH_WORKERS = _env_int("TCGRE_BENCH_WORKERS", 1)
BENCH_NODE_COUNTS = _env_ints("TCGRE_BENCH_NODE_COUNTS", (10, 15, 20, 25, 30))
BENCH_TEAM_SIZES = _env_ints("TCGRE_BENCH_TEAM_SIZES", (3, 4, 5, 6, 7))
BENCH_GRAPHS_PER_TIER = _env_int("TCGRE_BENCH_GRAPHS_PER_TIER", 3)
BENCH_ALGORITHMS = ("jsg-ucs", "jsg-astar", "ces", "rhoc-astar")

# Instance generator
GEN_RISKY_FRACTION = _env_float("TCGRE_GEN_RISKY_FRACTION", 0.1)
GEN_MAX_RISKY_EDGES = _env_int("TCGRE_GEN_MAX_RISKY_EDGES", 2)
GEN_SUPPORT_NODES_PER_EDGE = _env_int("TCGRE_GEN_SUPPORT_NODES_PER_EDGE", 1)
GEN_BASE_COST_RANGE = (1, 10)
GEN_RISKY_BASE_RANGE = (20, 100)
GEN_REDUCED_COST_RANGE = (1, 5)
GEN_SUPPORTER_COST = 2
GEN_SPARSE_EXTRA_EDGE_RATIO = 0.05  # extra edges per node on top of the tree
GEN_DENSE_EDGE_PROBABILITY = 0.5

# Cost comparison at I/O boundaries
COST_TOLERANCE = 1e-9

# Planning service
API_HOST = _env_str("TCGRE_API_HOST", "0.0.0.0")
API_PORT = _env_int("TCGRE_API_PORT", 5000)
API_DEFAULT_TIMEOUT_S = _env_float("TCGRE_API_TIMEOUT_S", 30.0)
