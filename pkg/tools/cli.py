"""
TCGRE command line
generate / solve / verify / bench
"""
from pathlib import Path
from typing import List, Optional
import logging
import os
import sys

import click
from pydantic import ValidationError

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from bench.experiments import ces_scaling, rhoc_horizon_sweep
from bench.generator import GeneratorConfig, generate_instance
from bench.metrics import BenchMetrics
from bench.reports import emit_reports, write_csv
from bench.runner import SuiteConfig, run_suite
from config import settings
from core.costs import validate_solution
from core.errors import OracleLimitError, ResourceLimitError, TcgreError
from core.instance_io import encode_cost, load_instance, load_solution, save_instance, save_solution, write_instance
from core.model import ConnectivityTier
from solvers.registry import ALGORITHMS, SolveOptions, run_algorithm
from solvers.rhoc import PairingRule

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_LIMIT = 2
EXIT_USAGE = 64

TIERS = [t.value for t in ConnectivityTier]


@click.group()
@click.option("--log-level", default=settings.LOG_LEVEL, show_default=True, help="Logging level")
def cli(log_level: str):
    """Team coordination planning on graphs with risky edges"""
    logging.getLogger().setLevel(log_level.upper())


@cli.command()
@click.option("--nodes", type=int, default=10, show_default=True)
@click.option("--tier", type=click.Choice(TIERS), default="sparse", show_default=True)
@click.option("--robots", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--risky-fraction", type=float, default=settings.GEN_RISKY_FRACTION, show_default=True)
@click.option("--max-risky-edges", type=int, default=settings.GEN_MAX_RISKY_EDGES, show_default=True)
@click.option("--support-nodes", type=int, default=settings.GEN_SUPPORT_NODES_PER_EDGE, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Instance file (stdout if omitted)")
def generate(nodes, tier, robots, seed, risky_fraction, max_risky_edges, support_nodes, out):
    """Generate a random instance"""
    cfg = GeneratorConfig(
        node_count=nodes, connectivity_tier=tier, robot_count=robots, seed=seed,
        risky_fraction=risky_fraction, max_risky_edges=max_risky_edges,
        support_nodes_per_edge=support_nodes,
    )
    inst = generate_instance(cfg)
    if out:
        save_instance(out, inst)
        click.echo(f"✓ Instance written to {out}")
    else:
        click.echo(write_instance(inst), nl=False)
    return EXIT_OK


@cli.command()
@click.argument("instance", type=click.Path(exists=True, dir_okay=False))
@click.option("--algo", type=click.Choice(ALGORITHMS), default="jsg-astar", show_default=True)
@click.option("--k", "k", type=int, default=settings.RHOC_HORIZON, show_default=True, help="RHOC-A* horizon")
@click.option("--max-uses", type=int, default=settings.CES_MAX_USES_PER_PAIR, show_default=True,
              help="CES uses per support pair")
@click.option("--timeout", type=float, default=None, help="Wall-clock budget in seconds")
@click.option("--pairing-rule", type=click.Choice([r.value for r in PairingRule]),
              default=settings.RHOC_PAIRING_RULE, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Solution file")
def solve(instance, algo, k, max_uses, timeout, pairing_rule, out):
    """Solve an instance file"""
    inst = load_instance(instance)
    options = SolveOptions(algo=algo, k=k, max_uses=max_uses, timeout=timeout, pairing_rule=pairing_rule)
    result = run_algorithm(inst, options)

    check = validate_solution(inst, result.solution)
    if not check.ok:
        for violation in check.violations:
            click.echo(f"✗ {violation}", err=True)
        return EXIT_FAILURE

    if out:
        save_solution(out, result.solution)
    click.echo(f"cost {encode_cost(result.solution.total_cost)}")
    for name, value in result.counters.items():
        click.echo(f"  {name}: {value}")
    return EXIT_OK


@cli.command()
@click.argument("instance", type=click.Path(exists=True, dir_okay=False))
@click.argument("solution", type=click.Path(exists=True, dir_okay=False))
def verify(instance, solution):
    """Recompute a plan's cost or list its violations"""
    inst = load_instance(instance)
    sol = load_solution(solution)
    check = validate_solution(inst, sol)
    if not check.ok:
        for violation in check.violations:
            click.echo(f"✗ {violation}")
        return EXIT_FAILURE
    click.echo(f"{encode_cost(check.cost)}")
    return EXIT_OK


@cli.command()
@click.option("--experiment", type=click.Choice(["suite", "ces-scaling", "rhoc-horizon"]),
              default="suite", show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default="results", show_default=True)
@click.option("--algo", "algorithms", multiple=True, type=click.Choice(ALGORITHMS),
              help="Algorithm (repeatable)")
@click.option("--nodes", "node_counts", multiple=True, type=int, help="Node count (repeatable)")
@click.option("--robots", "team_sizes", multiple=True, type=int, help="Team size (repeatable)")
@click.option("--graphs-per-tier", type=int, default=settings.BENCH_GRAPHS_PER_TIER, show_default=True)
@click.option("--timeout", type=float, default=settings.BENCH_TIMEOUT_S, show_default=True)
@click.option("--workers", type=int, default=settings.BENCH_WORKERS, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Base seed")
@click.option("--k", "k", type=int, default=settings.RHOC_HORIZON, show_default=True)
@click.option("--max-uses", type=int, default=settings.CES_MAX_USES_PER_PAIR, show_default=True)
def bench(experiment, out, algorithms, node_counts, team_sizes, graphs_per_tier, timeout, workers,
          seed, k, max_uses):
    """Run the benchmark suite or a focused experiment"""
    out_dir = Path(out)

    if experiment == "ces-scaling":
        result = ces_scaling(
            node_count=node_counts[0] if node_counts else 10,
            team_sizes=team_sizes or settings.BENCH_TEAM_SIZES,
            seeds=tuple(range(seed, seed + graphs_per_tier)),
            timeout=timeout,
        )
        out_dir.mkdir(parents=True, exist_ok=True)
        write_csv(result.rows(), out_dir / "ces_scaling.csv",
                  ("sweep", "robots", "support_pairs", "runtime_s", "completed"))
        click.echo(f"exponent in N: {result.team_exponent}")
        click.echo(f"growth over support pairs: {result.pair_growth}")
        return EXIT_OK

    if experiment == "rhoc-horizon":
        result = rhoc_horizon_sweep(
            node_counts=node_counts or (10, 15),
            team_sizes=team_sizes or (3, 4, 5),
            seeds=tuple(range(seed, seed + graphs_per_tier)),
            timeout=timeout,
        )
        out_dir.mkdir(parents=True, exist_ok=True)
        write_csv(result.csv_rows(), out_dir / "rhoc_horizon.csv",
                  ("k", "mean_runtime_s", "mean_cost", "completed"))
        click.echo(f"runtime monotone in K: {result.runtime_monotone}")
        return EXIT_OK

    overrides = dict(
        graphs_per_tier=graphs_per_tier, timeout=timeout, workers=workers,
        base_seed=seed, k=k, max_uses=max_uses,
    )
    if algorithms:
        overrides["algorithms"] = list(algorithms)
    if node_counts:
        overrides["node_counts"] = list(node_counts)
    if team_sizes:
        overrides["team_sizes"] = list(team_sizes)
    cfg = SuiteConfig(**overrides)

    metrics = BenchMetrics()
    records = run_suite(cfg, metrics)
    paths = emit_reports(records, out_dir, metrics=metrics)
    completed = sum(1 for r in records if r.completed)
    click.echo(f"✓ {completed}/{len(records)} cells completed")
    click.echo(f"✓ CSV: {paths.csv}")
    for plot in paths.plots:
        click.echo(f"✓ Plot: {plot}")
    return EXIT_OK


def cli_main(args: Optional[List[str]] = None) -> int:
    """
    Run the CLI and map outcomes to exit codes

    Returns:
        0 success, 1 validation or infeasible, 2 resource limit or timeout,
        64 usage error
    """
    logging.basicConfig(level=settings.LOG_LEVEL)
    try:
        rv = cli.main(args=args, prog_name="tcgre", standalone_mode=False)
    except click.UsageError as e:
        e.show()
        return EXIT_USAGE
    except (ResourceLimitError, OracleLimitError) as e:
        click.echo(f"✗ {e}", err=True)
        return EXIT_LIMIT
    except (TcgreError, ValidationError, ValueError, OSError) as e:
        click.echo(f"✗ {e}", err=True)
        return EXIT_FAILURE
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        return EXIT_FAILURE
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(cli_main())
