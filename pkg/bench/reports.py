"""
Benchmark reports
CSV table, optimality-vs-runtime scatter plots (SVG) and a metrics file
"""
from __future__ import annotations
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union
import csv
import logging

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from bench.metrics import BenchMetrics  # noqa: E402
from bench.runner import CSV_FIELDS, BenchRecord  # noqa: E402
from core.errors import ReportError  # noqa: E402

logger = logging.getLogger(__name__)

MIN_PLOT_RUNTIME = 1e-6  # log axis floor

PLOTTED_METRICS = {
    "true_opt": ("true_optimality", "True optimality"),
    "naive_opt": ("naive_optimality", "Naive optimality"),
}


@dataclass
class ReportPaths:
    csv: Path
    plots: List[Path] = field(default_factory=list)
    metrics: Optional[Path] = None


def write_csv(rows: Sequence[Dict[str, str]], path: Union[str, Path],
              fieldnames: Sequence[str] = CSV_FIELDS) -> Path:
    """Write rows with a header; I/O failures raise ReportError"""
    path = Path(path)
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=list(fieldnames))
            writer.writeheader()
            writer.writerows(rows)
    except OSError as e:
        logger.error(f"Cannot write {path}: {e}")
        raise ReportError(str(path), str(e))
    logger.info(f"📄 Wrote {len(rows)} rows to {path}")
    return path


def scatter_plot(records: Sequence[BenchRecord], metric: str, path: Union[str, Path]) -> Path:
    """
    Optimality against log runtime, one series per algorithm
    Timed-out cells have no point
    """
    attribute, label = PLOTTED_METRICS[metric]
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6, 4))
    try:
        algorithms = sorted({r.algorithm for r in records})
        for algo in algorithms:
            points = [
                (max(r.runtime_s, MIN_PLOT_RUNTIME), float(getattr(r, attribute)))
                for r in records
                if r.algorithm == algo and r.completed and getattr(r, attribute) is not None
            ]
            if points:
                xs, ys = zip(*points)
                ax.scatter(xs, ys, label=algo, s=18, alpha=0.7)
        ax.set_xscale("log")
        ax.set_xlabel("Runtime (s)")
        ax.set_ylabel(label)
        ax.set_title(f"{label} vs. runtime")
        if ax.get_legend_handles_labels()[0]:
            ax.legend(loc="lower right", fontsize="small")
        fig.tight_layout()
        fig.savefig(path, format="svg")
    except OSError as e:
        logger.error(f"Cannot write {path}: {e}")
        raise ReportError(str(path), str(e))
    finally:
        plt.close(fig)
    return path


def emit_reports(records: Sequence[BenchRecord], out_dir: Union[str, Path], prefix: str = "bench",
                 metrics: Optional[BenchMetrics] = None) -> ReportPaths:
    """
    Write the CSV, one SVG per optimality metric and the metrics file

    Args:
        records: Benchmark records (must not be empty)
        out_dir: Output directory, created if missing
        prefix: File name prefix
        metrics: Metrics to persist next to the CSV

    Returns:
        ReportPaths
    """
    out_dir = Path(out_dir)
    if not records:
        raise ReportError(str(out_dir), "no benchmark records to report")
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        logger.error(f"Cannot create {out_dir}: {e}")
        raise ReportError(str(out_dir), str(e))

    paths = ReportPaths(csv=write_csv([r.to_row() for r in records], out_dir / f"{prefix}.csv"))
    for metric in PLOTTED_METRICS:
        paths.plots.append(scatter_plot(records, metric, out_dir / f"{prefix}_{metric}.svg"))

    if metrics is not None:
        paths.metrics = out_dir / f"{prefix}.prom"
        try:
            metrics.write(paths.metrics)
        except OSError as e:
            logger.error(f"Cannot write {paths.metrics}: {e}")
            raise ReportError(str(paths.metrics), str(e))
    return paths
