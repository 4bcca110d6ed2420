"""
Benchmark metrics
Prometheus counters for cell outcomes, written as a textfile-collector file
"""
from pathlib import Path
from typing import Union
import logging

from prometheus_client import CollectorRegistry, Counter, Histogram, write_to_textfile

logger = logging.getLogger(__name__)

RUNTIME_BUCKETS = (0.001, 0.01, 0.1, 0.5, 1.0, 5.0, 10.0, 30.0, 60.0, 120.0)


class BenchMetrics:
    """Cell counters in a private registry"""

    def __init__(self):
        self.registry = CollectorRegistry()
        self.cells = Counter(
            "tcgre_bench_cells",
            "Benchmark cells by algorithm and outcome",
            ["algo", "status"],
            registry=self.registry,
        )
        self.runtime = Histogram(
            "tcgre_bench_cell_runtime_seconds",
            "Wall-clock runtime of benchmark cells",
            ["algo"],
            buckets=RUNTIME_BUCKETS,
            registry=self.registry,
        )

    def observe(self, algo: str, status: str, runtime_s: float) -> None:
        self.cells.labels(algo=algo, status=status).inc()
        self.runtime.labels(algo=algo).observe(runtime_s)

    def cell_count(self, algo: str, status: str) -> float:
        value = self.registry.get_sample_value(
            "tcgre_bench_cells_total", {"algo": algo, "status": status})
        return value or 0.0

    def write(self, path: Union[str, Path]) -> None:
        write_to_textfile(str(path), self.registry)
        logger.info(f"📈 Metrics written to {path}")
