import csv

import pytest

from bench.metrics import BenchMetrics
from bench.reports import emit_reports, write_csv
from bench.runner import CSV_FIELDS, run_bench
from core.errors import ReportError
from core.model import InstanceDescriptor


@pytest.fixture
def records(t1):
    case = (t1, InstanceDescriptor.from_instance(t1, "sparse", 0))
    metrics = BenchMetrics()
    return run_bench([case], ["naive", "jsg-astar", "rhoc-astar"], per_run_timeout=10, metrics=metrics), metrics


def test_emit_reports(tmp_path, records):
    rows, metrics = records
    paths = emit_reports(rows, tmp_path / "out", metrics=metrics)

    with open(paths.csv, newline="") as f:
        table = list(csv.DictReader(f))
    assert list(table[0]) == list(CSV_FIELDS)
    assert [r["algo"] for r in table] == ["naive", "jsg-astar", "rhoc-astar"]

    assert [p.name for p in paths.plots] == ["bench_true_opt.svg", "bench_naive_opt.svg"]
    for plot in paths.plots:
        assert "<svg" in plot.read_text()

    assert "tcgre_bench_cells_total" in paths.metrics.read_text()


def test_no_records_is_an_error(tmp_path):
    with pytest.raises(ReportError):
        emit_reports([], tmp_path)


def test_unwritable_csv(tmp_path):
    with pytest.raises(ReportError) as excinfo:
        write_csv([], tmp_path / "missing" / "bench.csv")
    assert "bench.csv" in excinfo.value.path
