import time

import pytest

from core.budget import SearchBudget
from core.errors import ResourceLimitError, SolverTimeout


def test_unit_cap():
    budget = SearchBudget(max_units=2, label="window")
    budget.charge()
    budget.charge()
    with pytest.raises(ResourceLimitError) as excinfo:
        budget.charge()
    assert not isinstance(excinfo.value, SolverTimeout)
    assert excinfo.value.diagnostics["label"] == "window"
    assert excinfo.value.diagnostics["used"] == 3


def test_deadline():
    budget = SearchBudget(timeout_s=0.001)
    time.sleep(0.01)
    with pytest.raises(SolverTimeout):
        budget.charge()
    assert budget.remaining_time() == 0.0


def test_no_limits_never_raises():
    budget = SearchBudget()
    budget.charge(10_000)
    assert budget.used == 10_000
    assert budget.remaining_time() is None


def test_rejects_bad_limits():
    with pytest.raises(ValueError):
        SearchBudget(max_units=-1)
    with pytest.raises(ValueError):
        SearchBudget(timeout_s=0)
