"""
TCGRE Search Budget
Work metering for the solvers
Caps expansions / cost calculations and enforces wall-clock deadlines
"""
import time
import logging
from typing import Optional

from core.errors import ResourceLimitError, SolverTimeout

logger = logging.getLogger(__name__)


class SearchBudget:
    """
    Meters units of search work
    One unit is whatever the solver counts: a state expansion, a cost
    calculation, a window node or an oracle layer entry
    """

    def __init__(self, max_units: Optional[int] = None,
                 timeout_s: Optional[float] = None, label: str = "search"):
        """
        Initialize budget

        Args:
            max_units: Unit cap (None for unlimited)
            timeout_s: Wall-clock allowance in seconds (None for unlimited)
            label: Name used in error messages
        """
        if max_units is not None and max_units < 0:
            raise ValueError("max_units must be non-negative")
        if timeout_s is not None and timeout_s <= 0:
            raise ValueError("timeout_s must be positive")

        self.max_units = max_units
        self.timeout_s = timeout_s
        self.label = label
        self.used = 0
        self.started = time.monotonic()
        self.deadline = self.started + timeout_s if timeout_s is not None else None

    def charge(self, units: int = 1) -> None:
        """
        Record work and enforce the limits

        Raises:
            ResourceLimitError: unit cap exceeded
            SolverTimeout: deadline passed
        """
        self.used += units

        if self.max_units is not None and self.used > self.max_units:
            logger.warning(f"{self.label}: unit cap {self.max_units} exceeded")
            raise ResourceLimitError(
                f"{self.label} exceeded {self.max_units} units",
                diagnostics=self.to_dict(),
            )

        if self.deadline is not None and time.monotonic() > self.deadline:
            logger.warning(f"{self.label}: timed out after {self.timeout_s}s")
            raise SolverTimeout(
                f"{self.label} timed out after {self.timeout_s}s",
                diagnostics=self.to_dict(),
            )

    def elapsed(self) -> float:
        """Seconds since creation"""
        return time.monotonic() - self.started

    def remaining_time(self) -> Optional[float]:
        """Seconds left before the deadline (None if unlimited)"""
        if self.deadline is None:
            return None
        return max(0.0, self.deadline - time.monotonic())

    def to_dict(self) -> dict:
        """Export usage"""
        return {
            'label': self.label,
            'used': self.used,
            'max_units': self.max_units,
            'timeout_s': self.timeout_s,
            'elapsed_s': round(self.elapsed(), 6),
        }
