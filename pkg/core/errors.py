"""
TCGRE error types
All planner failures derive from TcgreError
"""
from typing import List, Optional


class TcgreError(Exception):
    """Base class for planner errors"""


class InstanceParseError(TcgreError, ValueError):
    """Instance or solution text could not be parsed"""

    def __init__(self, message: str, location: Optional[str] = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class InstanceValidationError(TcgreError, ValueError):
    """Instance parsed but breaks a model invariant"""

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class InvalidTransitionError(TcgreError, ValueError):
    """Joint transition breaks a movement or coordination constraint"""

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ResourceLimitError(TcgreError):
    """Search exceeded its unit cap"""

    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class SolverTimeout(ResourceLimitError):
    """Search exceeded its wall-clock budget"""


class OracleLimitError(TcgreError):
    """Instance is too large for exhaustive enumeration"""


class InfeasiblePlanError(TcgreError):
    """No plan reaches every goal within the step bound"""


class GeneratorConfigError(TcgreError, ValueError):
    """Generator configuration cannot produce an instance"""


class ReportError(TcgreError):
    """Report file could not be written"""

    def __init__(self, path: str, reason: str):
        self.path = path
        super().__init__(f"{path}: {reason}")
