# src/errors.py
"""Exception hierarchy shared by the solvers, the CLI and the HTTP routes.

Every class carries the CLI exit code and the HTTP status it maps to, so the
two front ends translate failures the same way.
"""

from typing import Optional

# --------------------
# Exit codes
# --------------------
EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_SOLVER_ERROR = 3


class MinLenError(Exception):
    exit_code = EXIT_SOLVER_ERROR
    http_status = 500

    def to_dict(self):
        return {"error": str(self), "type": type(self).__name__}


class InvalidParameterError(MinLenError, ValueError):
    """Physical input outside the admissible range (coupling sign, beta < 0, ...)."""

    exit_code = EXIT_CONFIG_ERROR
    http_status = 400


class DomainError(InvalidParameterError):
    """Momentum outside the open interval (-p_max, p_max)."""


class ConfigError(MinLenError):
    exit_code = EXIT_CONFIG_ERROR
    http_status = 400


class SolverError(MinLenError):
    http_status = 422


class QuadratureError(SolverError):
    def __init__(self, message: str, achieved_error: Optional[float] = None):
        super().__init__(message)
        self.achieved_error = achieved_error

    def to_dict(self):
        data = super().to_dict()
        data["achieved_error"] = self.achieved_error
        return data


class NonHermitianError(SolverError):
    def __init__(self, message: str, defect: float):
        super().__init__(message)
        self.defect = defect

    def to_dict(self):
        data = super().to_dict()
        data["defect"] = self.defect
        return data
