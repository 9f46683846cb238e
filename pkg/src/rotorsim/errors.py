# -*- coding: utf-8 -*-

"""Exception hierarchy shared by every rotorsim module.

Each class carries the process exit code the command line front end reports
when the error escapes a subcommand.
"""

from typing import Optional, Sequence

import numpy as np

__all__ = [
    "RotorSimError",
    "InvalidArgumentError",
    "GimbalLockError",
    "TableError",
    "NumericError",
    "SingularInflowError",
    "UndefinedSkewError",
    "AssemblyError",
    "ConfigError",
    "NonConvergenceError",
    "SaturationError",
    "ProbeError",
    "ExtractionError",
    "RiccatiError",
    "InfeasibleSetPointError",
    "DivergenceError",
    "MissionFailure",
]


class RotorSimError(Exception):
    """Base class of all errors raised by rotorsim."""

    exit_code = 3


class InvalidArgumentError(RotorSimError, ValueError):
    """An argument lies outside the domain of an operation."""

    exit_code = 1


class GimbalLockError(InvalidArgumentError):
    """Euler rates requested at a pitch attitude too close to +-90 deg."""


class TableError(RotorSimError, ValueError):
    """A lookup table is empty, malformed or violates its grid invariants."""

    exit_code = 2


class NumericError(RotorSimError):
    """A computation produced non-finite values."""

    def __init__(self, message: str, indices: Optional[Sequence[int]] = None):
        super().__init__(message)
        self.indices = tuple(indices) if indices is not None else ()


class SingularInflowError(NumericError):
    """The inflow mass-flow parameter vanished while inflow is nonzero."""


class UndefinedSkewError(InvalidArgumentError):
    """Wake skew requested with zero in-plane and zero normal inflow."""


class AssemblyError(RotorSimError):
    """A component failed while the system residual was assembled."""

    def __init__(self, message: str, source: str = ""):
        super().__init__(f"[{source}] {message}" if source else message)
        self.source = source


class ConfigError(RotorSimError, ValueError):
    """A configuration file or override is missing, unknown or invalid."""

    exit_code = 2


class NonConvergenceError(RotorSimError):
    """The trim solver ran out of iterations."""

    def __init__(self, message: str, residual: Optional[np.ndarray] = None, iterations: int = 0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class SaturationError(RotorSimError):
    """A converged trim needs a control outside its travel."""

    def __init__(self, message: str, channel: str = ""):
        super().__init__(message)
        self.channel = channel


class ProbeError(NumericError):
    """A finite-difference probe produced a non-finite residual."""

    def __init__(self, message: str, column: int = -1):
        super().__init__(message, indices=(column,))
        self.column = column


class ExtractionError(RotorSimError):
    """The descriptor matrix E could not be factored."""

    def __init__(self, message: str, condition: float = float("inf")):
        super().__init__(message)
        self.condition = condition


class RiccatiError(RotorSimError):
    """The algebraic Riccati equation has no stabilizing solution."""


class InfeasibleSetPointError(RotorSimError):
    """The set-point block matrix is singular."""

    def __init__(self, message: str, rank: int = -1):
        super().__init__(message)
        self.rank = rank


class DivergenceError(RotorSimError):
    """The simulated state became non-finite."""

    exit_code = 4

    def __init__(self, message: str, time: float = float("nan"), phase: str = ""):
        super().__init__(message)
        self.time = time
        self.phase = phase


class MissionFailure(RotorSimError):
    """The mission timed out, diverged or missed the deck."""

    exit_code = 4

    def __init__(self, message: str, log=None):
        super().__init__(message)
        self.log = log
