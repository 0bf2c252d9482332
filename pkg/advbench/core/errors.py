"""Advbench exceptions.

Every error derives from ``AdvbenchError`` and from the builtin it refines, so
callers may catch either one.
"""

from pathlib import Path
from typing import Optional


class AdvbenchError(Exception):
    """Base class for advbench errors."""


class ConfigurationError(AdvbenchError, ValueError):
    """Invalid configuration value, spec, or missing input."""


class RejectedInputError(AdvbenchError, ValueError):
    """Non-finite value offered to the simulator or a network."""


class UnknownVehicleError(AdvbenchError, KeyError):
    """Vehicle id not present in the world."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown vehicle"


class ShapeError(AdvbenchError, ValueError):
    """Array dimensions do not match a network or buffer."""


class UsageError(AdvbenchError, ValueError):
    """Operation called with arguments it cannot work with."""


class CheckpointError(AdvbenchError, ValueError):
    """Malformed network checkpoint."""


class DivergenceError(AdvbenchError, FloatingPointError):
    """Training produced non-finite parameters."""

    def __init__(self, message: str, dump_path: Optional[Path] = None):
        super().__init__(message)
        self.dump_path = dump_path
