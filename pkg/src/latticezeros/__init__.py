"""Rectangular lattice sums, their zeros, and how those zeros move with the aspect ratio."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    AccuracyWarning,
    ConvergenceError,
    DomainError,
    LatticeZerosError,
)
from .latticesum import DEFAULT_CONFIG, EvalConfig, LatticeShape, s0, s0_tilde  # noqa: E402

__all__ = [
    "__version__",
    "AccuracyWarning",
    "ConvergenceError",
    "DomainError",
    "LatticeZerosError",
    "DEFAULT_CONFIG",
    "EvalConfig",
    "LatticeShape",
    "s0",
    "s0_tilde",
]
