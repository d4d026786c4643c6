"""Numerical toolkit for asymptotic error exponents in binary discrimination
of quantum channels: Helstrom and Chernoff/Hoeffding quantities, the
classical reduction preserving Renyi divergences, positive-combination error
floors for parallel strategies, and finite-n adaptive simulators."""

from . import bounds, channels, cli, divergences, exponents, linalg, strategies
from .errors import QchdError

__all__ = [
    "QchdError",
    "bounds",
    "channels",
    "cli",
    "divergences",
    "exponents",
    "linalg",
    "strategies",
]

__version__ = "0.1.0"
