"""Qubit decoherence under non-Markovian noise and decoupling control.

The heavy lifting happens in the C++ core (``dekohere._core``). This package
re-exports it and adds readers for the files the CLI writes, which are the
contract the plotting scripts consume.
"""

from ._core import (
    TRAJECTORY_HEADER,
    ConfigError,
    EnvelopeError,
    MetricError,
    NoiseModel,
    NumericalError,
    ParameterError,
    normalize_config,
    optimize,
    renormalized_alpha_bb,
    run,
    sweep,
    write_run,
    write_sweep,
)
from .files import read_report, read_summary, read_trajectory

__all__ = [
    "TRAJECTORY_HEADER",
    "ConfigError",
    "EnvelopeError",
    "MetricError",
    "NoiseModel",
    "NumericalError",
    "ParameterError",
    "normalize_config",
    "optimize",
    "read_report",
    "read_summary",
    "read_trajectory",
    "renormalized_alpha_bb",
    "run",
    "sweep",
    "write_run",
    "write_sweep",
]
