"""Boundary symbols of anisotropic Maxwell impedance maps."""
from .errors import (
    ContourFailure,
    DegenerateError,
    InconsistentData,
    InvalidMetricError,
    NearDegenerateError,
)
from .metrics_geometry import HatPair, ParameterTriple, build_hat_pair, to_boundary_normal
from .symbol_calculus import coefficient_symbols, principal_B, principal_C

__all__ = [
    "ContourFailure",
    "DegenerateError",
    "InconsistentData",
    "InvalidMetricError",
    "NearDegenerateError",
    "HatPair",
    "ParameterTriple",
    "build_hat_pair",
    "to_boundary_normal",
    "coefficient_symbols",
    "principal_B",
    "principal_C",
]

__version__ = "0.1.0"
