"""Entropy-stable SBP-SAT discretization of the compressible Navier-Stokes equations."""

from .exceptions import (
    AdmissibilityError,
    ConfigError,
    EntropySBPError,
    FieldIOError,
    InvalidMeshError,
    MismatchedFaceError,
    NonPositiveDensity,
    NonPositiveTemperature,
    StepSizeUnderflow,
)

__all__ = [
    "AdmissibilityError",
    "ConfigError",
    "EntropySBPError",
    "FieldIOError",
    "InvalidMeshError",
    "MismatchedFaceError",
    "NonPositiveDensity",
    "NonPositiveTemperature",
    "StepSizeUnderflow",
]
