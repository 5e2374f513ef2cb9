"""Case configuration, initial states and the case runner."""

from .config import (
    CaseConfig,
    InitialConfig,
    MeshConfig,
    OutputConfig,
    RuntimeSettings,
    StudyConfig,
    load_case_config,
    parse_case_config,
)
from .initial_conditions import (
    annulus_axial_velocity,
    annulus_peak_velocity,
    annulus_state,
    annulus_temperature,
    density_wave_rhs,
    density_wave_state,
    random_smooth_state,
    uniform_state,
)
from .runner import CaseRunner, RunResult

__all__ = [
    "CaseConfig",
    "InitialConfig",
    "MeshConfig",
    "OutputConfig",
    "RuntimeSettings",
    "StudyConfig",
    "load_case_config",
    "parse_case_config",
    "annulus_axial_velocity",
    "annulus_peak_velocity",
    "annulus_state",
    "annulus_temperature",
    "density_wave_rhs",
    "density_wave_state",
    "random_smooth_state",
    "uniform_state",
    "CaseRunner",
    "RunResult",
]
