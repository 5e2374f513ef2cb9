"""Error norms, output files and convergence studies."""

from .convergence import StudySetup, observed_rates, run_convergence_study, smooth_field
from .norms import ErrorNorms, error_norms, interpolation_error_norms, weighted_norms
from .output import (
    TIMESERIES_COLUMNS,
    FieldSnapshot,
    read_fields,
    read_timeseries,
    timeseries_frame,
    write_fields,
    write_timeseries,
)

__all__ = [
    "StudySetup",
    "observed_rates",
    "run_convergence_study",
    "smooth_field",
    "ErrorNorms",
    "error_norms",
    "interpolation_error_norms",
    "weighted_norms",
    "TIMESERIES_COLUMNS",
    "FieldSnapshot",
    "read_fields",
    "read_timeseries",
    "timeseries_frame",
    "write_fields",
    "write_timeseries",
]
