"""Right-hand side assembly, entropy bookkeeping and time integration."""

from .data_models import (
    ControllerHistory,
    EntropyBalanceRecord,
    IntegrationResult,
    IntegratorConfig,
    SolverState,
    SurfaceEntropy,
)
from .entropy import entropy_rhs_contraction
from .gradients import FaceLift, ldg_gradients, scaled_face_normal
from .integrator import StepCandidate, dopri_step, error_norm, integrate, pi_controller
from .rhs import BoundaryGroup, InterfaceGroup, SpatialOperator, compute_rhs

__all__ = [
    "ControllerHistory",
    "EntropyBalanceRecord",
    "IntegrationResult",
    "IntegratorConfig",
    "SolverState",
    "SurfaceEntropy",
    "entropy_rhs_contraction",
    "FaceLift",
    "ldg_gradients",
    "scaled_face_normal",
    "StepCandidate",
    "dopri_step",
    "error_norm",
    "integrate",
    "pi_controller",
    "BoundaryGroup",
    "InterfaceGroup",
    "SpatialOperator",
    "compute_rhs",
]
