"""Wall, interface and far-field simultaneous approximation terms."""

from .data_models import FarFieldSpec, HeatEntropyFlow, HeatFlowKind, WallPenalty, WallSpec
from .far_field import FarFieldPenalty, far_field_penalty
from .interface import InterfacePenalty, interface_penalty, interface_penalty_prim
from .wall import (
    inviscid_mirror_state,
    ip_dissipation_matrix,
    manufacture_wall_gradient,
    wall_entropy_production,
    wall_penalty,
    wall_traction,
    wall_viscous_state,
)

__all__ = [
    "FarFieldSpec",
    "HeatEntropyFlow",
    "HeatFlowKind",
    "WallPenalty",
    "WallSpec",
    "FarFieldPenalty",
    "far_field_penalty",
    "InterfacePenalty",
    "interface_penalty",
    "interface_penalty_prim",
    "inviscid_mirror_state",
    "ip_dissipation_matrix",
    "manufacture_wall_gradient",
    "wall_entropy_production",
    "wall_penalty",
    "wall_traction",
    "wall_viscous_state",
]
