"""Gas model, two-point fluxes and viscous terms."""

from .data_models import GasParameters, InviscidMode, PotentialPack
from .fluxes import (
    dissipation_matrix,
    ec_flux,
    ec_flux_prim,
    es_flux,
    es_flux_prim,
    logmean,
    two_point_flux_prim,
)
from .gas import (
    check_admissible,
    cons_to_prim,
    entropy_pack,
    entropy_to_prim,
    entropy_variables,
    inviscid_flux,
    inviscid_flux_prim,
    jacobians,
    pressure,
    prim_to_cons,
    sound_speed,
    thermodynamic_entropy,
)
from .viscous import (
    assemble_c_matrices,
    c_normal,
    primitive_gradients,
    primitive_viscous_flux,
    viscous_dissipation,
    viscous_flux,
    viscous_fluxes,
)

__all__ = [
    "GasParameters",
    "InviscidMode",
    "PotentialPack",
    "dissipation_matrix",
    "ec_flux",
    "ec_flux_prim",
    "es_flux",
    "es_flux_prim",
    "logmean",
    "two_point_flux_prim",
    "check_admissible",
    "cons_to_prim",
    "entropy_pack",
    "entropy_to_prim",
    "entropy_variables",
    "inviscid_flux",
    "inviscid_flux_prim",
    "jacobians",
    "pressure",
    "prim_to_cons",
    "sound_speed",
    "thermodynamic_entropy",
    "assemble_c_matrices",
    "c_normal",
    "primitive_gradients",
    "primitive_viscous_flux",
    "viscous_dissipation",
    "viscous_flux",
    "viscous_fluxes",
]
