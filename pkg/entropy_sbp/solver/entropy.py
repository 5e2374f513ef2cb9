"""Discrete entropy balance dS/dt + DT = Xi."""

import numpy as np

from ..mesh.data_models import Mesh
from ..physics.data_models import GasParameters
from ..physics.gas import cons_to_prim, entropy_variables
from .data_models import EntropyBalanceRecord, SolverState


def entropy_rhs_contraction(
    state: SolverState, rhs: np.ndarray, mesh: Mesh, gas: GasParameters
) -> EntropyBalanceRecord:
    """Contract a freshly computed RHS with the entropy variables.

    dS/dt = sum w^T (P J) dq/dt, DT = sum (P J) Theta_m^T C_mj Theta_j and Xi
    the surface terms collected by the RHS (heat entropy flow, penalty
    dissipation, far-field exchange, body-force source). The wall force of
    the same evaluation is carried along unchanged.
    """
    weights = mesh.quadrature_weights()
    w = state.w if state.w is not None else entropy_variables(cons_to_prim(state.q, gas), gas)
    dSdt = float(np.sum(weights * np.sum(w * rhs, axis=-1)))

    DT = 0.0
    if state.theta is not None and state.viscous_flux is not None:
        # Theta_m . F_m equals the C-matrix quadratic form
        DT = float(np.sum(weights * np.einsum("...ma,...ma->...", state.theta, state.viscous_flux)))

    Xi = state.surface.total
    fx, fy, fz = (float(f) for f in state.wall_force)
    return EntropyBalanceRecord(
        t=state.t,
        dSdt=dSdt,
        DT=DT,
        Xi=Xi,
        residual=dSdt + DT - Xi,
        force_x=fx,
        force_y=fy,
        force_z=fz,
    )
