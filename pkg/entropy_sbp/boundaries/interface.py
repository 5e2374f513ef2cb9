"""Element-coupling SATs with the same structure as the wall treatment.

The neighbour state takes the place of the wall ghost state. Normals passed
to the primitive-level routine are scaled (surface Jacobian times unit
normal) so the penalties are already area weighted.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..exceptions import MismatchedFaceError
from ..physics.data_models import GasParameters, InviscidMode
from ..physics.fluxes import ec_flux_prim, two_point_flux_prim
from ..physics.gas import cons_to_prim, entropy_variables, inviscid_flux_prim
from ..physics.viscous import assemble_c_matrices, c_normal, viscous_fluxes


@dataclass
class InterfacePenalty:
    """Penalties for both sides of an interface.

    ``g_theta_*`` is applied along that side's outward normal.
    """

    g_q_left: np.ndarray
    g_theta_left: np.ndarray
    g_q_right: np.ndarray
    g_theta_right: np.ndarray
    dissipation_left: np.ndarray  # w^T (f^sc - f*) + w^T M on each side
    dissipation_right: np.ndarray


def interface_penalty_prim(
    vL: np.ndarray,
    vR: np.ndarray,
    FL: Optional[np.ndarray],
    FR: Optional[np.ndarray],
    nL: np.ndarray,
    mode: InviscidMode,
    gas: GasParameters,
    beta: Optional[np.ndarray] = None,
    nR: Optional[np.ndarray] = None,
) -> InterfacePenalty:
    """Interface penalties from primitive states and viscous fluxes.

    Args:
        vL, vR: Matched primitive states ``(..., 5)``
        FL, FR: Viscous fluxes ``(..., 3, 5)`` on each side, or None when inviscid
        nL: Scaled outward normal of the left side ``(..., 3)``
        mode: Conservative or stable coupling
        gas: Gas parameters
        beta: Interior-penalty coefficient (stable mode only)
        nR: Scaled outward normal of the right side, defaults to -nL
    """
    nL = np.broadcast_to(np.asarray(nL, dtype=float), vL.shape[:-1] + (3,))
    nR = -nL if nR is None else np.broadcast_to(np.asarray(nR, dtype=float), nL.shape)

    wL = entropy_variables(vL, gas)
    wR = entropy_variables(vR, gas)

    f_sc = ec_flux_prim(vL, vR, nL, gas)
    f_star = two_point_flux_prim(vL, vR, nL, gas, mode) if mode is InviscidMode.STABLE else f_sc
    g_left = inviscid_flux_prim(vL, nL, gas) - f_star
    g_right = inviscid_flux_prim(vR, nR, gas) + f_star
    diss_left = np.sum(wL * (f_sc - f_star), axis=-1)
    diss_right = -np.sum(wR * (f_sc - f_star), axis=-1)

    if FL is not None and FR is not None:
        viscous = -0.5 * (
            np.einsum("...j,...ja->...a", nL, FL) + np.einsum("...j,...ja->...a", nR, FR)
        )
        g_left = g_left + viscous
        g_right = g_right + viscous

        if mode is InviscidMode.STABLE and beta is not None and np.any(np.asarray(beta) > 0.0):
            area = np.linalg.norm(nL, axis=-1)
            n_hat = nL / area[..., None]
            C_nn = 0.5 * (
                c_normal(assemble_c_matrices(vL, gas), n_hat)
                + c_normal(assemble_c_matrices(vR, gas), n_hat)
            )
            scale = (np.broadcast_to(beta, area.shape) * area)[..., None, None]
            M_left = -np.einsum("...ab,...b->...a", scale * C_nn, wL - wR)
            g_left = g_left + M_left
            g_right = g_right - M_left
            diss_left = diss_left + np.sum(wL * M_left, axis=-1)
            diss_right = diss_right - np.sum(wR * M_left, axis=-1)

    return InterfacePenalty(
        g_q_left=g_left,
        g_theta_left=0.5 * (wR - wL),
        g_q_right=g_right,
        g_theta_right=0.5 * (wL - wR),
        dissipation_left=diss_left,
        dissipation_right=diss_right,
    )


def interface_penalty(
    qL: np.ndarray,
    qR: np.ndarray,
    thetaL: np.ndarray,
    thetaR: np.ndarray,
    normal: np.ndarray,
    mode: InviscidMode,
    gas: GasParameters,
    beta: float = 0.0,
) -> InterfacePenalty:
    """Interface penalties between matched conserved states.

    Args:
        qL, qR: Conserved states at matched nodes ``(..., 5)``
        thetaL, thetaR: Entropy-variable gradients ``(..., 3, 5)``
        normal: Unit normal pointing out of the left side
        mode: Conservative or stable coupling
        gas: Gas parameters
        beta: Interior-penalty coefficient used in stable mode
    """
    qL = np.asarray(qL, dtype=float)
    qR = np.asarray(qR, dtype=float)
    if qL.shape != qR.shape or np.shape(thetaL) != np.shape(thetaR):
        raise MismatchedFaceError(f"Interface sides do not match: {qL.shape} vs {qR.shape}")
    vL = cons_to_prim(qL, gas)
    vR = cons_to_prim(qR, gas)
    FL = viscous_fluxes(vL, np.asarray(thetaL), gas) if gas.is_viscous else None
    FR = viscous_fluxes(vR, np.asarray(thetaR), gas) if gas.is_viscous else None
    return interface_penalty_prim(vL, vR, FL, FR, normal, mode, gas, beta=np.asarray(beta))
