"""Entropy-stable solid wall penalties (adiabatic or prescribed heat entropy flow).

Everything here is point-wise and vectorized over leading axes. Normals are
unit outward normals; penalties are per unit face area and are scaled by the
surface Jacobian and lifted by the assembly.
"""

from typing import Optional

import numpy as np

from ..physics.data_models import GasParameters, InviscidMode
from ..physics.fluxes import ec_flux_prim, two_point_flux_prim
from ..physics.gas import entropy_variables, inviscid_flux_prim, jacobians
from ..physics.viscous import assemble_c_matrices, c_normal, viscous_fluxes
from .data_models import WallPenalty, WallSpec

# diag(-1, 1, 1, 1, -1): density and temperature gradients flip at the wall
_GRADIENT_FLIP = np.array([-1.0, 1.0, 1.0, 1.0, -1.0])


def inviscid_mirror_state(v: np.ndarray, normal: np.ndarray) -> np.ndarray:
    """Reflect the velocity through the tangent plane: U - 2 (U.n) n."""
    v = np.asarray(v, dtype=float)
    normal = np.asarray(normal, dtype=float)
    U = v[..., 1:4]
    out = np.array(v, copy=True)
    out[..., 1:4] = U - 2.0 * np.sum(U * normal, axis=-1, keepdims=True) * normal
    return out


def wall_viscous_state(
    v: np.ndarray, spec: WallSpec, normal: np.ndarray, x: Optional[np.ndarray] = None
) -> np.ndarray:
    """Viscous ghost state (rho, -U + 2 U_wall, T).

    The mean of the interior and ghost velocities is the wall velocity.
    """
    v = np.asarray(v, dtype=float)
    U_wall = spec.wall_velocity(x, normal)
    out = np.array(v, copy=True)
    out[..., 1:4] = -v[..., 1:4] + 2.0 * U_wall
    return out


def manufacture_wall_gradient(
    theta: np.ndarray, v: np.ndarray, v_bv: np.ndarray, gas: GasParameters
) -> np.ndarray:
    """Boundary entropy-variable gradients Theta^(B,V).

    Rotate to primitive gradients with dV/dW at v, flip the density and
    temperature components, rotate back with dW/dV at the ghost state.

    Args:
        theta: ``(..., 3, 5)`` gradients at the wall points
        v: Interior primitive states ``(..., 5)``
        v_bv: Viscous ghost states ``(..., 5)``
    """
    _, dVdW, _ = jacobians(v, gas)
    dWdV_bv, _, _ = jacobians(v_bv, gas)
    # primitive gradients per physical direction
    pi = np.einsum("...ab,...jb->...ja", dVdW, theta)
    pi_bv = pi * _GRADIENT_FLIP
    return np.einsum("...ab,...jb->...ja", dWdV_bv, pi_bv)


def ip_dissipation_matrix(
    v: np.ndarray, v_bv: np.ndarray, beta: float, normal: np.ndarray, gas: GasParameters
) -> np.ndarray:
    """L = -beta (C_nn(v) + C_nn(v_bv)) / 2, symmetric negative semidefinite."""
    C = assemble_c_matrices(v, gas)
    C_bv = assemble_c_matrices(v_bv, gas)
    return -0.5 * np.asarray(beta)[..., None, None] * (c_normal(C, normal) + c_normal(C_bv, normal))


def wall_penalty(
    v: np.ndarray,
    theta: np.ndarray,
    spec: WallSpec,
    normal: np.ndarray,
    t: float,
    gas: GasParameters,
    x: Optional[np.ndarray] = None,
    beta: Optional[np.ndarray] = None,
) -> WallPenalty:
    """Wall SAT at wall points.

    g_q = [f_n(v) - f*(v, v^(B,I))] - 1/2 [F_n - F_n^(B,V)] + L (w - w^(B,V))
          - e_5 T g(t)
    g_theta = 1/2 (w^(B,V) - w), applied along the outward normal.

    Args:
        v: Primitive states ``(..., 5)``
        theta: Entropy-variable gradients ``(..., 3, 5)``
        spec: Wall data
        normal: Unit outward normals ``(..., 3)``
        t: Time for g(t)
        gas: Gas parameters
        x: Point coordinates, needed for rotating walls
        beta: Point-wise override of ``spec.beta``; None in both means no
            interior penalty
    """
    v = np.asarray(v, dtype=float)
    normal = np.broadcast_to(np.asarray(normal, dtype=float), v.shape[:-1] + (3,))
    T = v[..., 4]
    w = entropy_variables(v, gas)

    # inviscid part: no penetration through the mirrored state
    v_mirror = inviscid_mirror_state(v, normal)
    f_sc = ec_flux_prim(v, v_mirror, normal, gas)
    if spec.inviscid_mode is InviscidMode.STABLE:
        f_star = two_point_flux_prim(v, v_mirror, normal, gas, InviscidMode.STABLE)
    else:
        f_star = f_sc
    g_q = inviscid_flux_prim(v, normal, gas) - f_star
    dissipation = np.sum(w * (f_sc - f_star), axis=-1)

    # viscous part: no slip through the ghost velocity
    v_bv = wall_viscous_state(v, spec, normal, x)
    w_bv = entropy_variables(v_bv, gas)
    g_theta = 0.5 * (w_bv - w)

    if gas.is_viscous:
        theta_bv = manufacture_wall_gradient(theta, v, v_bv, gas)
        F_n = np.einsum("...j,...ja->...a", normal, viscous_fluxes(v, theta, gas))
        F_n_bv = np.einsum("...j,...ja->...a", normal, viscous_fluxes(v_bv, theta_bv, gas))
        g_q = g_q - 0.5 * (F_n - F_n_bv)

        beta_value = spec.beta if beta is None else beta
        if beta_value is not None and np.any(np.asarray(beta_value) > 0.0):
            L = ip_dissipation_matrix(
                v, v_bv, np.broadcast_to(beta_value, T.shape), normal, gas
            )
            M = np.einsum("...ab,...b->...a", L, w - w_bv)
            g_q = g_q + M
            dissipation = dissipation + np.sum(w * M, axis=-1)

    # heat entropy flow enters the energy equation only
    g_value = spec.heat_flow(t)
    heat = np.full(T.shape, g_value, dtype=float)
    if g_value != 0.0:
        g_q = np.array(g_q, copy=True)
        g_q[..., 4] -= T * g_value

    return WallPenalty(g_q=g_q, g_theta=g_theta, entropy_dissipation=dissipation, heat_flow=heat)


def wall_traction(
    v: np.ndarray, theta: Optional[np.ndarray], normal: np.ndarray, gas: GasParameters
) -> np.ndarray:
    """Force per unit area of the fluid on the wall, p n - tau n.

    ``normal`` points out of the fluid; ``theta`` None drops the viscous part.
    """
    v = np.asarray(v, dtype=float)
    normal = np.broadcast_to(np.asarray(normal, dtype=float), v.shape[:-1] + (3,))
    pressure = v[..., 0] * gas.R * v[..., 4]
    traction = pressure[..., None] * normal
    if theta is not None and gas.is_viscous:
        # momentum rows of n . F^V are tau n
        F_n = np.einsum("...j,...ja->...a", normal, viscous_fluxes(v, theta, gas))
        traction = traction - F_n[..., 1:4]
    return traction


def wall_entropy_production(
    v: np.ndarray,
    theta: np.ndarray,
    spec: WallSpec,
    normal: np.ndarray,
    t: float,
    gas: GasParameters,
    x: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Point-wise wall contribution to d/dt of the integrated entropy.

    Surface terms left by the telescoped volume operators plus the wall
    penalties contracted with w and C Theta:
    -F_n + w^T F^V_n + w^T g_q + (F^V_n)^T g_theta. Equals g(t) for an
    adiabatic-mechanism wall with f^sc and beta = 0, and g(t) plus a
    non-positive dissipation otherwise.
    """
    v = np.asarray(v, dtype=float)
    normal = np.broadcast_to(np.asarray(normal, dtype=float), v.shape[:-1] + (3,))
    w = entropy_variables(v, gas)
    penalty = wall_penalty(v, theta, spec, normal, t, gas, x=x)

    f_n = inviscid_flux_prim(v, normal, gas)
    psi_n = v[..., 0] * gas.R * np.sum(v[..., 1:4] * normal, axis=-1)
    entropy_flux_n = np.sum(w * f_n, axis=-1) - psi_n

    production = -entropy_flux_n + np.sum(w * penalty.g_q, axis=-1)
    if gas.is_viscous:
        F_n = np.einsum("...j,...ja->...a", normal, viscous_fluxes(v, theta, gas))
        production = production + np.sum(w * F_n, axis=-1) + np.sum(F_n * penalty.g_theta, axis=-1)
    return production
