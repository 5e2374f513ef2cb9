"""Ideal-gas variable transforms, entropy variables and inviscid fluxes.

All functions are vectorized over leading axes; the last axis holds the five
components of a state: conserved (rho, rho U, rho E), primitive
(rho, U1, U2, U3, T) or entropy variables W.
"""

from typing import Tuple

import numpy as np

from ..exceptions import NonPositiveDensity, NonPositiveTemperature
from .data_models import GasParameters, PotentialPack


def _first_bad(mask: np.ndarray):
    bad = np.argwhere(mask)
    return tuple(int(i) for i in bad[0]) if bad.size else None


def check_admissible(rho: np.ndarray, T: np.ndarray) -> None:
    """Raise if any density or temperature is non-positive (or NaN)."""
    rho_bad = ~(np.asarray(rho) > 0.0)
    if np.any(rho_bad):
        index = _first_bad(rho_bad)
        raise NonPositiveDensity(f"Non-positive density at index {index}", index=index)
    T_bad = ~(np.asarray(T) > 0.0)
    if np.any(T_bad):
        index = _first_bad(T_bad)
        raise NonPositiveTemperature(f"Non-positive temperature at index {index}", index=index)


def prim_to_cons(v: np.ndarray, gas: GasParameters) -> np.ndarray:
    """Primitive (rho, U, T) -> conserved (rho, rho U, rho E)."""
    v = np.asarray(v, dtype=float)
    rho, U, T = v[..., 0], v[..., 1:4], v[..., 4]
    check_admissible(rho, T)
    q = np.empty_like(v)
    q[..., 0] = rho
    q[..., 1:4] = rho[..., None] * U
    q[..., 4] = rho * (gas.cv * T + 0.5 * np.sum(U * U, axis=-1))
    return q


def cons_to_prim(q: np.ndarray, gas: GasParameters) -> np.ndarray:
    """Conserved (rho, rho U, rho E) -> primitive (rho, U, T)."""
    q = np.asarray(q, dtype=float)
    rho = q[..., 0]
    if np.any(~(rho > 0.0)):
        index = _first_bad(~(rho > 0.0))
        raise NonPositiveDensity(f"Non-positive density at index {index}", index=index)
    U = q[..., 1:4] / rho[..., None]
    T = (q[..., 4] / rho - 0.5 * np.sum(U * U, axis=-1)) / gas.cv
    check_admissible(rho, T)
    v = np.empty_like(q)
    v[..., 0] = rho
    v[..., 1:4] = U
    v[..., 4] = T
    return v


def pressure(v: np.ndarray, gas: GasParameters) -> np.ndarray:
    return v[..., 0] * gas.R * v[..., 4]


def sound_speed(v: np.ndarray, gas: GasParameters) -> np.ndarray:
    return np.sqrt(gas.gamma * gas.R * v[..., 4])


def thermodynamic_entropy(v: np.ndarray, gas: GasParameters) -> np.ndarray:
    """s = c_v log(T / T_inf) - R log(rho / rho_inf)."""
    return gas.cv * np.log(v[..., 4] / gas.T_inf) - gas.R * np.log(v[..., 0] / gas.rho_inf)


def entropy_variables(v: np.ndarray, gas: GasParameters) -> np.ndarray:
    """W = dS/dQ for S = -rho s, from primitive variables.

    W = (c_P - s - |U|^2 / (2T), U / T, -1 / T).
    """
    v = np.asarray(v, dtype=float)
    U, T = v[..., 1:4], v[..., 4]
    s = thermodynamic_entropy(v, gas)
    w = np.empty_like(v)
    w[..., 0] = gas.cp - s - 0.5 * np.sum(U * U, axis=-1) / T
    w[..., 1:4] = U / T[..., None]
    w[..., 4] = -1.0 / T
    return w


def entropy_to_prim(w: np.ndarray, gas: GasParameters) -> np.ndarray:
    """Inverse of ``entropy_variables``; requires w5 < 0."""
    w = np.asarray(w, dtype=float)
    if np.any(~(w[..., 4] < 0.0)):
        index = _first_bad(~(w[..., 4] < 0.0))
        raise NonPositiveTemperature(f"Entropy variable w5 >= 0 at index {index}", index=index)
    T = -1.0 / w[..., 4]
    U = w[..., 1:4] * T[..., None]
    s = gas.cp - w[..., 0] - 0.5 * np.sum(U * U, axis=-1) / T
    log_rho = (gas.cv * np.log(T / gas.T_inf) - s) / gas.R
    v = np.empty_like(w)
    v[..., 0] = gas.rho_inf * np.exp(log_rho)
    v[..., 1:4] = U
    v[..., 4] = T
    return v


def entropy_pack(q: np.ndarray, gas: GasParameters) -> Tuple[np.ndarray, PotentialPack]:
    """Entropy variables and the potential/flux pack at conserved states.

    Returns:
        (W, PotentialPack) with Phi = W^T Q - S and Psi_m = W^T F_m - F_m
        holding by construction of the closed forms rho R and rho R U_m.
    """
    v = cons_to_prim(q, gas)
    rho, U = v[..., 0], v[..., 1:4]
    s = thermodynamic_entropy(v, gas)
    w = entropy_variables(v, gas)
    pack = PotentialPack(
        S=-rho * s,
        s=s,
        Phi=rho * gas.R,
        Psi=(rho * gas.R)[..., None] * U,
        F=(-rho * s)[..., None] * U,
    )
    return w, pack


def jacobians(v: np.ndarray, gas: GasParameters) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(dW/dV, dV/dW, dQ/dW) at primitive states, each ``(..., 5, 5)``."""
    v = np.asarray(v, dtype=float)
    check_admissible(v[..., 0], v[..., 4])
    rho, U, T = v[..., 0], v[..., 1:4], v[..., 4]
    shape = v.shape[:-1] + (5, 5)
    U2 = np.sum(U * U, axis=-1)
    E = gas.cv * T + 0.5 * U2
    eye3 = np.eye(3)

    dWdV = np.zeros(shape)
    dWdV[..., 0, 0] = gas.R / rho
    dWdV[..., 0, 1:4] = -U / T[..., None]
    dWdV[..., 0, 4] = -gas.cv / T + 0.5 * U2 / T**2
    dWdV[..., 1:4, 1:4] = eye3 / T[..., None, None]
    dWdV[..., 1:4, 4] = -U / (T**2)[..., None]
    dWdV[..., 4, 4] = 1.0 / T**2

    dVdW = np.zeros(shape)
    scale = rho / gas.R
    dVdW[..., 0, 0] = scale
    dVdW[..., 0, 1:4] = scale[..., None] * U
    dVdW[..., 0, 4] = scale * E
    dVdW[..., 1:4, 1:4] = T[..., None, None] * eye3
    dVdW[..., 1:4, 4] = U * T[..., None]
    dVdW[..., 4, 4] = T**2

    dQdV = np.zeros(shape)
    dQdV[..., 0, 0] = 1.0
    dQdV[..., 1:4, 0] = U
    dQdV[..., 1:4, 1:4] = rho[..., None, None] * eye3
    dQdV[..., 4, 0] = E
    dQdV[..., 4, 1:4] = rho[..., None] * U
    dQdV[..., 4, 4] = rho * gas.cv

    dQdW = np.einsum("...ij,...jk->...ik", dQdV, dVdW)
    return dWdV, dVdW, dQdW


def inviscid_flux_prim(v: np.ndarray, normal: np.ndarray, gas: GasParameters) -> np.ndarray:
    """Sum_m n_m F^I_m at primitive states; linear in ``normal``."""
    rho, U, T = v[..., 0], v[..., 1:4], v[..., 4]
    normal = np.asarray(normal, dtype=float)
    un = np.sum(U * normal, axis=-1)
    p = rho * gas.R * T
    H = gas.cp * T + 0.5 * np.sum(U * U, axis=-1)
    mass = rho * un
    f = np.empty(np.broadcast_shapes(v.shape, normal.shape[:-1] + (5,)))
    f[..., 0] = mass
    f[..., 1:4] = mass[..., None] * U + p[..., None] * normal
    f[..., 4] = mass * H
    return f


def inviscid_flux(q: np.ndarray, normal: np.ndarray, gas: GasParameters) -> np.ndarray:
    """Normal inviscid flux of conserved states.

    Args:
        q: Conserved states ``(..., 5)``
        normal: Direction ``(..., 3)``; the flux is linear in it, unit length
            gives the physical normal flux
        gas: Gas parameters
    """
    return inviscid_flux_prim(cons_to_prim(q, gas), normal, gas)
