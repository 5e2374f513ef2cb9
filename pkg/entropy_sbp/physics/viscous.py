"""Viscous coefficient matrices and viscous fluxes in entropy-variable form."""

import numpy as np

from .data_models import GasParameters


def assemble_c_matrices(v: np.ndarray, gas: GasParameters) -> np.ndarray:
    """Viscous coefficient matrices C_mj at primitive states.

    F^V_m = sum_j C_mj dW/dx_j for constant mu and kappa. Closed form obtained
    from the primitive viscous flux and dU_i = T (dw_{i+1} + U_i dw_5),
    dT = T^2 dw_5.

    Returns:
        ``(..., 3, 3, 5, 5)`` array indexed [m, j, row, col]
    """
    v = np.asarray(v, dtype=float)
    lead = v.shape[:-1]
    U, T = v[..., 1:4], v[..., 4]
    muT = gas.mu * T

    # a_k = e_{k+1} + U_k e_5 maps dW to T^-1 dU_k
    a = np.zeros(lead + (3, 5))
    for k in range(3):
        a[..., k, 1 + k] = 1.0
        a[..., k, 4] = U[..., k]

    C = np.zeros(lead + (3, 3, 5, 5))
    for m in range(3):
        for j in range(3):
            for i in range(3):
                row = np.zeros(lead + (5,))
                if j == m:
                    row += a[..., i, :]
                if j == i:
                    row += a[..., m, :]
                if i == m:
                    row -= (2.0 / 3.0) * a[..., j, :]
                C[..., m, j, 1 + i, :] = muT[..., None] * row
            C[..., m, j, 4, :] = np.einsum("...i,...ik->...k", U, C[..., m, j, 1:4, :])
            if m == j:
                C[..., m, j, 4, 4] += gas.kappa * T**2
    return C


def c_normal(C: np.ndarray, normal: np.ndarray) -> np.ndarray:
    """C_nn = sum_mj n_m n_j C_mj."""
    return np.einsum("...m,...j,...mjab->...ab", normal, normal, C)


def primitive_viscous_flux(
    U: np.ndarray, grad_U: np.ndarray, grad_T: np.ndarray, gas: GasParameters
) -> np.ndarray:
    """Classical viscous flux from primitive gradients.

    Args:
        U: Velocity ``(..., 3)``
        grad_U: ``(..., 3, 3)`` with grad_U[..., j, i] = dU_i/dx_j
        grad_T: ``(..., 3)``

    Returns:
        ``(..., 3, 5)``: F^V_m = (0, tau_im, U_i tau_im + kappa dT/dx_m)
    """
    div = np.trace(grad_U, axis1=-2, axis2=-1)
    # tau[i, m] = mu (dU_i/dx_m + dU_m/dx_i - 2/3 delta_im div U)
    tau = gas.mu * (
        np.swapaxes(grad_U, -1, -2) + grad_U - (2.0 / 3.0) * div[..., None, None] * np.eye(3)
    )
    flux = np.zeros(U.shape[:-1] + (3, 5))
    flux[..., :, 1:4] = np.swapaxes(tau, -1, -2)
    flux[..., :, 4] = np.einsum("...i,...im->...m", U, tau) + gas.kappa * grad_T
    return flux


def primitive_gradients(v: np.ndarray, theta: np.ndarray):
    """(grad_U, grad_T) from entropy-variable gradients ``(..., 3, 5)``."""
    U, T = v[..., 1:4], v[..., 4]
    grad_U = T[..., None, None] * (theta[..., :, 1:4] + theta[..., :, 4:5] * U[..., None, :])
    grad_T = (T**2)[..., None] * theta[..., :, 4]
    return grad_U, grad_T


def viscous_fluxes(v: np.ndarray, theta: np.ndarray, gas: GasParameters) -> np.ndarray:
    """All three viscous fluxes sum_j C_mj Theta_j, ``(..., 3, 5)``.

    Evaluated through primitive gradients; equal to the C-matrix contraction.
    """
    grad_U, grad_T = primitive_gradients(v, theta)
    return primitive_viscous_flux(v[..., 1:4], grad_U, grad_T, gas)


def viscous_flux(v: np.ndarray, theta: np.ndarray, direction: int, gas: GasParameters) -> np.ndarray:
    """F^V_m = sum_j C_mj Theta_j for one direction m in 1..3."""
    if direction not in (1, 2, 3):
        raise ValueError(f"Direction must be 1, 2 or 3, got {direction}")
    C = assemble_c_matrices(v, gas)
    return np.einsum("...jab,...jb->...a", C[..., direction - 1, :, :, :], theta)


def viscous_dissipation(C: np.ndarray, theta: np.ndarray) -> np.ndarray:
    """Quadratic form sum_mj Theta_m^T C_mj Theta_j (non-negative)."""
    return np.einsum("...ma,...mjab,...jb->...", theta, C, theta)
