"""Entropy-conservative and entropy-stable two-point fluxes."""

import numpy as np

from .data_models import GasParameters, InviscidMode
from .gas import cons_to_prim, entropy_variables, jacobians


def logmean(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Logarithmic mean (b - a) / log(b / a) with a series branch near a == b.

    The series is used when ((a - b) / (a + b))^2 < 1e-4, where the closed
    form loses digits to cancellation.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    f2 = (a * (a - 2.0 * b) + b * b) / (a * (a + 2.0 * b) + b * b)
    series = (a + b) / (2.0 + f2 * (2.0 / 3.0 + f2 * (2.0 / 5.0 + f2 * 2.0 / 7.0)))
    with np.errstate(divide="ignore", invalid="ignore"):
        closed = (b - a) / np.log(b / a)
    return np.where(f2 < 1e-4, series, closed)


def ec_flux_prim(
    vL: np.ndarray, vR: np.ndarray, normal: np.ndarray, gas: GasParameters
) -> np.ndarray:
    """Entropy-conservative flux between primitive states.

    Affine-invariant form built from logarithmic means of rho and
    beta = 1 / (2 R T). Symmetric in (vL, vR), consistent, linear in
    ``normal`` and satisfies (W_R - W_L)^T f = Psi_n(R) - Psi_n(L).
    """
    rhoL, rhoR = vL[..., 0], vR[..., 0]
    UL, UR = vL[..., 1:4], vR[..., 1:4]
    betaL = 0.5 / (gas.R * vL[..., 4])
    betaR = 0.5 / (gas.R * vR[..., 4])

    rho_ln = logmean(rhoL, rhoR)
    beta_ln = logmean(betaL, betaR)
    rho_avg = 0.5 * (rhoL + rhoR)
    beta_avg = 0.5 * (betaL + betaR)
    U_avg = 0.5 * (UL + UR)
    U2_avg = 0.5 * (np.sum(UL * UL, axis=-1) + np.sum(UR * UR, axis=-1))
    p_hat = rho_avg / (2.0 * beta_avg)

    normal = np.asarray(normal, dtype=float)
    mass = rho_ln * np.sum(U_avg * normal, axis=-1)
    momentum = mass[..., None] * U_avg + p_hat[..., None] * normal
    energy = mass * (0.5 / ((gas.gamma - 1.0) * beta_ln) - 0.5 * U2_avg) + np.sum(
        momentum * U_avg, axis=-1
    )

    f = np.empty(mass.shape + (5,))
    f[..., 0] = mass
    f[..., 1:4] = momentum
    f[..., 4] = energy
    return f


def _tangents(unit_normal: np.ndarray):
    # pick the Cartesian axis least aligned with n to seed the tangent plane
    axis = np.argmin(np.abs(unit_normal), axis=-1)
    seed = np.eye(3)[axis]
    t1 = np.cross(unit_normal, seed)
    t1 /= np.linalg.norm(t1, axis=-1, keepdims=True)
    t2 = np.cross(unit_normal, t1)
    return t1, t2


def dissipation_matrix(v: np.ndarray, normal: np.ndarray, gas: GasParameters) -> np.ndarray:
    """Symmetric positive semidefinite |A_n| dQ/dW at primitive states.

    Built as X |Lambda| S X^T from the analytic right eigenvectors X of the
    normal flux Jacobian and the scaling S = diag(X^-1 dQ/dW X^-T), so the
    sign property holds by construction. Eigenvalues scale with |normal|.
    """
    normal = np.broadcast_to(np.asarray(normal, dtype=float), v.shape[:-1] + (3,))
    length = np.linalg.norm(normal, axis=-1)
    n_hat = normal / length[..., None]
    t1, t2 = _tangents(n_hat)

    U, T = v[..., 1:4], v[..., 4]
    c = np.sqrt(gas.gamma * gas.R * T)
    un = np.sum(U * n_hat, axis=-1)
    H = gas.cp * T + 0.5 * np.sum(U * U, axis=-1)

    X = np.zeros(v.shape[:-1] + (5, 5))
    X[..., 0, 0] = 1.0
    X[..., 1:4, 0] = U - c[..., None] * n_hat
    X[..., 4, 0] = H - c * un
    X[..., 0, 1] = 1.0
    X[..., 1:4, 1] = U
    X[..., 4, 1] = 0.5 * np.sum(U * U, axis=-1)
    X[..., 1:4, 2] = t1
    X[..., 4, 2] = np.sum(U * t1, axis=-1)
    X[..., 1:4, 3] = t2
    X[..., 4, 3] = np.sum(U * t2, axis=-1)
    X[..., 0, 4] = 1.0
    X[..., 1:4, 4] = U + c[..., None] * n_hat
    X[..., 4, 4] = H + c * un

    lam = np.stack([un - c, un, un, un, un + c], axis=-1)
    lam = np.abs(lam) * length[..., None]

    _, _, dQdW = jacobians(v, gas)
    X_inv = np.linalg.inv(X)
    scaling = np.einsum("...ij,...jk,...ik->...i", X_inv, dQdW, X_inv)
    scaling = np.maximum(scaling, 0.0)

    return np.einsum("...ik,...k,...jk->...ij", X, lam * scaling, X)


def es_flux_prim(
    vL: np.ndarray, vR: np.ndarray, normal: np.ndarray, gas: GasParameters
) -> np.ndarray:
    """Entropy-stable flux f^sc - 1/2 D (W_R - W_L), D at the mean primitive state."""
    f_sc = ec_flux_prim(vL, vR, normal, gas)
    jump = entropy_variables(vR, gas) - entropy_variables(vL, gas)
    dmat = dissipation_matrix(0.5 * (vL + vR), normal, gas)
    return f_sc - 0.5 * np.einsum("...ij,...j->...i", dmat, jump)


def two_point_flux_prim(
    vL: np.ndarray,
    vR: np.ndarray,
    normal: np.ndarray,
    gas: GasParameters,
    mode: InviscidMode,
) -> np.ndarray:
    if mode is InviscidMode.STABLE:
        return es_flux_prim(vL, vR, normal, gas)
    return ec_flux_prim(vL, vR, normal, gas)


def ec_flux(qL: np.ndarray, qR: np.ndarray, normal: np.ndarray, gas: GasParameters) -> np.ndarray:
    """Entropy-conservative flux f^sc between conserved states."""
    return ec_flux_prim(cons_to_prim(qL, gas), cons_to_prim(qR, gas), normal, gas)


def es_flux(qL: np.ndarray, qR: np.ndarray, normal: np.ndarray, gas: GasParameters) -> np.ndarray:
    """Entropy-stable flux f^ssr between conserved states."""
    return es_flux_prim(cons_to_prim(qL, gas), cons_to_prim(qR, gas), normal, gas)
