"""One-dimensional diagonal-norm SBP operators on Legendre-Gauss-Lobatto points."""

from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np
from loguru import logger

MAX_ORDER = 8
_NEWTON_TOL = 1e-15
_NEWTON_MAX_ITER = 100


def lgl_rule(p: int) -> Tuple[np.ndarray, np.ndarray]:
    """Legendre-Gauss-Lobatto nodes and weights for polynomial order p.

    Nodes are the roots of (1 - x^2) P'_p(x), found by Newton iteration from
    Chebyshev-Gauss-Lobatto initial guesses. The rule is exact for polynomials
    of degree <= 2p - 1.

    Args:
        p: Polynomial order (number of nodes is p + 1)

    Returns:
        (nodes, weights), nodes ascending in [-1, 1]
    """
    if p < 1:
        raise ValueError(f"LGL rule needs p >= 1, got {p}")

    n_nodes = p + 1
    nodes = np.cos(np.pi * np.arange(n_nodes) / p)
    vand = np.zeros((n_nodes, n_nodes))
    update = np.inf

    for _ in range(_NEWTON_MAX_ITER):
        vand[:, 0] = 1.0
        vand[:, 1] = nodes
        for k in range(2, n_nodes):
            vand[:, k] = ((2 * k - 1) * nodes * vand[:, k - 1] - (k - 1) * vand[:, k - 2]) / k
        step = (nodes * vand[:, p] - vand[:, p - 1]) / (n_nodes * vand[:, p])
        nodes = nodes - step
        update = np.max(np.abs(step))
        if update <= _NEWTON_TOL:
            break
    else:
        # roundoff can stall the last digit; anything this close is converged
        if update > 1e-13:
            raise RuntimeError(f"LGL Newton iteration did not converge for p={p} (step {update:.2e})")
        logger.debug(f"LGL Newton for p={p} stopped at step {update:.2e}")

    # refresh P_p at the converged nodes
    vand[:, 0] = 1.0
    vand[:, 1] = nodes
    for k in range(2, n_nodes):
        vand[:, k] = ((2 * k - 1) * nodes * vand[:, k - 1] - (k - 1) * vand[:, k - 2]) / k
    weights = 2.0 / (p * n_nodes * vand[:, p] ** 2)

    order = np.argsort(nodes)
    nodes = nodes[order]
    weights = weights[order]
    nodes[0], nodes[-1] = -1.0, 1.0
    return nodes, weights


def lagrange_derivative_matrix(nodes: np.ndarray) -> np.ndarray:
    """Collocation derivative matrix from barycentric weights."""
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    bary = 1.0 / np.prod(diff, axis=1)
    dmat = (bary[None, :] / bary[:, None]) / diff
    np.fill_diagonal(dmat, 0.0)
    np.fill_diagonal(dmat, -dmat.sum(axis=1))
    return dmat


@dataclass(frozen=True)
class Operator1D:
    """Diagonal-norm SBP operator (P, Q, D, B, Delta) on LGL nodes.

    P is stored as its diagonal (``weights``); ``P`` returns the matrix.
    """

    p: int
    nodes: np.ndarray
    weights: np.ndarray
    Q: np.ndarray
    D: np.ndarray
    B: np.ndarray
    Delta: np.ndarray

    @property
    def n_nodes(self) -> int:
        return self.p + 1

    @property
    def P(self) -> np.ndarray:
        return np.diag(self.weights)

    @property
    def P_inv(self) -> np.ndarray:
        return np.diag(1.0 / self.weights)

    def flux_points(self, values: np.ndarray) -> np.ndarray:
        """Flux-point vector f_bar with Delta @ f_bar == Q @ values.

        The first and last flux points carry the end-node values, so
        1^T Delta f_bar = f_N - f_1 telescopes to the boundary.
        """
        values = np.asarray(values, dtype=float)
        increments = np.tensordot(self.Q, values, axes=([1], [0]))
        head = values[:1]
        return np.concatenate([head, head + np.cumsum(increments, axis=0)], axis=0)


def build_sbp_1d(p: int) -> Operator1D:
    """Build the SBP operator of order p on p + 1 LGL points.

    Q is projected onto S + B/2 with S skew-symmetric so that Q + Q^T = B holds
    to roundoff; D = P^-1 Q then differentiates polynomials up to degree p.
    """
    if p < 1:
        raise ValueError(f"SBP operator needs p >= 1, got {p}")
    if p > MAX_ORDER:
        logger.warning(f"Order p={p} is above the tested range 1..{MAX_ORDER}")
    return _build_cached(p)


@lru_cache(maxsize=None)
def _build_cached(p: int) -> Operator1D:
    nodes, weights = lgl_rule(p)
    n_nodes = p + 1

    boundary = np.zeros((n_nodes, n_nodes))
    boundary[0, 0] = -1.0
    boundary[-1, -1] = 1.0

    q_raw = weights[:, None] * lagrange_derivative_matrix(nodes)
    q_mat = 0.5 * (q_raw - q_raw.T) + 0.5 * boundary
    d_mat = q_mat / weights[:, None]

    delta = np.zeros((n_nodes, n_nodes + 1))
    idx = np.arange(n_nodes)
    delta[idx, idx] = -1.0
    delta[idx, idx + 1] = 1.0

    for arr in (nodes, weights, q_mat, d_mat, boundary, delta):
        arr.setflags(write=False)

    return Operator1D(p=p, nodes=nodes, weights=weights, Q=q_mat, D=d_mat, B=boundary, Delta=delta)
