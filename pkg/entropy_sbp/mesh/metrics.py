"""Curvilinear metric terms in curl form.

J a^m_n = -[curl_xi (X_l grad_xi X_k)]_m with (n, k, l) cyclic, every
derivative taken with the element's SBP operator D. Because the tensor
derivatives commute, sum_m D_m (J a^m) vanishes to roundoff.
"""

from typing import Tuple

import numpy as np

from ..exceptions import InvalidMeshError
from ..operators.sbp import Operator1D
from ..operators.tensor import tensor_apply


def _derivative(op: Operator1D, scalar: np.ndarray, direction: int) -> np.ndarray:
    return tensor_apply(op.D, direction, scalar[..., None])[..., 0]


def compute_metrics(coordinates: np.ndarray, op: Operator1D) -> Tuple[np.ndarray, np.ndarray, float]:
    """Metric Jacobian, contravariant vectors and GCL residual.

    Args:
        coordinates: ``(K, N, N, N, 3)`` nodal values of the element mappings
        op: SBP operator matching N

    Returns:
        (J ``(K, N, N, N)``, Ja ``(K, N, N, N, 3, 3)`` indexed [m, n], residual)
    """
    X = np.asarray(coordinates, dtype=float)
    if X.shape[-2] != op.n_nodes:
        raise ValueError(f"Coordinates have {X.shape[-2]} nodes per direction, operator {op.n_nodes}")

    # dX[..., a, k] = dX_a / dxi_k
    dX = np.stack(
        [np.stack([_derivative(op, X[..., a], k + 1) for k in range(3)], axis=-1) for a in range(3)],
        axis=-2,
    )
    J = np.linalg.det(dX)

    Ja = np.zeros(X.shape[:-1] + (3, 3))
    for n in range(3):
        k_comp, l_comp = (n + 1) % 3, (n + 2) % 3
        V = [X[..., l_comp] * dX[..., k_comp, k] for k in range(3)]
        for m in range(3):
            a, b = (m + 1) % 3, (m + 2) % 3
            curl_m = _derivative(op, V[b], a + 1) - _derivative(op, V[a], b + 1)
            Ja[..., m, n] = -curl_m

    gcl = sum(
        np.stack([_derivative(op, Ja[..., m, n], m + 1) for n in range(3)], axis=-1)
        for m in range(3)
    )
    residual = float(np.max(np.abs(gcl))) if gcl.size else 0.0

    if np.any(~(J > 0.0)):
        bad = np.argwhere(~(J > 0.0))[0]
        raise InvalidMeshError(
            f"Non-positive Jacobian {J[tuple(bad)]:.3e} in element {int(bad[0])} "
            f"at node {tuple(int(i) for i in bad[1:])}"
        )
    return J, Ja, residual
