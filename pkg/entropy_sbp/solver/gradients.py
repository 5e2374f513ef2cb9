"""LDG auxiliary equation for the entropy-variable gradients."""

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..operators.sbp import Operator1D
from ..operators.tensor import face_direction, face_index, face_sign, tensor_apply


@dataclass
class FaceLift:
    """Face penalty of the gradient equation.

    ``g_theta`` ``(nf, N, N, 5)`` is applied along the scaled outward normal of
    face ``face`` of every element in ``elements``.
    """

    elements: np.ndarray
    face: int
    g_theta: np.ndarray


def scaled_face_normal(metrics: np.ndarray, elements: np.ndarray, face: int) -> np.ndarray:
    """Outward normal scaled by the surface Jacobian, ``(nf, N, N, 3)``.

    Equals +-J a^m at the face nodes, m the face direction.
    """
    n_nodes = metrics.shape[1]
    direction = face_direction(face)
    rows = metrics[(np.asarray(elements),) + face_index(face, n_nodes)]
    return face_sign(face) * rows[..., direction - 1, :]


def ldg_gradients(
    w: np.ndarray,
    jacobian: np.ndarray,
    metrics: np.ndarray,
    op: Operator1D,
    lifts: Iterable[FaceLift] = (),
) -> np.ndarray:
    """Theta_i = J^-1 (sum_m J a^m_i D_m w + lifted face penalties).

    Args:
        w: Entropy variables ``(K, N, N, N, 5)``
        jacobian: ``(K, N, N, N)``
        metrics: ``(K, N, N, N, 3, 3)`` with [..., m, i] = J a^m_i
        op: 1D SBP operator of the elements
        lifts: Face penalties, each lifted by the inverse end weight

    Returns:
        ``(K, N, N, N, 3, 5)`` gradients in physical directions
    """
    derivatives = [tensor_apply(op.D, m + 1, w) for m in range(3)]
    J_theta = np.einsum("...mi,m...a->...ia", metrics, np.stack(derivatives))

    inv_end = 1.0 / op.weights[0]
    n_nodes = op.n_nodes
    for lift in lifts:
        normal = scaled_face_normal(metrics, lift.elements, lift.face)
        index = (np.asarray(lift.elements),) + face_index(lift.face, n_nodes)
        J_theta[index] += inv_end * normal[..., :, None] * lift.g_theta[..., None, :]

    return J_theta / jacobian[..., None, None]
