"""Discrete error norms weighted by the volume quadrature."""

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from ..mesh.data_models import Mesh
from ..operators.sbp import build_sbp_1d

Reference = Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class ErrorNorms:
    l1: float
    l2: float
    linf: float

    def as_dict(self) -> dict:
        return {"l1": self.l1, "l2": self.l2, "linf": self.linf}


def weighted_norms(difference: np.ndarray, weights: np.ndarray) -> ErrorNorms:
    """L1 = sum w |e|, L2 = sqrt(sum w e^2), Linf = max |e|.

    ``weights`` covers the node axes of ``difference``; trailing component
    axes are summed.
    """
    diff = np.asarray(difference, dtype=float)
    extra = diff.ndim - weights.ndim
    w = weights.reshape(weights.shape + (1,) * extra)
    absolute = np.abs(diff)
    return ErrorNorms(
        l1=float(np.sum(w * absolute)),
        l2=float(np.sqrt(np.sum(w * diff**2))),
        linf=float(np.max(absolute)) if absolute.size else 0.0,
    )


def error_norms(field: np.ndarray, reference: Reference, mesh: Mesh) -> ErrorNorms:
    """Norms of field - reference with the P J nodal weights.

    Args:
        field: Nodal values ``(K, N, N, N)`` or ``(K, N, N, N, C)``
        reference: Array of the same shape, or a function of the node
            coordinates ``(K, N, N, N, 3)``
        mesh: Mesh providing the weights
    """
    ref = reference(mesh.coordinates) if callable(reference) else reference
    return weighted_norms(np.asarray(field) - np.asarray(ref), mesh.quadrature_weights())


def interpolation_matrix(nodes: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Lagrange basis on ``nodes`` evaluated at ``points``, ``(len(points), len(nodes))``."""
    diff = points[:, None] - nodes[None, :]
    matrix = np.ones((points.size, nodes.size))
    for j in range(nodes.size):
        others = np.delete(np.arange(nodes.size), j)
        matrix[:, j] = np.prod(diff[:, others], axis=1) / np.prod(nodes[j] - nodes[others])
    return matrix


def _to_points(values: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    # values (K, N, N, N, ...) -> (K, M, M, M, ...)
    out = np.einsum("ai,ki...->ka...", matrix, values)
    out = np.einsum("bj,kaj...->kab...", matrix, out)
    return np.einsum("cl,kabl...->kabc...", matrix, out)


def interpolation_error_norms(
    nodal: np.ndarray, exact: Callable[[np.ndarray], np.ndarray], mesh: Mesh, extra_points: int = 3
) -> ErrorNorms:
    """Norms of (interpolant of nodal values - exact) on a finer Gauss rule.

    Geometry and Jacobian are interpolated from the nodes as well, so the
    measured error is that of the isoparametric element representation.
    """
    op = build_sbp_1d(mesh.p)
    points, gauss_w = np.polynomial.legendre.leggauss(mesh.p + 1 + extra_points)
    matrix = interpolation_matrix(op.nodes, points)
    x = _to_points(mesh.coordinates, matrix)
    J = _to_points(mesh.jacobian, matrix)
    u = _to_points(np.asarray(nodal, dtype=float), matrix)
    weights = np.einsum("a,b,c->abc", gauss_w, gauss_w, gauss_w)[None] * J
    return weighted_norms(u - exact(x), weights)
