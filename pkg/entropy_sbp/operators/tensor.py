"""Tensor-product application of 1D operators on hexahedral node blocks.

Nodal fields are stored as arrays shaped ``(..., N, N, N, C)``: three node axes
for the reference directions xi_1, xi_2, xi_3 followed by a component axis.
The lexicographic node index ``(i * N + j) * N + k`` of a flattened block
matches the Kronecker ordering ``A (x) I (x) I`` for direction 1.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

# face id = 2 * (direction - 1) + side, side 0 at xi = -1 and side 1 at xi = +1
N_FACES = 6


def face_direction(face_id: int) -> int:
    """Reference direction (1..3) normal to a face."""
    _check_face(face_id)
    return face_id // 2 + 1


def face_sign(face_id: int) -> int:
    """Orientation sign of a face: -1 on the xi = -1 face, +1 on xi = +1."""
    _check_face(face_id)
    return -1 if face_id % 2 == 0 else 1


def _check_face(face_id: int) -> None:
    if not 0 <= face_id < N_FACES:
        raise ValueError(f"Face id must be in 0..5, got {face_id}")


def _node_axis(direction: int) -> int:
    if direction not in (1, 2, 3):
        raise ValueError(f"Direction must be 1, 2 or 3, got {direction}")
    return direction - 5


def tensor_apply(matrix: np.ndarray, direction: int, field: np.ndarray) -> np.ndarray:
    """Apply a 1D operator along one reference direction of a nodal field.

    Args:
        matrix: N x N operator (D, Q, P^-1 ...)
        direction: 1, 2 or 3
        field: ``(..., N, N, N, C)`` array, or a flat vector of length N^3 * 5

    Returns:
        Array shaped like ``field``
    """
    axis = _node_axis(direction)
    matrix = np.asarray(matrix)
    n_nodes = matrix.shape[0]

    flat_input = np.ndim(field) == 1
    if flat_input:
        if field.size != n_nodes**3 * 5:
            raise ValueError(f"Flat field of length {field.size} does not match N={n_nodes}")
        field = field.reshape(n_nodes, n_nodes, n_nodes, 5)

    result = np.moveaxis(np.tensordot(matrix, field, axes=([1], [axis])), 0, axis)
    return result.reshape(-1) if flat_input else result


def face_index(face_id: int, n_nodes: int) -> Tuple[slice, ...]:
    """Index tuple selecting a face from the node axes of a block.

    Use as ``field[(..., *face_index(f, N), slice(None))]``; the remaining two
    node axes keep their ascending order.
    """
    direction = face_direction(face_id)
    pos = 0 if face_sign(face_id) < 0 else n_nodes - 1
    index = [slice(None)] * 3
    index[direction - 1] = pos
    return tuple(index)


def face_values(field: np.ndarray, face_id: int, trailing: int = 1) -> np.ndarray:
    """Face restriction of a nodal field.

    ``trailing`` counts the non-node axes after the three node axes, so a
    ``(..., N, N, N, C)`` field (trailing=1) becomes ``(..., N, N, C)``.
    """
    n_nodes = field.shape[-3 - trailing]
    tail = (slice(None),) * trailing
    return field[(Ellipsis, *face_index(face_id, n_nodes), *tail)]


def face_scalar(field: np.ndarray, face_id: int) -> np.ndarray:
    """Face restriction of a ``(..., N, N, N)`` scalar field -> ``(..., N, N)``."""
    return face_values(field, face_id, trailing=0)


@dataclass(frozen=True)
class TensorLayout:
    """Index bookkeeping for an N x N x N node block."""

    n_nodes: int

    @property
    def n_total(self) -> int:
        return self.n_nodes**3

    def node_index(self, i: int, j: int, k: int) -> int:
        n = self.n_nodes
        return (i * n + j) * n + k

    def node_ijk(self, index: int) -> Tuple[int, int, int]:
        n = self.n_nodes
        i, rest = divmod(index, n * n)
        j, k = divmod(rest, n)
        return i, j, k

    def face_nodes(self, face_id: int) -> np.ndarray:
        """Flat node indices of a face, in the order of ``face_values``."""
        grid = np.arange(self.n_total).reshape(self.n_nodes, self.n_nodes, self.n_nodes)
        return np.ascontiguousarray(grid[face_index(face_id, self.n_nodes)]).reshape(-1)

    def boundary_nodes(self, direction: int) -> np.ndarray:
        """All nodes on the two faces normal to ``direction``."""
        minus = self.face_nodes(2 * (direction - 1))
        plus = self.face_nodes(2 * (direction - 1) + 1)
        return np.concatenate([minus, plus])
