"""Mesh data models."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Tuple

import numpy as np
import orjson

from ..operators.sbp import build_sbp_1d


class BoundaryTag(Enum):
    WALL = "wall"
    FAR_FIELD = "far_field"
    PERIODIC = "periodic"


@dataclass
class FacePairing:
    """Conforming interface between two element faces.

    ``node_map[i]`` is the right-face node (flattened in face order) matched
    to left-face node i. ``shift`` translates right coordinates onto the left
    ones (non-zero only across periodic boundaries).
    """

    left_element: int
    left_face: int
    right_element: int
    right_face: int
    node_map: np.ndarray
    normal: np.ndarray  # (N, N, 3) unit normal, outward from the left element
    shift: np.ndarray = field(default_factory=lambda: np.zeros(3))
    tag: BoundaryTag = BoundaryTag.PERIODIC

    def __post_init__(self):
        perm = np.sort(np.asarray(self.node_map))
        if not np.array_equal(perm, np.arange(perm.size)):
            raise ValueError("Face node map must be a permutation")


@dataclass(frozen=True)
class BoundaryFace:
    element: int
    face: int
    name: str
    tag: BoundaryTag = BoundaryTag.WALL


@dataclass
class Mesh:
    """Hexahedral mesh with collocated curvilinear metrics.

    Attributes:
        p: Polynomial order of every element
        coordinates: ``(K, N, N, N, 3)`` node coordinates
        jacobian: ``(K, N, N, N)`` metric Jacobian J
        metrics: ``(K, N, N, N, 3, 3)`` contravariant vectors, [..., m, i] = J a^m_i
        interfaces: Interior and periodic face pairings
        boundary_faces: Faces on named physical boundaries
        gcl_residual: max |sum_m D_m (J a^m)| over all nodes
    """

    p: int
    coordinates: np.ndarray
    jacobian: np.ndarray
    metrics: np.ndarray
    interfaces: List[FacePairing]
    boundary_faces: List[BoundaryFace]
    gcl_residual: float
    element_grid: Tuple[int, int, int] = (1, 1, 1)
    name: str = "mesh"

    @property
    def n_elements(self) -> int:
        return self.coordinates.shape[0]

    @property
    def n_nodes(self) -> int:
        return self.p + 1

    @property
    def min_jacobian(self) -> float:
        return float(self.jacobian.min())

    @property
    def boundary_names(self) -> List[str]:
        return sorted({face.name for face in self.boundary_faces})

    def quadrature_weights(self) -> np.ndarray:
        """Volume weights w_i w_j w_k J per node, ``(K, N, N, N)``."""
        w = build_sbp_1d(self.p).weights
        return np.einsum("i,j,k->ijk", w, w, w)[None] * self.jacobian

    def element_volumes(self) -> np.ndarray:
        return self.quadrature_weights().reshape(self.n_elements, -1).sum(axis=1)

    def total_volume(self) -> float:
        return float(self.quadrature_weights().sum())

    def faces_named(self, name: str) -> List[BoundaryFace]:
        return [face for face in self.boundary_faces if face.name == name]

    def summary(self) -> Dict:
        """Structured summary: counts, GCL residual, Jacobian range."""
        counts: Dict[str, int] = {}
        for face in self.boundary_faces:
            counts[face.name] = counts.get(face.name, 0) + 1
        return {
            "name": self.name,
            "p": self.p,
            "elements": self.n_elements,
            "element_grid": list(self.element_grid),
            "interfaces": len(self.interfaces),
            "boundary_faces": counts,
            "gcl_residual": float(self.gcl_residual),
            "min_jacobian": self.min_jacobian,
            "max_jacobian": float(self.jacobian.max()),
            "volume": self.total_volume(),
        }

    def summary_json(self) -> str:
        return orjson.dumps(self.summary(), option=orjson.OPT_INDENT_2).decode()
