"""Analytic structured hexahedral meshes (box, perturbed box, annulus)."""

from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from ..exceptions import MismatchedFaceError
from ..operators.sbp import build_sbp_1d
from ..operators.tensor import face_values
from .data_models import BoundaryFace, BoundaryTag, FacePairing, Mesh
from .metrics import compute_metrics

Mapping3D = Callable[[np.ndarray], np.ndarray]

BOX_FACE_NAMES = {
    (0, 0): "x_min",
    (0, 1): "x_max",
    (1, 0): "y_min",
    (1, 1): "y_max",
    (2, 0): "z_min",
    (2, 1): "z_max",
}


def _element_id(idx: Sequence[int], grid: Sequence[int]) -> int:
    return (idx[0] * grid[1] + idx[1]) * grid[2] + idx[2]


def _structured_mesh(
    mapping: Mapping3D,
    grid: Tuple[int, int, int],
    p: int,
    periodic: Sequence[bool],
    shifts: Sequence[np.ndarray],
    face_names: Mapping[Tuple[int, int], str],
    boundary_tags: Optional[Mapping[str, BoundaryTag]],
    name: str,
) -> Mesh:
    """Map a logical unit cube split into ``grid`` elements through ``mapping``.

    Logical coordinates s in [0, 1]^3; element (a, b, c) covers
    [a, a+1]/nx x [b, b+1]/ny x [c, c+1]/nz.
    """
    op = build_sbp_1d(p)
    n = op.n_nodes
    local = 0.5 * (op.nodes + 1.0)
    tags = dict(boundary_tags or {})

    index_grid = np.stack(
        np.meshgrid(*(np.arange(g) for g in grid), indexing="ij"), axis=-1
    ).reshape(-1, 3)
    logical = np.empty((index_grid.shape[0], n, n, n, 3))
    for d in range(3):
        values = (index_grid[:, d, None] + local[None, :]) / grid[d]
        shape = [index_grid.shape[0], 1, 1, 1]
        shape[d + 1] = n
        logical[..., d] = values.reshape(shape)

    coordinates = mapping(logical)
    J, Ja, gcl = compute_metrics(coordinates, op)

    interfaces = []
    boundary_faces = []
    identity = np.arange(n * n)
    for elem_idx in index_grid:
        elem = _element_id(elem_idx, grid)
        for d in range(3):
            if elem_idx[d] == 0 and not periodic[d]:
                face_name = face_names[(d, 0)]
                tag = tags.get(face_name, BoundaryTag.WALL)
                boundary_faces.append(BoundaryFace(elem, 2 * d, face_name, tag))
            if elem_idx[d] < grid[d] - 1 or periodic[d]:
                wrap = elem_idx[d] == grid[d] - 1
                nb_idx = np.array(elem_idx)
                nb_idx[d] = 0 if wrap else elem_idx[d] + 1
                nb = _element_id(nb_idx, grid)
                shift = np.asarray(shifts[d], dtype=float) if wrap else np.zeros(3)
                x_left = face_values(coordinates[elem], 2 * d + 1)
                x_right = face_values(coordinates[nb], 2 * d) + shift
                scale = max(1.0, float(np.max(np.abs(x_left))))
                if np.max(np.abs(x_left - x_right)) > 1e-12 * scale:
                    raise MismatchedFaceError(
                        f"Faces of elements {elem} and {nb} do not coincide in direction {d + 1}"
                    )
                scaled = face_values(Ja[elem][..., d, :], 2 * d + 1, trailing=1)
                normal = scaled / np.linalg.norm(scaled, axis=-1, keepdims=True)
                interfaces.append(
                    FacePairing(
                        left_element=elem,
                        left_face=2 * d + 1,
                        right_element=nb,
                        right_face=2 * d,
                        node_map=identity.copy(),
                        normal=normal,
                        shift=shift,
                        tag=BoundaryTag.PERIODIC if wrap else BoundaryTag.WALL,
                    )
                )
            elif elem_idx[d] == grid[d] - 1:
                face_name = face_names[(d, 1)]
                tag = tags.get(face_name, BoundaryTag.WALL)
                boundary_faces.append(BoundaryFace(elem, 2 * d + 1, face_name, tag))

    mesh = Mesh(
        p=p,
        coordinates=coordinates,
        jacobian=J,
        metrics=Ja,
        interfaces=interfaces,
        boundary_faces=boundary_faces,
        gcl_residual=gcl,
        element_grid=tuple(int(g) for g in grid),
        name=name,
    )
    logger.info(
        f"Built {name} mesh: {mesh.n_elements} elements, p={p}, "
        f"GCL residual {gcl:.2e}, min J {mesh.min_jacobian:.3e}"
    )
    return mesh


def _check_counts(counts: Sequence[int]) -> None:
    if any(int(c) != c or c < 1 for c in counts):
        raise ValueError(f"Element counts must be positive integers, got {tuple(counts)}")


def build_box_mesh(
    nx: int,
    ny: int,
    nz: int,
    lengths: Sequence[float] = (1.0, 1.0, 1.0),
    p: int = 3,
    periodic: Sequence[bool] = (False, False, False),
    origin: Sequence[float] = (0.0, 0.0, 0.0),
    boundary_tags: Optional[Mapping[str, BoundaryTag]] = None,
) -> Mesh:
    """Cartesian box of affine elements; faces named x_min ... z_max."""
    _check_counts((nx, ny, nz))
    lengths = np.asarray(lengths, dtype=float)
    if np.any(lengths <= 0.0):
        raise ValueError(f"Box lengths must be positive, got {lengths}")
    origin = np.asarray(origin, dtype=float)

    def mapping(s: np.ndarray) -> np.ndarray:
        return origin + s * lengths

    shifts = [np.eye(3)[d] * lengths[d] for d in range(3)]
    return _structured_mesh(
        mapping, (nx, ny, nz), p, periodic, shifts, BOX_FACE_NAMES, boundary_tags, "box"
    )


def build_perturbed_box_mesh(
    n: int,
    lengths: Sequence[float] = (1.0, 1.0, 1.0),
    p: int = 3,
    amplitude: float = 0.05,
    periodic: Sequence[bool] = (True, True, True),
    boundary_tags: Optional[Mapping[str, BoundaryTag]] = None,
) -> Mesh:
    """Box with the interior warped by amplitude * sin(2 pi s1) sin(2 pi s2) sin(2 pi s3).

    The warp vanishes on the box faces, so periodic pairing stays exact.
    """
    _check_counts((n,))
    lengths = np.asarray(lengths, dtype=float)
    if lengths.shape != (3,) or np.any(lengths <= 0.0):
        raise ValueError(f"Box lengths must be 3 positive values, got {lengths}")

    def mapping(s: np.ndarray) -> np.ndarray:
        bump = amplitude * np.prod(np.sin(2.0 * np.pi * s), axis=-1)
        return (s + bump[..., None]) * lengths

    shifts = [np.eye(3)[d] * lengths[d] for d in range(3)]
    return _structured_mesh(
        mapping, (n, n, n), p, periodic, shifts, BOX_FACE_NAMES, boundary_tags, "perturbed_box"
    )


def build_annulus_mesh(
    R_i: float,
    R_o: float,
    nr: int,
    ntheta: int,
    nz: int,
    length: float,
    p: int,
    boundary_tags: Optional[Mapping[str, BoundaryTag]] = None,
) -> Mesh:
    """Annular pipe along x1 with exact cylindrical element mappings.

    Reference directions: xi_1 axial (periodic, ``nz`` elements), xi_2 radial
    (walls ``inner`` and ``outer``, ``nr`` elements), xi_3 azimuthal (closed,
    ``ntheta`` elements).
    """
    if not 0.0 < R_i < R_o:
        raise ValueError(f"Annulus needs 0 < R_i < R_o, got R_i={R_i}, R_o={R_o}")
    if length <= 0.0:
        raise ValueError(f"Pipe length must be positive, got {length}")
    _check_counts((nr, ntheta, nz))

    def mapping(s: np.ndarray) -> np.ndarray:
        r = R_i + (R_o - R_i) * s[..., 1]
        theta = 2.0 * np.pi * s[..., 2]
        return np.stack([length * s[..., 0], r * np.cos(theta), r * np.sin(theta)], axis=-1)

    names: Dict[Tuple[int, int], str] = {
        (0, 0): "inlet",
        (0, 1): "outlet",
        (1, 0): "inner",
        (1, 1): "outer",
        (2, 0): "theta_min",
        (2, 1): "theta_max",
    }
    shifts = [np.array([length, 0.0, 0.0]), np.zeros(3), np.zeros(3)]
    return _structured_mesh(
        mapping, (nz, nr, ntheta), p, (True, False, True), shifts, names, boundary_tags, "annulus"
    )
