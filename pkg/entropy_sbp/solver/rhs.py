"""Semi-discrete right-hand side on curvilinear hexahedral meshes.

Per element, in strong form with the metric Jacobian J multiplied through:

    J dq/dt = - sum_m 2 sum_k D_ik f^sc(q_i, q_k, (Ja^m_i + Ja^m_k) / 2)
              + sum_m D_m (sum_i Ja^m_i F^V_i)
              + P^-1 (wall, interface and far-field penalties)

followed by a constant body-force source. The flux-differencing volume term
telescopes to the end nodes, so every face penalty is in outward-normal form
and lifted by the inverse end weight of the LGL rule.
"""

from collections import defaultdict
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Union

import numpy as np
from loguru import logger

from ..boundaries.data_models import FarFieldSpec, WallSpec
from ..boundaries.far_field import far_field_penalty
from ..boundaries.interface import interface_penalty_prim
from ..boundaries.wall import wall_penalty, wall_traction, wall_viscous_state
from ..exceptions import AdmissibilityError, ConfigError
from ..mesh.data_models import Mesh
from ..operators.sbp import build_sbp_1d
from ..operators.tensor import face_index, tensor_apply
from ..physics.data_models import GasParameters, InviscidMode
from ..physics.fluxes import ec_flux_prim
from ..physics.gas import cons_to_prim, entropy_variables
from ..physics.viscous import viscous_fluxes
from .data_models import SolverState, SurfaceEntropy
from .gradients import FaceLift, ldg_gradients, scaled_face_normal

BoundarySpec = Union[WallSpec, FarFieldSpec]


@dataclass
class BoundaryGroup:
    """Faces with the same boundary name and local face id."""

    name: str
    face: int
    elements: np.ndarray
    normal: np.ndarray  # (nf, N, N, 3) scaled outward normal
    area: np.ndarray  # (nf, N, N)
    coordinates: np.ndarray  # (nf, N, N, 3)
    spec: BoundarySpec
    beta: Optional[np.ndarray] = None  # (nf, 1, 1) wall penalty from the mesh

    @property
    def unit_normal(self) -> np.ndarray:
        return self.normal / self.area[..., None]


@dataclass
class InterfaceGroup:
    """Interfaces sharing the (left face, right face) pair.

    Right-side arrays are stored in left-face node order; ``node_maps``
    converts between the orderings.
    """

    left_face: int
    right_face: int
    left_elements: np.ndarray
    right_elements: np.ndarray
    node_maps: np.ndarray  # (nf, N*N)
    normal_left: np.ndarray
    normal_right: np.ndarray
    beta: np.ndarray  # (nf, 1, 1)


class SpatialOperator:
    """Precomputed face bookkeeping and the RHS evaluation for one mesh.

    Args:
        mesh: Mesh with metrics
        gas: Gas parameters
        boundary_conditions: Boundary spec per boundary face name
        mode: Two-point flux on interfaces
        body_force: Constant body force per unit volume (momentum source G,
            energy source G . U)
        interface_beta: Interface-penalty coefficient used in stable mode;
            None takes 1 / h with h the left element's volume^(1/3)
    """

    def __init__(
        self,
        mesh: Mesh,
        gas: GasParameters,
        boundary_conditions: Mapping[str, BoundarySpec],
        mode: InviscidMode = InviscidMode.CONSERVATIVE,
        body_force: Optional[Sequence[float]] = None,
        interface_beta: Optional[float] = None,
    ):
        self.mesh = mesh
        self.gas = gas
        self.mode = mode
        self.op = build_sbp_1d(mesh.p)
        self.body_force = None if body_force is None else np.asarray(body_force, dtype=float).reshape(3)

        missing = [name for name in mesh.boundary_names if name not in boundary_conditions]
        if missing:
            raise ConfigError(f"No boundary condition given for faces {missing}")

        face_weights = self.op.weights
        self.face_weights = np.outer(face_weights, face_weights)
        self.inv_end = 1.0 / face_weights[0]
        self.quadrature = mesh.quadrature_weights()

        self.boundary_groups = self._group_boundaries(boundary_conditions)
        self.interface_groups = self._group_interfaces(interface_beta)
        logger.debug(
            f"Spatial operator: {len(self.boundary_groups)} boundary groups, "
            f"{len(self.interface_groups)} interface groups, mode={mode.value}"
        )

    def _group_boundaries(self, boundary_conditions: Mapping[str, BoundarySpec]) -> List[BoundaryGroup]:
        members: Dict[tuple, List[int]] = defaultdict(list)
        for bface in self.mesh.boundary_faces:
            members[(bface.name, bface.face)].append(bface.element)

        volumes = self.mesh.element_volumes()
        groups = []
        n_nodes = self.op.n_nodes
        for (name, face), elements in sorted(members.items()):
            elements = np.asarray(elements, dtype=int)
            normal = scaled_face_normal(self.mesh.metrics, elements, face)
            area = np.linalg.norm(normal, axis=-1)
            coords = self.mesh.coordinates[(elements,) + face_index(face, n_nodes)]
            spec = boundary_conditions[name]
            beta = None
            if (
                isinstance(spec, WallSpec)
                and spec.beta is None
                and spec.inviscid_mode is InviscidMode.STABLE
            ):
                # normal height = element volume / face area
                face_area = np.sum(self.face_weights * area, axis=(1, 2))
                beta = (face_area / volumes[elements])[:, None, None]
            groups.append(
                BoundaryGroup(
                    name=name,
                    face=face,
                    elements=elements,
                    normal=normal,
                    area=area,
                    coordinates=coords,
                    spec=spec,
                    beta=beta,
                )
            )
        return groups

    def _group_interfaces(self, interface_beta: Optional[float]) -> List[InterfaceGroup]:
        members: Dict[tuple, list] = defaultdict(list)
        for pairing in self.mesh.interfaces:
            members[(pairing.left_face, pairing.right_face)].append(pairing)

        volumes = self.mesh.element_volumes()
        groups = []
        for (left_face, right_face), pairings in sorted(members.items()):
            left = np.array([pr.left_element for pr in pairings], dtype=int)
            right = np.array([pr.right_element for pr in pairings], dtype=int)
            maps = np.stack([np.asarray(pr.node_map, dtype=int) for pr in pairings])
            normal_left = scaled_face_normal(self.mesh.metrics, left, left_face)
            normal_right = self._to_left_order(
                scaled_face_normal(self.mesh.metrics, right, right_face), maps
            )
            if interface_beta is None:
                beta = 1.0 / np.cbrt(volumes[left])
            else:
                beta = np.full(left.shape, float(interface_beta))
            groups.append(
                InterfaceGroup(
                    left_face=left_face,
                    right_face=right_face,
                    left_elements=left,
                    right_elements=right,
                    node_maps=maps,
                    normal_left=normal_left,
                    normal_right=normal_right,
                    beta=beta[:, None, None],
                )
            )
        return groups

    def _to_left_order(self, values: np.ndarray, maps: np.ndarray) -> np.ndarray:
        nf, n = values.shape[0], self.op.n_nodes
        flat = values.reshape((nf, n * n) + values.shape[3:])
        rows = np.arange(nf)[:, None]
        return flat[rows, maps].reshape(values.shape)

    def _to_right_order(self, values: np.ndarray, maps: np.ndarray) -> np.ndarray:
        nf, n = values.shape[0], self.op.n_nodes
        flat = values.reshape((nf, n * n) + values.shape[3:])
        out = np.empty_like(flat)
        out[np.arange(nf)[:, None], maps] = flat
        return out.reshape(values.shape)

    def _gather(self, field: np.ndarray, elements: np.ndarray, face: int) -> np.ndarray:
        return field[(elements,) + face_index(face, self.op.n_nodes)]

    def _lift(self, target: np.ndarray, elements: np.ndarray, face: int, values: np.ndarray) -> None:
        target[(elements,) + face_index(face, self.op.n_nodes)] += self.inv_end * values

    def gradient_lifts(self, v: np.ndarray, w: np.ndarray, t: float) -> List[FaceLift]:
        """Face penalties of the gradient equation, 1/2 (w_ghost - w) on every face."""
        lifts = []
        for grp in self.interface_groups:
            wL = self._gather(w, grp.left_elements, grp.left_face)
            wR = self._to_left_order(self._gather(w, grp.right_elements, grp.right_face), grp.node_maps)
            # central lifting: each side sees half the jump
            half_jump = 0.5 * (wR - wL)
            lifts.append(FaceLift(grp.left_elements, grp.left_face, half_jump))
            lifts.append(
                FaceLift(grp.right_elements, grp.right_face, self._to_right_order(-half_jump, grp.node_maps))
            )
        for grp in self.boundary_groups:
            v_b = self._gather(v, grp.elements, grp.face)
            w_b = self._gather(w, grp.elements, grp.face)
            if isinstance(grp.spec, WallSpec):
                ghost = wall_viscous_state(v_b, grp.spec, grp.unit_normal, grp.coordinates)
                w_ghost = entropy_variables(ghost, self.gas)
            else:
                w_ghost = np.broadcast_to(entropy_variables(grp.spec.state, self.gas), w_b.shape)
            lifts.append(FaceLift(grp.elements, grp.face, 0.5 * (w_ghost - w_b)))
        return lifts

    def inviscid_volume(self, v: np.ndarray) -> np.ndarray:
        """- sum_m 2 sum_k D_ik f^sc(v_i, v_k, metric average) per node."""
        D = self.op.D
        out = np.zeros_like(v)
        for d in range(3):
            # node line along direction d in the second-to-last axis
            vv = np.moveaxis(v, 1 + d, -2)
            ja = np.moveaxis(self.mesh.metrics[..., d, :], 1 + d, -2)
            n_avg = 0.5 * (ja[..., :, None, :] + ja[..., None, :, :])
            f = ec_flux_prim(vv[..., :, None, :], vv[..., None, :, :], n_avg, self.gas)
            div = 2.0 * np.einsum("ik,...ika->...ia", D, f)
            out -= np.moveaxis(div, -2, 1 + d)
        return out

    def viscous_volume(self, F: np.ndarray) -> np.ndarray:
        """sum_m D_m (sum_i Ja^m_i F_i)."""
        out = np.zeros(F.shape[:-2] + (5,))
        for m in range(3):
            contravariant = np.einsum("...i,...ia->...a", self.mesh.metrics[..., m, :], F)
            out += tensor_apply(self.op.D, m + 1, contravariant)
        return out

    def _interface_terms(self, v, F, J_rhs, surface: SurfaceEntropy) -> None:
        for grp in self.interface_groups:
            vL = self._gather(v, grp.left_elements, grp.left_face)
            vR = self._to_left_order(self._gather(v, grp.right_elements, grp.right_face), grp.node_maps)
            FL = FR = None
            if F is not None:
                FL = self._gather(F, grp.left_elements, grp.left_face)
                FR = self._to_left_order(self._gather(F, grp.right_elements, grp.right_face), grp.node_maps)
            # interior penalty only with the dissipative coupling
            beta = grp.beta if self.mode is InviscidMode.STABLE else None
            penalty = interface_penalty_prim(
                vL, vR, FL, FR, grp.normal_left, self.mode, self.gas, beta=beta, nR=grp.normal_right
            )
            self._lift(J_rhs, grp.left_elements, grp.left_face, penalty.g_q_left)
            self._lift(
                J_rhs,
                grp.right_elements,
                grp.right_face,
                self._to_right_order(penalty.g_q_right, grp.node_maps),
            )
            surface.interface_dissipation += float(
                np.sum(self.face_weights * (penalty.dissipation_left + penalty.dissipation_right))
            )

    def _boundary_terms(self, v, theta, F, t, J_rhs, surface: SurfaceEntropy) -> np.ndarray:
        """Lift the boundary penalties; returns the net wall force."""
        force = np.zeros(3)
        for grp in self.boundary_groups:
            v_b = self._gather(v, grp.elements, grp.face)
            if isinstance(grp.spec, WallSpec):
                theta_b = None if theta is None else self._gather(theta, grp.elements, grp.face)
                penalty = wall_penalty(
                    v_b,
                    theta_b,
                    grp.spec,
                    grp.unit_normal,
                    t,
                    self.gas,
                    x=grp.coordinates,
                    beta=grp.beta,
                )
                # wall penalties are per unit area
                self._lift(J_rhs, grp.elements, grp.face, grp.area[..., None] * penalty.g_q)
                weighted = self.face_weights * grp.area
                surface.heat_flow += float(np.sum(weighted * penalty.heat_flow))
                surface.wall_dissipation += float(np.sum(weighted * penalty.entropy_dissipation))
                traction = wall_traction(v_b, theta_b, grp.unit_normal, self.gas)
                force += np.einsum("...,...i->i", weighted, traction)
            else:
                F_b = None if F is None else self._gather(F, grp.elements, grp.face)
                penalty = far_field_penalty(v_b, F_b, grp.spec, grp.normal, self.gas)
                self._lift(J_rhs, grp.elements, grp.face, penalty.g_q)
                surface.far_field += float(np.sum(self.face_weights * penalty.entropy_exchange))
        return force

    def evaluate(self, state: SolverState) -> np.ndarray:
        """dq/dt at ``state``; fills the state's work buffers.

        Raises:
            AdmissibilityError: density or temperature is non-positive at some
                node; ``element`` and ``node`` name it
        """
        try:
            v = cons_to_prim(state.q, self.gas)
        except AdmissibilityError as exc:
            logger.error(
                f"Inadmissible state at t={state.t:.6e}: element {exc.element}, node {exc.node}"
            )
            raise
        w = entropy_variables(v, self.gas)
        J = self.mesh.jacobian

        theta = F = None
        if self.gas.is_viscous:
            theta = ldg_gradients(
                w, J, self.mesh.metrics, self.op, self.gradient_lifts(v, w, state.t)
            )
            F = viscous_fluxes(v, theta, self.gas)

        surface = SurfaceEntropy()
        J_rhs = self.inviscid_volume(v)
        if F is not None:
            J_rhs += self.viscous_volume(F)
        self._interface_terms(v, F, J_rhs, surface)
        wall_force = self._boundary_terms(v, theta, F, state.t, J_rhs, surface)

        rhs = J_rhs / J[..., None]
        # source G, G . U after dividing by J; its entropy contraction enters Xi
        if self.body_force is not None:
            source = np.zeros_like(rhs)
            source[..., 1:4] = self.body_force
            source[..., 4] = np.sum(v[..., 1:4] * self.body_force, axis=-1)
            rhs += source
            surface.body_force = float(np.sum(self.quadrature * np.sum(w * source, axis=-1)))

        state.v, state.w, state.theta, state.viscous_flux = v, w, theta, F
        state.surface = surface
        state.wall_force = wall_force
        return rhs

    def __call__(self, q: np.ndarray, t: float) -> np.ndarray:
        return self.evaluate(SolverState(q=q, t=t))


def compute_rhs(
    state: SolverState,
    mesh: Mesh,
    gas: GasParameters,
    boundary_conditions: Mapping[str, BoundarySpec],
    mode: InviscidMode = InviscidMode.CONSERVATIVE,
    body_force: Optional[Sequence[float]] = None,
) -> np.ndarray:
    """dq/dt for ``state`` on ``mesh``; see ``SpatialOperator``."""
    operator = SpatialOperator(mesh, gas, boundary_conditions, mode=mode, body_force=body_force)
    return operator.evaluate(state)
