"""Boundary specifications and penalty containers."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from ..physics.data_models import InviscidMode


class HeatFlowKind(Enum):
    CONSTANT = "constant"
    SINUSOID = "sinusoid"


@dataclass(frozen=True)
class HeatEntropyFlow:
    """Prescribed heat entropy flow g(t) = kappa (dT/dn) / T on a wall.

    ``constant``: g(t) = amplitude. ``sinusoid``: g(t) = amplitude sin(2 pi f t).
    A zero amplitude is an adiabatic wall.
    """

    kind: HeatFlowKind = HeatFlowKind.CONSTANT
    amplitude: float = 0.0
    frequency: float = 0.0

    def __call__(self, t: float) -> float:
        if self.kind is HeatFlowKind.SINUSOID:
            return self.amplitude * np.sin(2.0 * np.pi * self.frequency * t)
        return self.amplitude

    @property
    def is_adiabatic(self) -> bool:
        return self.amplitude == 0.0


@dataclass(frozen=True)
class WallSpec:
    """Solid wall data for the entropy-stable no-slip treatment.

    The wall velocity is ``velocity`` plus, when ``angular_velocity`` is set,
    the rigid rotation omega x (x - rotation_center). When ``normal`` is given
    the translational velocity is checked for tangency at construction.

    ``beta`` left as None means no interior penalty at the point level; the
    mesh assembly replaces it by 1 / (element normal height) on stable walls.
    """

    velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))
    heat_flow: HeatEntropyFlow = field(default_factory=HeatEntropyFlow)
    beta: Optional[float] = None
    inviscid_mode: InviscidMode = InviscidMode.CONSERVATIVE
    angular_velocity: Optional[np.ndarray] = None
    rotation_center: Optional[np.ndarray] = None
    normal: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "velocity", np.asarray(self.velocity, dtype=float).reshape(3))
        if self.beta is not None and self.beta < 0.0:
            raise ValueError(f"Wall dissipation coefficient beta must be >= 0, got {self.beta}")
        if self.angular_velocity is not None:
            object.__setattr__(
                self, "angular_velocity", np.asarray(self.angular_velocity, dtype=float).reshape(3)
            )
            center = np.zeros(3) if self.rotation_center is None else self.rotation_center
            object.__setattr__(self, "rotation_center", np.asarray(center, dtype=float).reshape(3))
        if self.normal is not None:
            n = np.asarray(self.normal, dtype=float).reshape(3)
            n = n / np.linalg.norm(n)
            object.__setattr__(self, "normal", n)
            speed = np.linalg.norm(self.velocity)
            if abs(np.dot(self.velocity, n)) > 1e-12 * max(speed, 1e-300):
                raise ValueError(
                    f"Wall velocity {self.velocity} is not tangent to the wall normal {n}"
                )

    def wall_velocity(self, x: Optional[np.ndarray], normal: np.ndarray) -> np.ndarray:
        """Wall velocity at face points, projected onto the tangent plane.

        Args:
            x: Face point coordinates ``(..., 3)`` (needed for rotation)
            normal: Unit outward normals ``(..., 3)``
        """
        normal = np.asarray(normal, dtype=float)
        U_wall = np.broadcast_to(self.velocity, normal.shape).copy()
        if self.angular_velocity is not None:
            if x is None:
                raise ValueError("Rotating wall needs face coordinates")
            U_wall = U_wall + np.cross(self.angular_velocity, np.asarray(x) - self.rotation_center)
        # roundoff on curved faces must not leak a normal component
        return U_wall - np.sum(U_wall * normal, axis=-1, keepdims=True) * normal


@dataclass(frozen=True)
class FarFieldSpec:
    """Frozen free-stream primitive state (rho, U1, U2, U3, T)."""

    state: np.ndarray

    def __post_init__(self):
        state = np.asarray(self.state, dtype=float).reshape(5)
        if state[0] <= 0.0 or state[4] <= 0.0:
            raise ValueError(f"Far-field state must have positive rho and T, got {state}")
        object.__setattr__(self, "state", state)


@dataclass
class WallPenalty:
    """Point-wise wall penalties in outward-normal form.

    ``g_q`` is added to the conserved-variable equation and ``g_theta`` to the
    gradient equation as n_j * g_theta for direction j, both lifted by the
    inverse face quadrature weight. Arrays carry the leading shape of the
    wall points.
    """

    g_q: np.ndarray
    g_theta: np.ndarray
    entropy_dissipation: np.ndarray  # w^T (f^sc - f*) + w^T M, <= 0
    heat_flow: np.ndarray  # g(t) contribution to the entropy balance
