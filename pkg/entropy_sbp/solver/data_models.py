"""Solver state, entropy balance records and integrator settings."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass
class SurfaceEntropy:
    """Integrated surface entropy terms of one RHS evaluation.

    Each entry is already quadrature weighted; their sum is Xi.
    """

    heat_flow: float = 0.0  # prescribed g(t) on walls
    wall_dissipation: float = 0.0  # <= 0
    interface_dissipation: float = 0.0  # <= 0
    far_field: float = 0.0
    body_force: float = 0.0

    @property
    def total(self) -> float:
        return (
            self.heat_flow
            + self.wall_dissipation
            + self.interface_dissipation
            + self.far_field
            + self.body_force
        )


@dataclass
class SolverState:
    """Global conserved field with the work buffers filled by the RHS.

    Attributes:
        q: Conserved variables ``(K, N, N, N, 5)``
        t: Time
        v: Primitive variables of the last RHS evaluation
        w: Entropy variables of the last RHS evaluation
        theta: Entropy-variable gradients ``(K, N, N, N, 3, 5)``, None when inviscid
        viscous_flux: ``(K, N, N, N, 3, 5)`` physical-direction viscous fluxes
        surface: Surface entropy terms of the last RHS evaluation
        wall_force: Net force of the fluid on all walls, (p n - tau n) integrated
            over the wall faces
    """

    q: np.ndarray
    t: float = 0.0
    v: Optional[np.ndarray] = None
    w: Optional[np.ndarray] = None
    theta: Optional[np.ndarray] = None
    viscous_flux: Optional[np.ndarray] = None
    surface: SurfaceEntropy = field(default_factory=SurfaceEntropy)
    wall_force: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        self.q = np.asarray(self.q, dtype=float)
        if self.q.ndim != 5 or self.q.shape[-1] != 5:
            raise ValueError(f"Solution must be shaped (K, N, N, N, 5), got {self.q.shape}")
        if not self.q.shape[1] == self.q.shape[2] == self.q.shape[3]:
            raise ValueError(f"Elements must carry N x N x N nodes, got {self.q.shape[1:4]}")

    @property
    def n_elements(self) -> int:
        return self.q.shape[0]


@dataclass(frozen=True)
class EntropyBalanceRecord:
    """dS/dt + DT - Xi bookkeeping of one RHS evaluation, with the wall force."""

    t: float
    dSdt: float
    DT: float
    Xi: float
    residual: float
    force_x: float = 0.0
    force_y: float = 0.0
    force_z: float = 0.0

    def relative_residual(self, floor: float = 1e-14) -> float:
        """|residual| / max(|DT|, |dS/dt|, floor)."""
        scale = max(abs(self.DT), abs(self.dSdt), floor)
        return abs(self.residual) / scale


@dataclass(frozen=True)
class IntegratorConfig:
    """Adaptive Dormand-Prince settings.

    Attributes:
        atol: Absolute tolerance of the error norm
        rtol: Relative tolerance of the error norm
        safety: Safety factor on the proposed step
        k_p: Proportional gain (previous error exponent)
        k_i: Integral gain (current error exponent)
        h_min: Smallest admissible step
        h_max: Largest admissible step
        h_init: First trial step, None picks one from the initial RHS
        max_steps: Upper bound on attempted steps
    """

    atol: float = 1e-8
    rtol: float = 1e-8
    safety: float = 0.9
    k_p: float = 0.4 / 5.0
    k_i: float = 0.7 / 5.0
    h_min: float = 1e-12
    h_max: float = float("inf")
    h_init: Optional[float] = None
    max_steps: int = 100_000

    def __post_init__(self):
        if not (self.atol > 0.0 and self.rtol > 0.0):
            raise ValueError(f"Tolerances must be positive, got atol={self.atol}, rtol={self.rtol}")
        if not 0.0 < self.safety < 1.0:
            raise ValueError(f"Safety factor must be in (0, 1), got {self.safety}")
        if self.k_i < 0.0 or self.k_p < 0.0:
            raise ValueError("Controller gains must be non-negative")
        if not 0.0 < self.h_min <= self.h_max:
            raise ValueError(f"Need 0 < h_min <= h_max, got {self.h_min}, {self.h_max}")
        if self.h_init is not None and self.h_init <= 0.0:
            raise ValueError(f"Initial step must be positive, got {self.h_init}")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")


@dataclass
class ControllerHistory:
    """Memory of the PI controller: previous accepted error norm."""

    previous_error: float = 1.0
    accepted: int = 0
    rejected: int = 0


@dataclass
class IntegrationResult:
    """Outcome of ``integrate``; ``completed`` is False when max_steps ran out."""

    y: np.ndarray
    t: float
    accepted: int
    rejected: int
    rhs_evaluations: int
    last_step: float
    completed: bool = True
