"""Gas parameters and thermodynamic result containers."""

from dataclasses import dataclass
from enum import Enum

import numpy as np


class InviscidMode(Enum):
    """Two-point flux used at faces."""

    CONSERVATIVE = "conservative"  # entropy-conservative f^sc
    STABLE = "stable"  # entropy-stable f^ssr


@dataclass(frozen=True)
class GasParameters:
    """Calorically perfect gas with constant transport coefficients.

    Attributes:
        gamma: Ratio of specific heats
        R: Gas constant
        mu: Dynamic viscosity
        prandtl: Prandtl number
        T_inf: Reference temperature of the entropy s
        rho_inf: Reference density of the entropy s
    """

    gamma: float = 1.4
    R: float = 1.0
    mu: float = 0.0
    prandtl: float = 0.72
    T_inf: float = 1.0
    rho_inf: float = 1.0

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")
        if not self.R > 0.0:
            raise ValueError(f"R must be > 0, got {self.R}")
        if self.mu < 0.0:
            raise ValueError(f"mu must be >= 0, got {self.mu}")
        if not self.prandtl > 0.0:
            raise ValueError(f"Prandtl number must be > 0, got {self.prandtl}")
        if not (self.T_inf > 0.0 and self.rho_inf > 0.0):
            raise ValueError("Reference density and temperature must be positive")

    @property
    def cp(self) -> float:
        return self.gamma * self.R / (self.gamma - 1.0)

    @property
    def cv(self) -> float:
        return self.R / (self.gamma - 1.0)

    @property
    def kappa(self) -> float:
        """Thermal conductivity c_P mu / Pr."""
        return self.cp * self.mu / self.prandtl

    @property
    def is_viscous(self) -> bool:
        return self.mu > 0.0


@dataclass
class PotentialPack:
    """Entropy function, potentials and fluxes at a set of states.

    Arrays carry the leading shape of the input state; the ``_m`` fields add a
    trailing axis of length 3 for the coordinate directions.
    """

    S: np.ndarray  # entropy function -rho s
    s: np.ndarray  # thermodynamic entropy
    Phi: np.ndarray  # potential rho R
    Psi: np.ndarray  # potential fluxes rho R U_m
    F: np.ndarray  # entropy fluxes -rho s U_m
