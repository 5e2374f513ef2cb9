"""Analytic initial states on mesh nodes."""

from typing import Sequence

import numpy as np

from ..mesh.data_models import Mesh
from ..physics.data_models import GasParameters
from ..physics.gas import prim_to_cons


def uniform_state(
    mesh: Mesh,
    gas: GasParameters,
    density: float = 1.0,
    velocity: Sequence[float] = (0.0, 0.0, 0.0),
    temperature: float = 1.0,
) -> np.ndarray:
    v = np.empty(mesh.coordinates.shape[:-1] + (5,))
    v[..., 0] = density
    v[..., 1:4] = np.asarray(velocity, dtype=float)
    v[..., 4] = temperature
    return prim_to_cons(v, gas)


def annulus_axial_velocity(r: np.ndarray, R_i: float, R_o: float, G: float, mu: float) -> np.ndarray:
    """Fully developed axial velocity in an annular pipe driven by a body force G.

    U1(r) = G / (4 mu) [(R_i^2 - r^2) + (R_o^2 - R_i^2) ln(r / R_i) / ln(R_o / R_i)]
    """
    r = np.asarray(r, dtype=float)
    return (G / (4.0 * mu)) * (
        (R_i**2 - r**2) + (R_o**2 - R_i**2) * np.log(r / R_i) / np.log(R_o / R_i)
    )


def annulus_peak_velocity(R_i: float, R_o: float, G: float, mu: float) -> float:
    """Maximum of ``annulus_axial_velocity`` (where dU1/dr = 0)."""
    r_star = np.sqrt((R_o**2 - R_i**2) / (2.0 * np.log(R_o / R_i)))
    return float(annulus_axial_velocity(r_star, R_i, R_o, G, mu))


def annulus_temperature(R_i: float, R_o: float, G: float, mu: float, mach: float, gas: GasParameters) -> float:
    """Temperature giving peak Mach number ``mach`` for the annulus profile."""
    c = annulus_peak_velocity(R_i, R_o, G, mu) / mach
    return c**2 / (gas.gamma * gas.R)


def annulus_state(
    mesh: Mesh,
    gas: GasParameters,
    R_i: float,
    R_o: float,
    G: float,
    density: float = 1.0,
    mach: float = 1e-2,
) -> np.ndarray:
    """Axial annulus profile at uniform density and temperature."""
    x = mesh.coordinates
    r = np.hypot(x[..., 1], x[..., 2])
    v = np.zeros(x.shape[:-1] + (5,))
    v[..., 0] = density
    v[..., 1] = annulus_axial_velocity(r, R_i, R_o, G, gas.mu)
    v[..., 4] = annulus_temperature(R_i, R_o, G, gas.mu, mach, gas)
    return prim_to_cons(v, gas)


def density_wave_density(
    x: np.ndarray, lengths: Sequence[float], density: float, amplitude: float
) -> np.ndarray:
    phase = 2.0 * np.pi * np.sum(x / np.asarray(lengths, dtype=float), axis=-1)
    return density * (1.0 + amplitude * np.sin(phase))


def density_wave_state(
    mesh: Mesh,
    gas: GasParameters,
    lengths: Sequence[float],
    density: float = 1.0,
    velocity: Sequence[float] = (1.0, 0.5, 0.25),
    temperature: float = 1.0,
    amplitude: float = 0.1,
) -> np.ndarray:
    """Density wave advected by a constant velocity at constant pressure."""
    rho = density_wave_density(mesh.coordinates, lengths, density, amplitude)
    v = np.empty(rho.shape + (5,))
    v[..., 0] = rho
    v[..., 1:4] = np.asarray(velocity, dtype=float)
    v[..., 4] = density * temperature / rho
    return prim_to_cons(v, gas)


def density_wave_rhs(
    mesh: Mesh,
    lengths: Sequence[float],
    density: float = 1.0,
    velocity: Sequence[float] = (1.0, 0.5, 0.25),
    amplitude: float = 0.1,
) -> np.ndarray:
    """Exact dq/dt = -U . grad q of the density wave at t = 0."""
    lengths = np.asarray(lengths, dtype=float)
    U = np.asarray(velocity, dtype=float)
    phase = 2.0 * np.pi * np.sum(mesh.coordinates / lengths, axis=-1)
    drho_dt = -density * amplitude * np.cos(phase) * 2.0 * np.pi * np.sum(U / lengths)
    rhs = np.empty(drho_dt.shape + (5,))
    rhs[..., 0] = drho_dt
    rhs[..., 1:4] = drho_dt[..., None] * U
    rhs[..., 4] = 0.5 * np.dot(U, U) * drho_dt
    return rhs


def random_smooth_state(
    mesh: Mesh,
    gas: GasParameters,
    lengths: Sequence[float],
    seed: int = 0,
    amplitude: float = 0.1,
    modes: int = 3,
) -> np.ndarray:
    """Periodic smooth perturbation of a unit state from a few random Fourier modes."""
    rng = np.random.default_rng(seed)
    phase_arg = 2.0 * np.pi * mesh.coordinates / np.asarray(lengths, dtype=float)
    v = np.empty(mesh.coordinates.shape[:-1] + (5,))
    base = np.array([1.0, 0.0, 0.0, 0.0, 1.0])
    for c in range(5):
        field = np.zeros(v.shape[:-1])
        for _ in range(modes):
            k = rng.integers(1, 3, size=3)
            shift = rng.uniform(0.0, 2.0 * np.pi)
            field += np.sin(np.sum(k * phase_arg, axis=-1) + shift)
        v[..., c] = base[c] + amplitude / modes * field
    return prim_to_cons(v, gas)
