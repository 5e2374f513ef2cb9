"""Tests for the analytic initial states."""

import numpy as np
import pytest

from entropy_sbp.cases import (
    annulus_axial_velocity,
    annulus_peak_velocity,
    annulus_temperature,
    density_wave_rhs,
    density_wave_state,
    random_smooth_state,
    uniform_state,
)
from entropy_sbp.mesh import build_box_mesh
from entropy_sbp.physics import GasParameters, cons_to_prim, pressure


@pytest.fixture
def gas():
    return GasParameters()


@pytest.fixture
def mesh():
    return build_box_mesh(2, 2, 2, p=3, periodic=(True, True, True))


class TestAnnulusProfile:
    """Test the fully developed annular pipe flow."""

    def test_no_slip_on_both_walls(self):
        U = annulus_axial_velocity(np.array([0.125, 0.5]), 0.125, 0.5, 1e-2, 1e-2)
        np.testing.assert_allclose(U, 0.0, atol=1e-16)

    def test_satisfies_radial_momentum_balance(self):
        """mu (U'' + U' / r) = -G."""
        G, mu, h = 2e-2, 1e-2, 1e-4
        r = np.linspace(0.2, 0.4, 5)
        U = lambda s: annulus_axial_velocity(s, 0.125, 0.5, G, mu)
        d1 = (U(r + h) - U(r - h)) / (2.0 * h)
        d2 = (U(r + h) - 2.0 * U(r) + U(r - h)) / h**2
        np.testing.assert_allclose(mu * (d2 + d1 / r), -G, rtol=1e-5)

    def test_peak_velocity_is_maximum(self):
        r = np.linspace(0.125, 0.5, 2001)
        peak = annulus_peak_velocity(0.125, 0.5, 1e-2, 1e-2)
        assert peak == pytest.approx(annulus_axial_velocity(r, 0.125, 0.5, 1e-2, 1e-2).max(), rel=1e-6)

    def test_temperature_sets_peak_mach(self, gas):
        T = annulus_temperature(0.125, 0.5, 1e-2, 1e-2, 1e-2, gas)
        peak = annulus_peak_velocity(0.125, 0.5, 1e-2, 1e-2)
        assert peak / np.sqrt(gas.gamma * gas.R * T) == pytest.approx(1e-2)


class TestBoxStates:
    """Test uniform, density-wave and random states."""

    def test_uniform_state(self, mesh, gas):
        v = cons_to_prim(uniform_state(mesh, gas, 2.0, (0.1, 0.2, 0.3), 0.5), gas)
        np.testing.assert_allclose(v[..., :], np.broadcast_to([2.0, 0.1, 0.2, 0.3, 0.5], v.shape))

    def test_density_wave_has_uniform_pressure(self, mesh, gas):
        v = cons_to_prim(density_wave_state(mesh, gas, (1.0, 1.0, 1.0)), gas)
        np.testing.assert_allclose(pressure(v, gas), 1.0, rtol=1e-13)
        assert np.ptp(v[..., 0]) > 0.1

    def test_density_wave_rhs_is_advection(self, mesh):
        U = np.array([1.0, 0.5, 0.25])
        rhs = density_wave_rhs(mesh, (1.0, 1.0, 1.0), velocity=U)
        np.testing.assert_allclose(rhs[..., 1:4], rhs[..., :1] * U, atol=1e-15)
        np.testing.assert_allclose(rhs[..., 4], 0.5 * U @ U * rhs[..., 0], atol=1e-15)

    def test_random_state_is_reproducible_and_admissible(self, mesh, gas):
        a = random_smooth_state(mesh, gas, (1.0, 1.0, 1.0), seed=5)
        b = random_smooth_state(mesh, gas, (1.0, 1.0, 1.0), seed=5)
        np.testing.assert_array_equal(a, b)
        v = cons_to_prim(a, gas)
        assert np.all(v[..., 0] > 0.8)
        assert np.all(v[..., 4] > 0.8)
