"""Tests for the entropy-stable wall boundary treatment."""

import numpy as np
import pytest

from entropy_sbp.boundaries import (
    HeatEntropyFlow,
    HeatFlowKind,
    WallSpec,
    inviscid_mirror_state,
    ip_dissipation_matrix,
    manufacture_wall_gradient,
    wall_entropy_production,
    wall_penalty,
    wall_viscous_state,
)
from entropy_sbp.physics import (
    GasParameters,
    InviscidMode,
    ec_flux_prim,
    entropy_variables,
    primitive_gradients,
)


@pytest.fixture
def gas():
    return GasParameters(mu=1e-2)


@pytest.fixture
def wall_points():
    rng = np.random.default_rng(8)
    n = 300
    v = np.empty((n, 5))
    v[:, 0] = rng.uniform(0.5, 2.0, n)
    v[:, 1:4] = rng.normal(0.0, 0.5, (n, 3))
    v[:, 4] = rng.uniform(0.5, 2.0, n)
    normal = rng.normal(size=(n, 3))
    normal /= np.linalg.norm(normal, axis=-1, keepdims=True)
    return {
        "v": v,
        "normal": normal,
        "theta": rng.normal(size=(n, 3, 5)),
        "x": rng.uniform(-1.0, 1.0, (n, 3)),
    }


@pytest.fixture
def rotating_wall():
    return WallSpec(
        velocity=np.zeros(3),
        angular_velocity=np.array([0.1, -0.2, 0.3]),
        rotation_center=np.array([0.2, 0.0, -0.1]),
    )


def entropy_scale(wall_points, gas):
    v = wall_points["v"]
    w = entropy_variables(v, gas)
    return 1.0 + np.sum(np.abs(w), axis=-1) * (1.0 + np.abs(v[:, 0]) * (1.0 + np.sum(v[:, 1:4] ** 2, axis=-1)))


class TestWallSpec:
    """Test wall data validation."""

    def test_non_tangent_velocity_rejected(self):
        with pytest.raises(ValueError, match="not tangent"):
            WallSpec(velocity=np.array([1.0, 0.0, 0.0]), normal=np.array([1.0, 0.0, 0.0]))

    def test_tangent_velocity_accepted(self):
        spec = WallSpec(velocity=np.array([0.0, 1.0, 0.0]), normal=np.array([2.0, 0.0, 0.0]))
        np.testing.assert_allclose(spec.normal, [1.0, 0.0, 0.0])

    def test_negative_beta_rejected(self):
        with pytest.raises(ValueError, match="beta"):
            WallSpec(beta=-1.0)

    def test_rotation_needs_coordinates(self, rotating_wall):
        with pytest.raises(ValueError, match="coordinates"):
            rotating_wall.wall_velocity(None, np.array([0.0, 0.0, 1.0]))

    def test_rotating_lid_velocity(self):
        """Rigid rotation about the lid normal through the lid center."""
        lid = WallSpec(angular_velocity=[0.0, 0.0, 0.05], rotation_center=[0.5, 0.5, 1.0])
        U = lid.wall_velocity(np.array([1.0, 0.5, 1.0]), np.array([0.0, 0.0, 1.0]))
        np.testing.assert_allclose(U, [0.0, 0.025, 0.0], atol=1e-16)

    def test_wall_velocity_is_projected_to_tangent_plane(self, rotating_wall, wall_points):
        U = rotating_wall.wall_velocity(wall_points["x"], wall_points["normal"])
        np.testing.assert_allclose(np.sum(U * wall_points["normal"], axis=-1), 0.0, atol=1e-15)


class TestHeatEntropyFlow:
    """Test prescribed heat entropy flow g(t)."""

    def test_default_is_adiabatic(self):
        flow = HeatEntropyFlow()
        assert flow.is_adiabatic
        assert flow(3.0) == 0.0

    def test_sinusoid(self):
        flow = HeatEntropyFlow(HeatFlowKind.SINUSOID, amplitude=1e-4, frequency=2.0)
        assert flow(0.125) == pytest.approx(1e-4)
        assert flow(0.25) == pytest.approx(0.0, abs=1e-18)


class TestGhostStates:
    """Test inviscid and viscous ghost states."""

    def test_mirror_flips_normal_velocity(self, wall_points):
        v, n = wall_points["v"], wall_points["normal"]
        mirrored = inviscid_mirror_state(v, n)
        np.testing.assert_allclose(
            np.sum(mirrored[:, 1:4] * n, axis=-1), -np.sum(v[:, 1:4] * n, axis=-1), atol=1e-14
        )
        np.testing.assert_array_equal(mirrored[:, [0, 4]], v[:, [0, 4]])
        np.testing.assert_allclose(inviscid_mirror_state(mirrored, n), v, atol=1e-14)

    def test_mirror_flux_carries_no_mass_or_energy(self, wall_points, gas):
        v, n = wall_points["v"], wall_points["normal"]
        f = ec_flux_prim(v, inviscid_mirror_state(v, n), n, gas)
        np.testing.assert_allclose(f[:, 0], 0.0, atol=1e-14)
        np.testing.assert_allclose(f[:, 4], 0.0, atol=1e-13)

    def test_viscous_state_averages_to_wall_velocity(self, wall_points, rotating_wall):
        v, n, x = wall_points["v"], wall_points["normal"], wall_points["x"]
        ghost = wall_viscous_state(v, rotating_wall, n, x)
        np.testing.assert_allclose(
            0.5 * (v[:, 1:4] + ghost[:, 1:4]), rotating_wall.wall_velocity(x, n), atol=1e-15
        )

    def test_manufactured_gradient_flips_normal_heat_flux_terms(self, wall_points, gas):
        """Density and temperature gradients change sign, velocity gradients do not."""
        v, theta = wall_points["v"], wall_points["theta"]
        v_bv = wall_viscous_state(v, WallSpec(), wall_points["normal"])
        theta_bv = manufacture_wall_gradient(theta, v, v_bv, gas)
        grad_U, grad_T = primitive_gradients(v, theta)
        grad_U_bv, grad_T_bv = primitive_gradients(v_bv, theta_bv)
        np.testing.assert_allclose(grad_T_bv, -grad_T, rtol=1e-12, atol=1e-12)
        np.testing.assert_allclose(grad_U_bv, grad_U, rtol=1e-12, atol=1e-12)


class TestWallEntropy:
    """Test the wall entropy identities point-wise."""

    def test_adiabatic_wall_is_entropy_neutral(self, wall_points, gas, rotating_wall):
        e = wall_entropy_production(
            wall_points["v"], wall_points["theta"], rotating_wall, wall_points["normal"], 0.3, gas,
            x=wall_points["x"],
        )
        np.testing.assert_array_less(np.abs(e), 1e-11 * entropy_scale(wall_points, gas))

    def test_heat_entropy_flow_is_recovered(self, wall_points, gas):
        spec = WallSpec(heat_flow=HeatEntropyFlow(HeatFlowKind.SINUSOID, 1e-4, 2.0))
        t = 0.1
        e = wall_entropy_production(
            wall_points["v"], wall_points["theta"], spec, wall_points["normal"], t, gas
        )
        np.testing.assert_array_less(
            np.abs(e - spec.heat_flow(t)), 1e-11 * entropy_scale(wall_points, gas)
        )

    @pytest.mark.parametrize("beta", [0.5, 5.0])
    def test_stable_wall_only_dissipates(self, wall_points, gas, rotating_wall, beta):
        spec = WallSpec(
            angular_velocity=rotating_wall.angular_velocity,
            rotation_center=rotating_wall.rotation_center,
            beta=beta,
            inviscid_mode=InviscidMode.STABLE,
        )
        e = wall_entropy_production(
            wall_points["v"], wall_points["theta"], spec, wall_points["normal"], 0.0, gas,
            x=wall_points["x"],
        )
        assert np.all(e <= 1e-11 * entropy_scale(wall_points, gas))

    def test_penalty_reports_dissipation_and_heat(self, wall_points, gas):
        spec = WallSpec(beta=1.0, inviscid_mode=InviscidMode.STABLE,
                        heat_flow=HeatEntropyFlow(amplitude=2e-3))
        penalty = wall_penalty(
            wall_points["v"], wall_points["theta"], spec, wall_points["normal"], 0.0, gas
        )
        assert penalty.g_q.shape == wall_points["v"].shape
        assert np.all(penalty.entropy_dissipation <= 1e-12)
        np.testing.assert_array_equal(penalty.heat_flow, 2e-3)


class TestInteriorPenalty:
    """Test the interior-penalty dissipation matrix."""

    def test_negative_semidefinite(self, wall_points, gas):
        v, n = wall_points["v"], wall_points["normal"]
        v_bv = wall_viscous_state(v, WallSpec(), n)
        L = ip_dissipation_matrix(v, v_bv, np.full(len(v), 2.0), n, gas)
        eig = np.linalg.eigvalsh(0.5 * (L + np.swapaxes(L, -1, -2)))
        assert np.all(eig[:, -1] <= 1e-14 * np.abs(eig[:, 0]).max())

    def test_closed_form_contraction(self, wall_points, gas, rotating_wall):
        """w^T L (w - w_bv) = -(2 beta mu / 3T)(4 U_n^2 + 3 |U_t - U_wall|^2)."""
        v, n, x = wall_points["v"], wall_points["normal"], wall_points["x"]
        beta = 1.7
        v_bv = wall_viscous_state(v, rotating_wall, n, x)
        w, w_bv = entropy_variables(v, gas), entropy_variables(v_bv, gas)
        L = ip_dissipation_matrix(v, v_bv, np.full(len(v), beta), n, gas)
        value = np.einsum("...a,...ab,...b->...", w, L, w - w_bv)

        U = v[:, 1:4]
        U_n = np.sum(U * n, axis=-1)
        slip = U - U_n[:, None] * n - rotating_wall.wall_velocity(x, n)
        closed = -(2.0 * beta * gas.mu / (3.0 * v[:, 4])) * (
            4.0 * U_n**2 + 3.0 * np.sum(slip * slip, axis=-1)
        )
        np.testing.assert_allclose(value, closed, rtol=1e-10, atol=1e-14)
