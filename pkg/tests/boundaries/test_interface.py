"""Tests for element-coupling and far-field penalties."""

import numpy as np
import pytest

from entropy_sbp.boundaries import (
    FarFieldSpec,
    far_field_penalty,
    interface_penalty,
    interface_penalty_prim,
)
from entropy_sbp.exceptions import MismatchedFaceError
from entropy_sbp.physics import (
    GasParameters,
    InviscidMode,
    inviscid_flux_prim,
    prim_to_cons,
    viscous_fluxes,
)


@pytest.fixture
def gas():
    return GasParameters(mu=1e-2)


@pytest.fixture
def face():
    rng = np.random.default_rng(13)
    n = 200

    def states():
        v = np.empty((n, 5))
        v[:, 0] = rng.uniform(0.5, 2.0, n)
        v[:, 1:4] = rng.normal(0.0, 0.5, (n, 3))
        v[:, 4] = rng.uniform(0.5, 2.0, n)
        return v

    normal = rng.normal(size=(n, 3))
    normal /= np.linalg.norm(normal, axis=-1, keepdims=True)
    # scaled normals carry the surface Jacobian
    nL = normal * rng.uniform(0.5, 2.0, (n, 1))
    return {
        "vL": states(),
        "vR": states(),
        "thetaL": rng.normal(size=(n, 3, 5)),
        "thetaR": rng.normal(size=(n, 3, 5)),
        "nL": nL,
    }


def penalties(face, gas, mode, beta=None):
    FL = viscous_fluxes(face["vL"], face["thetaL"], gas)
    FR = viscous_fluxes(face["vR"], face["thetaR"], gas)
    return FL, FR, interface_penalty_prim(face["vL"], face["vR"], FL, FR, face["nL"], mode, gas, beta=beta)


class TestInterfacePenalty:
    """Test conservation and entropy accounting across an interface."""

    @pytest.mark.parametrize("mode", [InviscidMode.CONSERVATIVE, InviscidMode.STABLE])
    def test_conservation(self, face, gas, mode):
        """The numerical fluxes leaving the left side enter the right side."""
        FL, FR, penalty = penalties(face, gas, mode, beta=np.full(len(face["vL"]), 3.0))
        nL = face["nL"]
        left = (
            penalty.g_q_left
            - inviscid_flux_prim(face["vL"], nL, gas)
            + np.einsum("...j,...ja->...a", nL, FL)
        )
        right = (
            penalty.g_q_right
            - inviscid_flux_prim(face["vR"], -nL, gas)
            + np.einsum("...j,...ja->...a", -nL, FR)
        )
        np.testing.assert_allclose(left + right, 0.0, atol=1e-12)

    def test_conservative_coupling_has_no_dissipation(self, face, gas):
        _, _, penalty = penalties(face, gas, InviscidMode.CONSERVATIVE)
        np.testing.assert_array_equal(penalty.dissipation_left, 0.0)
        np.testing.assert_array_equal(penalty.dissipation_right, 0.0)

    @pytest.mark.parametrize("beta", [None, 0.5, 10.0])
    def test_stable_coupling_dissipates(self, face, gas, beta):
        beta_array = None if beta is None else np.full(len(face["vL"]), beta)
        _, _, penalty = penalties(face, gas, InviscidMode.STABLE, beta=beta_array)
        total = penalty.dissipation_left + penalty.dissipation_right
        assert np.all(total <= 1e-12)
        assert np.any(total < -1e-6)

    def test_gradient_penalties_are_antisymmetric(self, face, gas):
        _, _, penalty = penalties(face, gas, InviscidMode.CONSERVATIVE)
        np.testing.assert_array_equal(penalty.g_theta_left, -penalty.g_theta_right)

    def test_inviscid_coupling_skips_viscous_terms(self, face):
        gas = GasParameters()
        penalty = interface_penalty_prim(
            face["vL"], face["vR"], None, None, face["nL"], InviscidMode.CONSERVATIVE, gas
        )
        np.testing.assert_allclose(
            penalty.g_q_left + penalty.g_q_right,
            inviscid_flux_prim(face["vL"], face["nL"], gas)
            + inviscid_flux_prim(face["vR"], -face["nL"], gas),
            atol=1e-12,
        )

    def test_conserved_entry_point(self, face, gas):
        qL, qR = prim_to_cons(face["vL"], gas), prim_to_cons(face["vR"], gas)
        unit = face["nL"] / np.linalg.norm(face["nL"], axis=-1, keepdims=True)
        penalty = interface_penalty(
            qL, qR, face["thetaL"], face["thetaR"], unit, InviscidMode.CONSERVATIVE, gas
        )
        assert penalty.g_q_left.shape == qL.shape

    def test_mismatched_sides(self, face, gas):
        qL = prim_to_cons(face["vL"][:4], gas)
        qR = prim_to_cons(face["vR"][:3], gas)
        with pytest.raises(MismatchedFaceError):
            interface_penalty(
                qL, qR, face["thetaL"][:4], face["thetaR"][:3], face["nL"][:4],
                InviscidMode.CONSERVATIVE, gas,
            )


class TestFarFieldPenalty:
    """Test the free-stream boundary."""

    @pytest.fixture
    def spec(self):
        return FarFieldSpec(state=np.array([1.0, 0.3, 0.1, 0.0, 1.0]))

    def test_free_stream_is_preserved(self, spec, gas, face):
        v = np.broadcast_to(spec.state, face["vL"].shape).copy()
        penalty = far_field_penalty(v, None, spec, face["nL"], gas)
        np.testing.assert_allclose(penalty.g_q, 0.0, atol=1e-12)
        np.testing.assert_array_equal(penalty.g_theta, 0.0)

    def test_viscous_flux_enters_entropy_exchange(self, spec, gas, face):
        v = np.broadcast_to(spec.state, face["vL"].shape).copy()
        F = viscous_fluxes(v, face["thetaL"], gas)
        inviscid = far_field_penalty(v, None, spec, face["nL"], gas)
        viscous = far_field_penalty(v, F, spec, face["nL"], gas)
        assert not np.allclose(inviscid.entropy_exchange, viscous.entropy_exchange)
        np.testing.assert_array_equal(inviscid.g_q, viscous.g_q)

    def test_invalid_state(self):
        with pytest.raises(ValueError, match="positive"):
            FarFieldSpec(state=np.array([-1.0, 0.0, 0.0, 0.0, 1.0]))
