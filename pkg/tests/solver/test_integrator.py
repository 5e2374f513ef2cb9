"""Tests for the adaptive Dormand-Prince integrator and PI controller."""

import numpy as np
import pytest

from entropy_sbp.exceptions import NonPositiveDensity, StepSizeUnderflow
from entropy_sbp.solver import (
    ControllerHistory,
    IntegratorConfig,
    dopri_step,
    error_norm,
    integrate,
    pi_controller,
)


def decay(y, t):
    return -y


def growth(y, t):
    return y


class TestDopriStep:
    """Test a single Dormand-Prince step."""

    def test_fifth_order_local_error(self):
        """Halving h shrinks the local error by about 2^6."""
        y0 = np.array([1.0])
        errors = []
        for h in (0.2, 0.1):
            step = dopri_step(y0, 0.0, h, growth)
            errors.append(abs(step.y[0] - np.exp(h)))
        assert errors[0] / errors[1] > 40.0

    def test_last_stage_is_derivative_at_new_state(self):
        y0 = np.array([1.0, 2.0])
        step = dopri_step(y0, 0.3, 0.05, decay)
        np.testing.assert_array_equal(step.k_last, decay(step.y, 0.35))

    def test_embedded_error_is_small(self):
        step = dopri_step(np.array([1.0]), 0.0, 0.1, growth)
        assert 0.0 < abs(step.error[0]) < 1e-5

    def test_inadmissible_stage(self):
        def rhs(y, t):
            if np.any(y < 0.0):
                raise NonPositiveDensity("negative")
            return -10.0 * y

        step = dopri_step(np.array([1.0]), 0.0, 1.0, rhs)
        assert not step.admissible
        assert step.y is None

    def test_non_positive_step(self):
        with pytest.raises(ValueError):
            dopri_step(np.array([1.0]), 0.0, 0.0, decay)


class TestErrorNorm:
    """Test the scaled RMS error norm."""

    def test_unit_norm_at_tolerance(self):
        atol, rtol = 1e-6, 1e-3
        y_old, y_new = np.ones(4), 2.0 * np.ones(4)
        error = np.full(4, atol + 2.0 * rtol)
        assert error_norm(error, y_old, y_new, atol, rtol) == pytest.approx(1.0)

    def test_zero_error(self):
        assert error_norm(np.zeros(3), np.ones(3), np.ones(3), 1e-8, 1e-8) == 0.0


class TestPIController:
    """Test accept/reject decisions and step proposals."""

    @pytest.fixture
    def config(self):
        return IntegratorConfig(h_min=1e-3)

    def test_unit_error_applies_safety_factor(self, config):
        accept, h_next = pi_controller(1.0, 0.1, config, ControllerHistory())
        assert accept
        assert h_next == pytest.approx(0.09)

    def test_rejection_at_least_halves(self, config):
        history = ControllerHistory()
        accept, h_next = pi_controller(4.0, 0.1, config, history)
        assert not accept
        assert h_next <= 0.05
        assert history.rejected == 1

    def test_growth_is_capped(self, config):
        _, h_next = pi_controller(0.0, 0.1, config, ControllerHistory())
        assert h_next == pytest.approx(0.5)

    def test_history_tracks_accepted_error(self, config):
        history = ControllerHistory()
        pi_controller(0.5, 0.1, config, history)
        assert history.previous_error == 0.5
        assert history.accepted == 1

    def test_underflow(self, config):
        with pytest.raises(StepSizeUnderflow):
            pi_controller(100.0, 1e-3, config, ControllerHistory())

    def test_invalid_error(self, config):
        with pytest.raises(ValueError):
            pi_controller(-1.0, 0.1, config, ControllerHistory())


class TestIntegrate:
    """Test the adaptive driver."""

    def test_exponential_decay(self):
        config = IntegratorConfig(atol=1e-10, rtol=1e-10)
        result = integrate(decay, np.ones(3), 0.0, 1.0, config)
        assert result.completed
        assert result.t == 1.0
        np.testing.assert_allclose(result.y, np.exp(-1.0), rtol=1e-8)
        assert result.rhs_evaluations == 1 + 6 * (result.accepted + result.rejected)

    def test_zero_rhs_keeps_state(self):
        y0 = np.array([1.0, -2.0])
        result = integrate(lambda y, t: np.zeros_like(y), y0, 0.0, 1.0)
        assert result.completed
        np.testing.assert_array_equal(result.y, y0)

    def test_observer_sees_every_accepted_step(self):
        seen = []
        result = integrate(
            decay, np.ones(1), 0.0, 0.5, IntegratorConfig(), on_step=lambda t, y, k: seen.append(t)
        )
        assert len(seen) == result.accepted + 1
        assert seen[0] == 0.0
        assert seen[-1] == 0.5
        assert all(b > a for a, b in zip(seen, seen[1:]))

    def test_inadmissible_stages_are_retried(self):
        def rhs(y, t):
            if np.any(y < 0.0):
                raise NonPositiveDensity("negative")
            return -y

        result = integrate(rhs, np.ones(1), 0.0, 2.0, IntegratorConfig(h_init=10.0))
        assert result.completed
        assert result.rejected >= 1
        np.testing.assert_allclose(result.y, np.exp(-2.0), rtol=1e-6)

    def test_stops_at_max_steps(self):
        config = IntegratorConfig(h_max=1e-3, max_steps=2)
        result = integrate(decay, np.ones(1), 0.0, 1.0, config)
        assert not result.completed
        assert result.t < 1.0

    def test_end_before_start(self):
        with pytest.raises(ValueError):
            integrate(decay, np.ones(1), 1.0, 0.0)


class TestIntegratorConfig:
    """Test settings validation."""

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"atol": 0.0},
            {"rtol": -1.0},
            {"safety": 1.0},
            {"k_i": -0.1},
            {"h_min": 1.0, "h_max": 0.1},
            {"h_init": 0.0},
            {"max_steps": 0},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            IntegratorConfig(**kwargs)
