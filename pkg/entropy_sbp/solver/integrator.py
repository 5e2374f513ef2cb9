"""Adaptive Dormand-Prince RK5(4) with a PI step-size controller."""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from loguru import logger

from ..exceptions import AdmissibilityError, StepSizeUnderflow
from .data_models import ControllerHistory, IntegrationResult, IntegratorConfig

RhsFunction = Callable[[np.ndarray, float], np.ndarray]
StepObserver = Callable[[float, np.ndarray, np.ndarray], None]

C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)
E = B5 - B4

MAX_GROWTH = 5.0
MIN_SHRINK = 0.1


@dataclass
class StepCandidate:
    """Trial step: fifth-order solution, embedded error and the FSAL stage.

    ``admissible`` is False when a stage left the admissible set; the other
    fields are then None.
    """

    y: Optional[np.ndarray]
    error: Optional[np.ndarray]
    k_last: Optional[np.ndarray]
    admissible: bool = True


def dopri_step(
    y: np.ndarray, t: float, h: float, f: RhsFunction, k1: Optional[np.ndarray] = None
) -> StepCandidate:
    """One Dormand-Prince step of size h.

    Args:
        y: State at t
        t: Time
        h: Step size, > 0
        f: Right-hand side f(y, t)
        k1: f(y, t) when already known (first same as last)
    """
    if not h > 0.0:
        raise ValueError(f"Step size must be positive, got {h}")
    stages = [f(y, t) if k1 is None else k1]
    try:
        for s in range(1, 7):
            increment = sum(a * k for a, k in zip(A[s], stages) if a != 0.0)
            stages.append(f(y + h * increment, t + C[s] * h))
    except AdmissibilityError as exc:
        logger.warning(f"Stage of step at t={t:.6e}, h={h:.3e} is inadmissible: {exc}")
        return StepCandidate(y=None, error=None, k_last=None, admissible=False)

    # row 7 of A equals B5, so the last stage is f at the new solution
    y_new = y + h * sum(b * k for b, k in zip(B5, stages) if b != 0.0)
    error = h * sum(e * k for e, k in zip(E, stages) if e != 0.0)
    return StepCandidate(y=y_new, error=error, k_last=stages[-1])


def error_norm(
    error: np.ndarray, y_old: np.ndarray, y_new: np.ndarray, atol: float, rtol: float
) -> float:
    """Weighted RMS norm with scale atol + rtol * max(|y_old|, |y_new|)."""
    scale = atol + rtol * np.maximum(np.abs(y_old), np.abs(y_new))
    return float(np.sqrt(np.mean((np.asarray(error) / scale) ** 2)))


def pi_controller(
    err: float, h: float, config: IntegratorConfig, history: ControllerHistory
) -> tuple[bool, float]:
    """Accept or reject a step and propose the next step size.

    h_next = h * safety * err^-k_i * prev^k_p, limited to a growth of
    ``MAX_GROWTH``, halved at least on rejection and clamped to
    [h_min, h_max].

    Raises:
        StepSizeUnderflow: a rejected step asks for less than h_min
    """
    if err < 0.0 or np.isnan(err):
        raise ValueError(f"Error norm must be non-negative, got {err}")
    accept = err <= 1.0
    err_floor = max(err, 1e-10)

    factor = config.safety * err_floor ** (-config.k_i) * history.previous_error**config.k_p
    factor = min(MAX_GROWTH, max(MIN_SHRINK, factor))
    if not accept:
        factor = min(factor, 0.5)
    h_next = min(h * factor, config.h_max)

    if accept:
        history.previous_error = err_floor
        history.accepted += 1
        h_next = max(h_next, config.h_min)
    else:
        history.rejected += 1
        if h_next < config.h_min:
            raise StepSizeUnderflow(
                f"Step size {h_next:.3e} below minimum {config.h_min:.3e} after error norm {err:.3e}"
            )
    return accept, h_next


def initial_step(y: np.ndarray, k1: np.ndarray, config: IntegratorConfig) -> float:
    """Starting step 0.01 |y| / |f(y)| in the scaled norm."""
    scale = config.atol + config.rtol * np.abs(y)
    d0 = float(np.sqrt(np.mean((y / scale) ** 2)))
    d1 = float(np.sqrt(np.mean((k1 / scale) ** 2)))
    h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    return min(max(h, config.h_min), config.h_max)


def integrate(
    f: RhsFunction,
    y0: np.ndarray,
    t0: float,
    t_end: float,
    config: IntegratorConfig = IntegratorConfig(),
    on_step: Optional[StepObserver] = None,
) -> IntegrationResult:
    """Integrate y' = f(y, t) from t0 to t_end with adaptive steps.

    ``on_step(t, y, dydt)`` is called at t0 and after every accepted step with
    the derivative at the accepted state, which is the last RHS evaluation.
    Inadmissible stages reject the step; an inadmissible accepted state
    raises from the initial evaluation.
    """
    if not t_end >= t0:
        raise ValueError(f"End time {t_end} precedes start time {t0}")
    y = np.asarray(y0, dtype=float)
    t = float(t0)
    k1 = f(y, t)
    evaluations = 1
    if on_step is not None:
        on_step(t, y, k1)

    history = ControllerHistory()
    h = config.h_init if config.h_init is not None else initial_step(y, k1, config)
    last_step = 0.0
    attempts = 0
    while t < t_end:
        if attempts >= config.max_steps:
            logger.warning(f"Stopped after {attempts} attempted steps at t={t:.6e} < {t_end:.6e}")
            return IntegrationResult(
                y, t, history.accepted, history.rejected, evaluations, last_step, completed=False
            )
        attempts += 1
        step = min(h, t_end - t)
        candidate = dopri_step(y, t, step, f, k1=k1)
        evaluations += 6

        if not candidate.admissible:
            history.rejected += 1
            h = 0.5 * step
            if h < config.h_min:
                raise StepSizeUnderflow(
                    f"Inadmissible stages persist down to step {h:.3e} at t={t:.6e}"
                )
            continue

        err = error_norm(candidate.error, y, candidate.y, config.atol, config.rtol)
        accept, h_next = pi_controller(err, step, config, history)
        if accept:
            t = t_end if step == t_end - t else t + step
            y, k1 = candidate.y, candidate.k_last
            last_step = step
            logger.debug(f"Accepted step h={step:.3e} err={err:.3e} t={t:.6e}")
            if on_step is not None:
                on_step(t, y, k1)
        else:
            logger.warning(f"Rejected step h={step:.3e} err={err:.3e} at t={t:.6e}")
        h = h_next

    return IntegrationResult(y, t, history.accepted, history.rejected, evaluations, last_step)
