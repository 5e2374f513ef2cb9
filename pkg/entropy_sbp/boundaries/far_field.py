"""Far-field boundary: entropy-stable flux against a frozen free-stream state."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..physics.data_models import GasParameters
from ..physics.fluxes import es_flux_prim
from ..physics.gas import entropy_variables, inviscid_flux_prim
from .data_models import FarFieldSpec


@dataclass
class FarFieldPenalty:
    g_q: np.ndarray
    g_theta: np.ndarray
    entropy_exchange: np.ndarray  # full surface entropy term, accounted in the balance


def far_field_penalty(
    v: np.ndarray,
    F: Optional[np.ndarray],
    spec: FarFieldSpec,
    normal: np.ndarray,
    gas: GasParameters,
) -> FarFieldPenalty:
    """Penalties at far-field points.

    Inviscid: f_n(v) - f^ssr(v, v_inf). The viscous flux passes through
    unchanged and the gradient sees the free-stream entropy variables through
    1/2 (w_inf - w). ``normal`` may be scaled; everything is linear in it.

    Args:
        v: Primitive states ``(..., 5)``
        F: Viscous fluxes ``(..., 3, 5)`` or None when inviscid
        spec: Free-stream state
        normal: Outward normal ``(..., 3)``
        gas: Gas parameters
    """
    v = np.asarray(v, dtype=float)
    normal = np.broadcast_to(np.asarray(normal, dtype=float), v.shape[:-1] + (3,))
    v_inf = np.broadcast_to(spec.state, v.shape)
    w = entropy_variables(v, gas)
    w_inf = entropy_variables(v_inf, gas)

    f_star = es_flux_prim(v, v_inf, normal, gas)
    g_q = inviscid_flux_prim(v, normal, gas) - f_star
    g_theta = 0.5 * (w_inf - w)

    psi_n = v[..., 0] * gas.R * np.sum(v[..., 1:4] * normal, axis=-1)
    exchange = psi_n - np.sum(w * f_star, axis=-1)
    if F is not None:
        F_n = np.einsum("...j,...ja->...a", normal, F)
        exchange = exchange + 0.5 * np.sum((w + w_inf) * F_n, axis=-1)

    return FarFieldPenalty(g_q=g_q, g_theta=g_theta, entropy_exchange=exchange)
