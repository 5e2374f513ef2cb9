"""h-refinement convergence studies with observed orders of accuracy."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Union

import numpy as np
import pandas as pd
import scipy.sparse.linalg as spla
from loguru import logger

from ..boundaries.data_models import WallSpec
from ..cases.initial_conditions import (
    annulus_axial_velocity,
    annulus_temperature,
    density_wave_rhs,
    density_wave_state,
)
from ..exceptions import ConfigError, FieldIOError
from ..mesh.builder import build_annulus_mesh, build_box_mesh
from ..physics.data_models import GasParameters, InviscidMode
from ..physics.gas import prim_to_cons
from ..solver.rhs import SpatialOperator
from .norms import ErrorNorms, error_norms, interpolation_error_norms

NORMS = ("l1", "l2", "linf")
ROUNDOFF = 1e-12


def smooth_field(x: np.ndarray) -> np.ndarray:
    """Default projection target, periodic on the unit box."""
    return (
        np.sin(2.0 * np.pi * x[..., 0])
        * np.cos(2.0 * np.pi * x[..., 1])
        * np.sin(2.0 * np.pi * x[..., 2] + 0.3)
    )


@dataclass
class StudySetup:
    """Physical parameters shared by every grid of a study.

    Defaults follow the annular pipe case: R_o = 0.5, R_o / R_i = 4 and a
    body force G equal to the viscosity. The annulus error is measured on the
    steady state, solved to ``solver_rtol``.
    """

    gas: GasParameters = field(default_factory=lambda: GasParameters(mu=1e-2))
    inner_radius: float = 0.125
    outer_radius: float = 0.5
    length: float = 1.0
    mach: float = 1e-2
    solver_rtol: float = 1e-11
    exact: Callable[[np.ndarray], np.ndarray] = smooth_field
    wave_amplitude: float = 0.1
    wave_velocity: Sequence[float] = (1.0, 0.5, 0.25)


def _projection_error(p: int, n: int, setup: StudySetup) -> ErrorNorms:
    mesh = build_box_mesh(n, n, n, p=p, periodic=(True, True, True))
    return interpolation_error_norms(setup.exact(mesh.coordinates), setup.exact, mesh)


def _density_wave_error(p: int, n: int, setup: StudySetup) -> ErrorNorms:
    lengths = (1.0, 1.0, 1.0)
    mesh = build_box_mesh(n, n, n, lengths=lengths, p=p, periodic=(True, True, True))
    gas = GasParameters(gamma=setup.gas.gamma, R=setup.gas.R)
    operator = SpatialOperator(mesh, gas, {}, mode=InviscidMode.CONSERVATIVE)
    q0 = density_wave_state(
        mesh, gas, lengths, velocity=setup.wave_velocity, amplitude=setup.wave_amplitude
    )
    exact = density_wave_rhs(
        mesh, lengths, velocity=setup.wave_velocity, amplitude=setup.wave_amplitude
    )
    return error_norms(operator(q0, 0.0), exact, mesh)


def annulus_steady_velocity(
    operator: SpatialOperator,
    density: float,
    temperature: float,
    force: float,
    initial: np.ndarray,
    rtol: float = 1e-11,
    restart: int = 200,
    maxiter: int = 50,
) -> np.ndarray:
    """Steady axial velocity of the annular pipe by GMRES.

    With density and temperature held fixed and the velocity along x1 only,
    the x1-momentum residual of ``operator`` is linear in the nodal velocity
    u, so the steady state solves L u = -force.
    """
    shape = initial.shape
    gas = operator.gas

    def momentum_residual(u: np.ndarray) -> np.ndarray:
        v = np.zeros(shape + (5,))
        v[..., 0] = density
        v[..., 1] = np.reshape(u, shape)
        v[..., 4] = temperature
        return operator(prim_to_cons(v, gas), 0.0)[..., 1].ravel()

    size = initial.size
    system = spla.LinearOperator((size, size), matvec=momentum_residual, dtype=float)
    rhs = np.full(size, -force)
    u, info = spla.gmres(
        system,
        rhs,
        x0=initial.ravel(),
        rtol=rtol,
        atol=0.0,
        restart=min(restart, size),
        maxiter=maxiter,
    )
    residual = np.linalg.norm(momentum_residual(u) - rhs) / np.linalg.norm(rhs)
    if info != 0:
        logger.warning(
            f"GMRES stopped before convergence (info={info}), relative residual {residual:.2e}"
        )
    else:
        logger.debug(f"Steady annulus solve: relative residual {residual:.2e}")
    return u.reshape(shape)


def _annulus_error(p: int, n: int, setup: StudySetup) -> ErrorNorms:
    R_i, R_o, gas = setup.inner_radius, setup.outer_radius, setup.gas
    if not gas.is_viscous:
        raise ConfigError("Annulus study needs a viscous gas (mu > 0)")
    G = gas.mu
    mesh = build_annulus_mesh(R_i, R_o, nr=n, ntheta=n, nz=1, length=setup.length, p=p)
    walls = {name: WallSpec() for name in mesh.boundary_names}
    operator = SpatialOperator(mesh, gas, walls)

    def exact(x: np.ndarray) -> np.ndarray:
        return annulus_axial_velocity(np.hypot(x[..., 1], x[..., 2]), R_i, R_o, G, gas.mu)

    u = annulus_steady_velocity(
        operator,
        density=1.0,
        temperature=annulus_temperature(R_i, R_o, G, gas.mu, setup.mach, gas),
        force=G,
        initial=exact(mesh.coordinates),
        rtol=setup.solver_rtol,
    )
    return error_norms(u, exact, mesh)


STUDY_CASES = {
    "projection": _projection_error,
    "density_wave": _density_wave_error,
    "annulus": _annulus_error,
}


def observed_rates(frame: pd.DataFrame) -> pd.DataFrame:
    """Add ``rate_*`` columns per order and a ``flag`` column.

    Rates are log(e_coarse / e_fine) / log(h_coarse / h_fine) between
    successive grids of the same order. Rows at roundoff get no rate and the
    flag ``roundoff``; an error that grows under refinement is flagged
    ``non-monotone``.
    """
    frame = frame.sort_values(["p", "n"]).reset_index(drop=True)
    for norm in NORMS:
        frame[f"rate_{norm}"] = np.nan
    frame["flag"] = ""

    for _, group in frame.groupby("p", sort=True):
        indices = list(group.index)
        for norm in NORMS:
            scale = max(float(group[norm].max()), 1.0)
            at_roundoff = group[norm] <= ROUNDOFF * scale
            frame.loc[group.index[at_roundoff.values], "flag"] = "roundoff"
        for prev, cur in zip(indices[:-1], indices[1:]):
            h_ratio = frame.at[prev, "h"] / frame.at[cur, "h"]
            for norm in NORMS:
                coarse, fine = frame.at[prev, norm], frame.at[cur, norm]
                if frame.at[cur, "flag"] == "roundoff" or frame.at[prev, "flag"] == "roundoff":
                    continue
                frame.at[cur, f"rate_{norm}"] = np.log(coarse / fine) / np.log(h_ratio)
                if fine > coarse:
                    frame.at[cur, "flag"] = "non-monotone"
    return frame


def run_convergence_study(
    case: str,
    orders: Sequence[int],
    refinements: Sequence[int],
    setup: Optional[StudySetup] = None,
    threads: int = 1,
    output: Optional[Union[str, Path]] = None,
) -> pd.DataFrame:
    """Errors and observed orders for every (p, n) pair.

    Args:
        case: ``projection``, ``density_wave`` or ``annulus``
        orders: Polynomial orders p
        refinements: Increasing element counts per direction
        setup: Physical parameters; defaults to ``StudySetup()``
        threads: Worker threads; rows are ordered by (p, n) regardless
        output: Optional CSV path

    Returns:
        DataFrame with columns p, n, h, l1, l2, linf, rate_l1, rate_l2,
        rate_linf, flag
    """
    if case not in STUDY_CASES:
        raise ConfigError(f"Unknown study case {case!r}, expected one of {sorted(STUDY_CASES)}")
    if list(refinements) != sorted(refinements):
        raise ConfigError(f"Refinements must be increasing, got {list(refinements)}")
    setup = setup or StudySetup()
    error_fn = STUDY_CASES[case]
    pairs = list(product(sorted(orders), refinements))
    logger.info(f"Convergence study '{case}': orders {sorted(orders)}, refinements {list(refinements)}")

    def evaluate(pair) -> dict:
        p, n = pair
        norms = error_fn(p, n, setup)
        logger.info(f"  p={p} n={n}: L2 error {norms.l2:.3e}")
        return {"p": p, "n": n, "h": 1.0 / n, **norms.as_dict()}

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        rows: List[dict] = list(pool.map(evaluate, pairs))

    frame = observed_rates(pd.DataFrame(rows))
    for _, row in frame[frame["flag"] == "non-monotone"].iterrows():
        logger.warning(f"Error grew under refinement at p={row['p']} n={row['n']}")

    if output is not None:
        path = Path(output)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(path, index=False, float_format="%.17g")
        except OSError as exc:
            raise FieldIOError(f"Cannot write convergence table: {exc}", str(path)) from exc
        logger.info(f"Wrote convergence table to {path}")
    return frame
