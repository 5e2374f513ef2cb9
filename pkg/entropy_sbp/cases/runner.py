"""Set up and run a configured case."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np
from loguru import logger

from ..diagnostics.output import FieldSnapshot, write_fields, write_timeseries
from ..exceptions import AdmissibilityError, ConfigError
from ..mesh.builder import build_annulus_mesh, build_box_mesh, build_perturbed_box_mesh
from ..mesh.data_models import Mesh
from ..solver.data_models import EntropyBalanceRecord, IntegrationResult, SolverState
from ..solver.entropy import entropy_rhs_contraction
from ..solver.integrator import integrate
from ..solver.rhs import SpatialOperator
from .config import CaseConfig
from .initial_conditions import annulus_state, density_wave_state, random_smooth_state, uniform_state


@dataclass
class RunResult:
    records: List[EntropyBalanceRecord]
    integration: IntegrationResult
    mesh: Mesh
    timeseries_path: Optional[Path] = None
    fields_path: Optional[Path] = None

    @property
    def max_residual(self) -> float:
        return max((abs(r.residual) for r in self.records), default=0.0)


@dataclass
class CaseRunner:
    """Build mesh, operator and initial state for a case and integrate it.

    Every accepted step records the discrete entropy balance of the new
    state; the records and a final field snapshot go to the output directory.
    """

    config: CaseConfig
    write_output: bool = True
    records: List[EntropyBalanceRecord] = field(default_factory=list)

    def build_mesh(self) -> Mesh:
        cfg = self.config.mesh
        tags = self.config.boundary_tags()
        p = self.config.p
        if cfg.kind != "perturbed_box" and len(cfg.elements) != 3:
            if cfg.kind == "box":
                raise ConfigError(f"Box mesh needs 3 element counts, got {cfg.elements}")
            raise ConfigError(
                f"Annulus mesh needs (axial, radial, azimuthal) counts, got {cfg.elements}"
            )
        try:
            if cfg.kind == "box":
                mesh = build_box_mesh(
                    *cfg.elements, lengths=cfg.lengths, p=p, periodic=cfg.periodic, boundary_tags=tags
                )
            elif cfg.kind == "perturbed_box":
                mesh = build_perturbed_box_mesh(
                    cfg.elements[0],
                    lengths=cfg.lengths,
                    p=p,
                    amplitude=cfg.amplitude,
                    periodic=cfg.periodic,
                    boundary_tags=tags,
                )
            else:
                nz, nr, ntheta = cfg.elements
                mesh = build_annulus_mesh(
                    cfg.inner_radius, cfg.outer_radius, nr, ntheta, nz, cfg.length, p, tags
                )
        except ValueError as exc:
            raise ConfigError(f"[mesh] {exc}") from exc
        self.config.check_boundaries(mesh.boundary_names)
        return mesh

    def initial_state(self, mesh: Mesh) -> np.ndarray:
        init, gas = self.config.initial, self.config.gas
        lengths = self.config.mesh.lengths
        if init.kind == "uniform":
            return uniform_state(mesh, gas, init.density, init.velocity, init.temperature)
        if init.kind == "density_wave":
            return density_wave_state(
                mesh, gas, lengths, init.density, init.velocity, init.temperature, init.amplitude
            )
        if init.kind == "random_smooth":
            return random_smooth_state(mesh, gas, lengths, seed=init.seed, amplitude=init.amplitude)
        if self.config.mesh.kind != "annulus":
            raise ConfigError("annulus_profile initial state needs an annulus mesh")
        if not gas.is_viscous:
            raise ConfigError("annulus_profile initial state needs mu > 0")
        G = self.config.body_force[0] if self.config.body_force is not None else gas.mu
        return annulus_state(
            mesh,
            gas,
            self.config.mesh.inner_radius,
            self.config.mesh.outer_radius,
            G,
            density=init.density,
            mach=init.mach,
        )

    def build_operator(self, mesh: Mesh) -> SpatialOperator:
        return SpatialOperator(
            mesh,
            self.config.gas,
            self.config.boundaries,
            mode=self.config.mode,
            body_force=self.config.body_force,
            interface_beta=self.config.interface_beta,
        )

    def run(self) -> RunResult:
        """Integrate to ``t_end`` and write the outputs.

        Raises:
            ConfigError: the case does not fit the mesh
            AdmissibilityError: the accepted solution left the admissible set
            StepSizeUnderflow: the controller could not find a step
        """
        cfg = self.config
        mesh = self.build_mesh()
        operator = self.build_operator(mesh)
        q0 = self.initial_state(mesh)
        self.records = []

        def record(t: float, y: np.ndarray, dydt: np.ndarray) -> None:
            state = SolverState(q=y, t=t)
            rhs = operator.evaluate(state)
            self.records.append(entropy_rhs_contraction(state, rhs, mesh, cfg.gas))

        logger.info(
            f"Running case '{cfg.name}': {mesh.n_elements} elements, p={cfg.p}, "
            f"mode={cfg.mode.value}, t_end={cfg.t_end}"
        )
        try:
            result = integrate(operator, q0, 0.0, cfg.t_end, cfg.integrator, on_step=record)
        except AdmissibilityError as exc:
            logger.error(f"Case '{cfg.name}' failed at element {exc.element}, node {exc.node}: {exc}")
            raise

        run = RunResult(records=self.records, integration=result, mesh=mesh)
        logger.info(
            f"Case '{cfg.name}' reached t={result.t:.6e}: {result.accepted} accepted, "
            f"{result.rejected} rejected steps, max |residual| {run.max_residual:.3e}"
        )
        if self.write_output:
            self._write(run, result)
        return run

    def _write(self, run: RunResult, result: IntegrationResult) -> None:
        out = self.config.output
        directory = Path(out.directory)
        run.timeseries_path = write_timeseries(run.records, directory / out.timeseries)
        if out.fields:
            snapshot = FieldSnapshot(
                p=self.config.p, t=result.t, coordinates=run.mesh.coordinates, q=result.y
            )
            run.fields_path = write_fields(snapshot, directory / out.fields)
        logger.info(f"Outputs written to {directory}")
