"""Command line entry point.

    entropy-sbp run configs/cavity_ec.toml
    entropy-sbp verify --trials 10000 --seed 1
    entropy-sbp study configs/annulus_p3.toml
    entropy-sbp mesh configs/annulus_p2.toml

Exit codes: 0 success, 1 verification failure, 2 admissibility failure or
step-size underflow, 3 configuration error. ENTROPY_SBP_THREADS and
ENTROPY_SBP_LOG_LEVEL set the defaults for ``--threads`` and the log level.
"""

import sys
from pathlib import Path
from typing import Optional

import fire
import numpy as np
from loguru import logger

from .boundaries.wall import inviscid_mirror_state
from .cases.config import RuntimeSettings, load_case_config
from .cases.runner import CaseRunner
from .diagnostics.convergence import StudySetup, run_convergence_study
from .exceptions import (
    AdmissibilityError,
    ConfigError,
    FieldIOError,
    InvalidMeshError,
    MismatchedFaceError,
    StepSizeUnderflow,
)
from .verification.validator import TheoremVerifier

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INADMISSIBLE = 2
EXIT_CONFIG = 3

# a config that describes an unbuildable mesh is a configuration error
MESH_ERRORS = (InvalidMeshError, MismatchedFaceError)


def unflipped_mirror_state(v: np.ndarray, normal: np.ndarray) -> np.ndarray:
    """Faulty wall ghost state that keeps the normal velocity (negative control)."""
    return np.array(v, copy=True)


def configure_logging(level: str) -> None:
    logger.remove()
    logger.add(sys.stderr, level=level)


class EntropySBPCommands:
    """Entropy-stable SBP-SAT Navier-Stokes solver with solid-wall boundaries."""

    def __init__(self):
        try:
            self._settings = RuntimeSettings.from_env()
        except ConfigError as exc:
            logger.error(str(exc))
            raise SystemExit(EXIT_CONFIG) from exc
        configure_logging(self._settings.log_level)

    def _threads(self, threads: Optional[int]) -> int:
        return self._settings.threads if threads is None else max(1, int(threads))

    def run(self, config: str, output_dir: Optional[str] = None) -> None:
        """Integrate a case file and write the entropy time series and final fields.

        Args:
            config: TOML case file
            output_dir: Overrides [output] directory
        """
        try:
            case = load_case_config(config)
            if output_dir is not None:
                case.output.directory = str(output_dir)
            result = CaseRunner(case).run()
        except ConfigError as exc:
            logger.error(f"Configuration error: {exc}")
            raise SystemExit(EXIT_CONFIG) from exc
        except MESH_ERRORS as exc:
            logger.error(f"Invalid mesh: {exc}")
            raise SystemExit(EXIT_CONFIG) from exc
        except (AdmissibilityError, StepSizeUnderflow) as exc:
            logger.error(f"Run aborted: {exc}")
            raise SystemExit(EXIT_INADMISSIBLE) from exc
        except FieldIOError as exc:
            logger.error(f"Output failed: {exc}")
            raise SystemExit(EXIT_CONFIG) from exc
        if not result.integration.completed:
            logger.warning(f"Run stopped at t={result.integration.t:.6e} (max_steps reached)")

    def verify(
        self,
        seed: int = 0,
        trials: int = 10_000,
        threads: Optional[int] = None,
        inject_fault: bool = False,
        report: Optional[str] = None,
    ) -> None:
        """Randomized check of the discrete entropy identities.

        Args:
            seed: Root seed; results do not depend on the thread count
            trials: Random states per identity
            threads: Worker threads
            inject_fault: Replace the wall mirror state by a faulty one
            report: Optional path for the JSON report
        """
        mirror = unflipped_mirror_state if inject_fault else inviscid_mirror_state
        verifier = TheoremVerifier(threads=self._threads(threads), mirror=mirror)
        result = verifier.verify_all(seed=int(seed), trials=int(trials))
        print(result.to_dataframe().to_string(index=False))
        if report is not None:
            Path(report).write_text(result.to_json())
        if not result.all_passed:
            logger.error(f"{result.failed_checks} of {result.total_checks} identities failed")
            raise SystemExit(EXIT_VERIFICATION_FAILED)

    def study(self, config: str, threads: Optional[int] = None) -> None:
        """Convergence study described by the [study] section of a case file."""
        try:
            case = load_case_config(config)
            if case.study is None:
                raise ConfigError(f"{config} has no [study] section")
            setup = StudySetup(
                gas=case.gas,
                inner_radius=case.mesh.inner_radius,
                outer_radius=case.mesh.outer_radius,
                length=case.mesh.length,
                mach=case.initial.mach,
                solver_rtol=case.study.solver_rtol,
            )
            table = run_convergence_study(
                case.study.case,
                case.study.orders,
                case.study.refinements,
                setup=setup,
                threads=self._threads(threads),
                output=Path(case.output.directory) / case.output.study,
            )
        except ConfigError as exc:
            logger.error(f"Configuration error: {exc}")
            raise SystemExit(EXIT_CONFIG) from exc
        except (AdmissibilityError, StepSizeUnderflow) as exc:
            logger.error(f"Study aborted: {exc}")
            raise SystemExit(EXIT_INADMISSIBLE) from exc
        except MESH_ERRORS as exc:
            logger.error(f"Invalid mesh: {exc}")
            raise SystemExit(EXIT_CONFIG) from exc
        except FieldIOError as exc:
            logger.error(f"Output failed: {exc}")
            raise SystemExit(EXIT_CONFIG) from exc
        print(table.to_string(index=False))

    def mesh(self, config: str) -> None:
        """Print the mesh summary of a case file as JSON."""
        try:
            mesh = CaseRunner(load_case_config(config), write_output=False).build_mesh()
        except ConfigError as exc:
            logger.error(f"Configuration error: {exc}")
            raise SystemExit(EXIT_CONFIG) from exc
        except MESH_ERRORS as exc:
            logger.error(f"Invalid mesh: {exc}")
            raise SystemExit(EXIT_CONFIG) from exc
        print(mesh.summary_json())


def main(argv=None) -> None:
    fire.Fire(EntropySBPCommands, command=argv, name="entropy-sbp")


if __name__ == "__main__":
    main()
