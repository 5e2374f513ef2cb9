"""Case configuration files and runtime settings."""

import os
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from ..boundaries.data_models import FarFieldSpec, HeatEntropyFlow, HeatFlowKind, WallSpec
from ..exceptions import ConfigError
from ..mesh.data_models import BoundaryTag
from ..physics.data_models import GasParameters, InviscidMode
from ..solver.data_models import IntegratorConfig

MESH_KINDS = ("box", "perturbed_box", "annulus")
INITIAL_KINDS = ("uniform", "annulus_profile", "density_wave", "random_smooth")
STUDY_CASES = ("projection", "density_wave", "annulus")


@dataclass
class RuntimeSettings:
    """Process-level settings.

    Environment variables:
    - ENTROPY_SBP_THREADS: worker threads for verification and studies
    - ENTROPY_SBP_LOG_LEVEL: loguru level name
    """

    threads: int = 1
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "RuntimeSettings":
        """Create settings from environment variables."""
        raw = os.environ.get("ENTROPY_SBP_THREADS", "1")
        try:
            threads = int(raw)
        except ValueError as exc:
            raise ConfigError(f"ENTROPY_SBP_THREADS must be an integer, got {raw!r}") from exc
        if threads < 1:
            raise ConfigError(f"ENTROPY_SBP_THREADS must be >= 1, got {threads}")
        return cls(threads=threads, log_level=os.environ.get("ENTROPY_SBP_LOG_LEVEL", "INFO").upper())


@dataclass
class MeshConfig:
    """Analytic mesh selection.

    ``elements`` is (nx, ny, nz) for boxes, (n_axial, n_radial, n_theta) for
    the annulus and a single count for the perturbed box.
    """

    kind: str = "box"
    elements: Tuple[int, ...] = (4, 4, 4)
    lengths: Tuple[float, float, float] = (1.0, 1.0, 1.0)
    periodic: Tuple[bool, bool, bool] = (False, False, False)
    amplitude: float = 0.05
    inner_radius: float = 0.125
    outer_radius: float = 0.5
    length: float = 1.0

    def __post_init__(self):
        if self.kind not in MESH_KINDS:
            raise ConfigError(f"Unknown mesh kind {self.kind!r}, expected one of {MESH_KINDS}")
        self.elements = tuple(int(n) for n in self.elements)
        if any(n < 1 for n in self.elements):
            raise ConfigError(f"Element counts must be positive, got {self.elements}")


@dataclass
class InitialConfig:
    """Initial state: uniform or one of the analytic fields."""

    kind: str = "uniform"
    density: float = 1.0
    velocity: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    temperature: float = 1.0
    amplitude: float = 0.1
    mach: float = 1e-2
    seed: int = 0

    def __post_init__(self):
        if self.kind not in INITIAL_KINDS:
            raise ConfigError(f"Unknown initial state {self.kind!r}, expected one of {INITIAL_KINDS}")
        if self.density <= 0.0 or self.temperature <= 0.0:
            raise ConfigError("Initial density and temperature must be positive")


@dataclass
class OutputConfig:
    directory: str = "output"
    timeseries: str = "timeseries.csv"
    fields: Optional[str] = "fields.bin"
    study: str = "convergence.csv"


@dataclass
class StudyConfig:
    """Convergence study: case, orders and nested element counts."""

    case: str = "projection"
    orders: List[int] = field(default_factory=lambda: [2, 3])
    refinements: List[int] = field(default_factory=lambda: [2, 4, 8])
    solver_rtol: float = 1e-11

    def __post_init__(self):
        if not 0.0 < self.solver_rtol < 1.0:
            raise ConfigError(f"[study] solver_rtol must be in (0, 1), got {self.solver_rtol}")
        if self.case not in STUDY_CASES:
            raise ConfigError(f"Unknown study case {self.case!r}, expected one of {STUDY_CASES}")
        if not self.orders or not self.refinements:
            raise ConfigError("Study needs at least one order and one refinement")
        if sorted(self.refinements) != list(self.refinements):
            raise ConfigError(f"Refinements must be increasing, got {self.refinements}")


BoundaryConfig = Union[WallSpec, FarFieldSpec]


@dataclass
class CaseConfig:
    """Validated case description, see ``load_case_config``."""

    name: str
    p: int
    t_end: float
    mode: InviscidMode
    gas: GasParameters
    mesh: MeshConfig
    initial: InitialConfig
    boundaries: Dict[str, BoundaryConfig]
    integrator: IntegratorConfig
    output: OutputConfig
    body_force: Optional[Tuple[float, float, float]] = None
    interface_beta: Optional[float] = None
    study: Optional[StudyConfig] = None
    source: Optional[Path] = None

    def boundary_tags(self) -> Dict[str, BoundaryTag]:
        return {
            name: BoundaryTag.WALL if isinstance(spec, WallSpec) else BoundaryTag.FAR_FIELD
            for name, spec in self.boundaries.items()
        }

    def check_boundaries(self, boundary_names: List[str]) -> None:
        """Every configured boundary names a mesh face and every mesh face is configured."""
        unknown = sorted(set(self.boundaries) - set(boundary_names))
        if unknown:
            raise ConfigError(f"Boundaries {unknown} do not exist on the mesh {boundary_names}")
        missing = sorted(set(boundary_names) - set(self.boundaries))
        if missing:
            raise ConfigError(f"Mesh faces {missing} have no boundary condition")


def _section(data: Dict[str, Any], name: str) -> Dict[str, Any]:
    value = data.get(name, {})
    if not isinstance(value, dict):
        raise ConfigError(f"[{name}] must be a table")
    return value


def _build(cls, values: Dict[str, Any], section: str):
    try:
        return cls(**values)
    except TypeError as exc:
        raise ConfigError(f"Invalid keys in [{section}]: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"Invalid values in [{section}]: {exc}") from exc


def _parse_mode(raw: str, where: str) -> InviscidMode:
    try:
        return InviscidMode(raw)
    except ValueError as exc:
        raise ConfigError(f"{where}: mode must be 'conservative' or 'stable', got {raw!r}") from exc


def _parse_heat_flow(raw: Dict[str, Any], where: str) -> HeatEntropyFlow:
    try:
        kind = HeatFlowKind(raw.get("kind", "constant"))
    except ValueError as exc:
        raise ConfigError(f"{where}: unknown heat flow kind {raw.get('kind')!r}") from exc
    return HeatEntropyFlow(
        kind=kind,
        amplitude=float(raw.get("amplitude", 0.0)),
        frequency=float(raw.get("frequency", 0.0)),
    )


def _parse_boundary(name: str, raw: Dict[str, Any], default_mode: InviscidMode) -> BoundaryConfig:
    where = f"[boundaries.{name}]"
    kind = raw.get("type", "wall")
    try:
        if kind == "wall":
            return WallSpec(
                velocity=np.asarray(raw.get("velocity", (0.0, 0.0, 0.0)), dtype=float),
                heat_flow=_parse_heat_flow(raw.get("heat_flow", {}), where),
                beta=None if raw.get("beta") is None else float(raw["beta"]),
                inviscid_mode=_parse_mode(raw.get("mode", default_mode.value), where),
                angular_velocity=raw.get("angular_velocity"),
                rotation_center=raw.get("rotation_center"),
                normal=raw.get("normal"),
            )
        if kind == "far_field":
            if "state" not in raw:
                raise ConfigError(f"{where}: far-field boundary needs 'state'")
            return FarFieldSpec(state=np.asarray(raw["state"], dtype=float))
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from exc
    raise ConfigError(f"{where}: unknown boundary type {kind!r}")


def parse_case_config(data: Dict[str, Any], name: str = "case", source: Optional[Path] = None) -> CaseConfig:
    """Validate a parsed TOML document into a ``CaseConfig``."""
    run = _section(data, "run")
    mode = _parse_mode(run.get("mode", "conservative"), "[run]")
    p = int(run.get("p", 3))
    if p < 1:
        raise ConfigError(f"[run] p must be >= 1, got {p}")
    t_end = float(run.get("t_end", 1.0))
    if t_end < 0.0:
        raise ConfigError(f"[run] t_end must be >= 0, got {t_end}")

    gas = _build(GasParameters, _section(data, "gas"), "gas")
    mesh = _build(MeshConfig, _section(data, "mesh"), "mesh")
    initial = _build(InitialConfig, _section(data, "initial"), "initial")
    integrator = _build(IntegratorConfig, _section(data, "integrator"), "integrator")
    output = _build(OutputConfig, _section(data, "output"), "output")

    boundaries = {
        face: _parse_boundary(face, raw, mode)
        for face, raw in _section(data, "boundaries").items()
    }

    body = _section(data, "body_force")
    body_force = None
    if "force" in body:
        force = tuple(float(g) for g in body["force"])
        if len(force) != 3:
            raise ConfigError(f"[body_force] force needs 3 components, got {force}")
        body_force = force

    study = None
    if "study" in data:
        study = _build(StudyConfig, _section(data, "study"), "study")

    beta = run.get("interface_beta")
    return CaseConfig(
        name=str(run.get("name", name)),
        p=p,
        t_end=t_end,
        mode=mode,
        gas=gas,
        mesh=mesh,
        initial=initial,
        boundaries=boundaries,
        integrator=integrator,
        output=output,
        body_force=body_force,
        interface_beta=None if beta is None else float(beta),
        study=study,
        source=source,
    )


def load_case_config(path: Union[str, Path]) -> CaseConfig:
    """Read and validate a TOML case file.

    Raises:
        ConfigError: unreadable file, TOML syntax error or invalid values
    """
    path = Path(path)
    try:
        with path.open("rb") as fh:
            data = tomllib.load(fh)
    except OSError as exc:
        raise ConfigError(f"Cannot read case file {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"Malformed case file {path}: {exc}") from exc
    return parse_case_config(data, name=path.stem, source=path)
