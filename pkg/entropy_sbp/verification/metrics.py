"""Verification results, per-check statistics and tolerances."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import orjson
import pandas as pd


@dataclass
class CheckResult:
    """Residuals of one identity over one chunk of random trials."""

    check: str
    chunk: int
    trials: int
    max_residual: float
    mean_residual: float


@dataclass
class CheckStatistics:
    """Statistics of one identity over all chunks."""

    check: str
    trials: int
    max_residual: float
    mean_residual: float
    p95_chunk_max: float
    tolerance: float
    passed: bool

    @classmethod
    def from_dataframe(cls, df: pd.DataFrame, tolerance: float) -> "CheckStatistics":
        """Aggregate the chunk rows of a single check."""
        trials = int(df["trials"].sum())
        max_residual = float(df["max_residual"].max())
        mean_residual = float((df["mean_residual"] * df["trials"]).sum() / max(trials, 1))
        return cls(
            check=df["check"].iloc[0],
            trials=trials,
            max_residual=max_residual,
            mean_residual=mean_residual,
            p95_chunk_max=float(df["max_residual"].quantile(0.95)),
            tolerance=tolerance,
            # NaN fails
            passed=bool(max_residual <= tolerance),
        )


@dataclass
class VerificationReport:
    """Summary of a verifier run."""

    seed: int
    trials: int
    total_checks: int
    passed_checks: int
    failed_checks: int
    check_stats: Dict[str, CheckStatistics]
    failures: List[str] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return self.failed_checks == 0 and self.total_checks > 0

    @property
    def max_residual(self) -> float:
        if not self.check_stats:
            return 0.0
        return max(stats.max_residual for stats in self.check_stats.values())

    @classmethod
    def from_results(
        cls,
        results: List[CheckResult],
        seed: int,
        trials: int,
        custom_tolerances: Optional[Dict[str, float]] = None,
    ) -> "VerificationReport":
        """Create report from the chunk-level results."""
        if not results:
            return cls(
                seed=seed,
                trials=trials,
                total_checks=0,
                passed_checks=0,
                failed_checks=0,
                check_stats={},
            )

        df = pd.DataFrame([r.__dict__ for r in results])
        check_stats = {}
        for check in df["check"].unique():
            tolerance = VerificationTolerances.get_tolerance(check, custom_tolerances)
            check_stats[check] = CheckStatistics.from_dataframe(df[df["check"] == check], tolerance)

        failures = [name for name, stats in check_stats.items() if not stats.passed]
        return cls(
            seed=seed,
            trials=trials,
            total_checks=len(check_stats),
            passed_checks=len(check_stats) - len(failures),
            failed_checks=len(failures),
            check_stats=check_stats,
            failures=failures,
        )

    def to_dataframe(self) -> pd.DataFrame:
        """One row per check."""
        rows = []
        for check, stats in self.check_stats.items():
            rows.append(
                {
                    "check": check,
                    "trials": stats.trials,
                    "max_residual": stats.max_residual,
                    "mean_residual": stats.mean_residual,
                    "p95_chunk_max": stats.p95_chunk_max,
                    "tolerance": stats.tolerance,
                    "passed": stats.passed,
                }
            )
        return pd.DataFrame(rows)

    def to_json(self) -> str:
        payload = {
            "seed": self.seed,
            "trials": self.trials,
            "passed": self.all_passed,
            "max_residual": self.max_residual,
            "failures": self.failures,
            "checks": self.to_dataframe().to_dict(orient="records"),
        }
        return orjson.dumps(payload, option=orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY).decode()


class VerificationTolerances:
    """Relative residual tolerances per identity."""

    DEFAULT_TOLERANCES = {
        "godunov_potential": 1e-11,
        "godunov_potential_flux": 1e-11,
        "shuffle": 1e-11,
        "ec_consistency": 1e-11,
        "es_dissipation_sign": 1e-11,
        "mirror_no_penetration": 1e-11,
        "wall_inviscid_entropy": 1e-11,
        "heat_flux_contraction": 1e-11,
        "wall_adiabatic": 1e-11,
        "wall_heat_flow": 1e-11,
        "wall_entropy_flux_no_slip": 1e-11,
        "ip_closed_form": 1e-11,
        "ip_dissipation_sign": 1e-11,
        "c_symmetry": 1e-11,
        "c_psd": 1e-11,
        "c_flux_oracle": 1e-11,
        "jacobian_inverse": 1e-11,
        "symmetrizer": 1e-11,
    }

    @classmethod
    def get_tolerance(cls, check: str, custom_tolerances: Optional[Dict[str, float]] = None) -> float:
        if custom_tolerances and check in custom_tolerances:
            return custom_tolerances[check]
        return cls.DEFAULT_TOLERANCES.get(check, 1e-11)
