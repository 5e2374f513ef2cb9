"""Randomized verification of the discrete entropy identities."""

from .metrics import CheckResult, CheckStatistics, VerificationReport, VerificationTolerances
from .validator import TheoremVerifier, TrialData

__all__ = [
    "CheckResult",
    "CheckStatistics",
    "VerificationReport",
    "VerificationTolerances",
    "TheoremVerifier",
    "TrialData",
]
