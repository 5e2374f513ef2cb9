"""Exception hierarchy for the solver."""

from typing import Optional, Tuple


class EntropySBPError(Exception):
    """Base class for all solver errors."""


class AdmissibilityError(EntropySBPError):
    """A state left the admissible set (positive density and temperature).

    Args:
        message: Human readable description
        index: Index of the offending entry in the array that was checked
    """

    def __init__(self, message: str, index: Optional[Tuple[int, ...]] = None):
        super().__init__(message)
        self.index = index

    @property
    def element(self) -> Optional[int]:
        """Element id when the checked array was a full solution field."""
        if self.index is None or len(self.index) < 4:
            return None
        return self.index[0]

    @property
    def node(self) -> Optional[Tuple[int, ...]]:
        """Node (i, j, k) within the element when available."""
        if self.index is None or len(self.index) < 4:
            return None
        return tuple(self.index[1:4])


class NonPositiveDensity(AdmissibilityError):
    pass


class NonPositiveTemperature(AdmissibilityError):
    pass


class InvalidMeshError(EntropySBPError):
    """Mesh geometry is unusable (non-positive Jacobian, bad pairing)."""


class MismatchedFaceError(EntropySBPError):
    """Two faces paired as an interface do not coincide."""


class ConfigError(EntropySBPError):
    """Case configuration failed to parse or validate."""


class StepSizeUnderflow(EntropySBPError):
    """The step-size controller asked for a step below the configured minimum."""


class FieldIOError(EntropySBPError):
    """Reading or writing an output file failed."""

    def __init__(self, message: str, path: str):
        super().__init__(f"{message} [{path}]")
        self.path = path
