"""SBP operators and tensor-product helpers."""

from .sbp import Operator1D, build_sbp_1d, lagrange_derivative_matrix, lgl_rule
from .tensor import (
    TensorLayout,
    face_direction,
    face_index,
    face_scalar,
    face_sign,
    face_values,
    tensor_apply,
)

__all__ = [
    "Operator1D",
    "build_sbp_1d",
    "lagrange_derivative_matrix",
    "lgl_rule",
    "TensorLayout",
    "face_direction",
    "face_index",
    "face_scalar",
    "face_sign",
    "face_values",
    "tensor_apply",
]
