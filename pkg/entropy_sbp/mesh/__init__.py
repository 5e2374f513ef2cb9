"""Analytic hexahedral meshes and curvilinear metrics."""

from .builder import build_annulus_mesh, build_box_mesh, build_perturbed_box_mesh
from .data_models import BoundaryFace, BoundaryTag, FacePairing, Mesh
from .metrics import compute_metrics

__all__ = [
    "build_annulus_mesh",
    "build_box_mesh",
    "build_perturbed_box_mesh",
    "BoundaryFace",
    "BoundaryTag",
    "FacePairing",
    "Mesh",
    "compute_metrics",
]
