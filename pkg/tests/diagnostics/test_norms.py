"""Tests for quadrature-weighted error norms."""

import numpy as np
import pytest

from entropy_sbp.diagnostics import error_norms, interpolation_error_norms, weighted_norms
from entropy_sbp.diagnostics.norms import interpolation_matrix
from entropy_sbp.mesh import build_box_mesh
from entropy_sbp.operators import build_sbp_1d


@pytest.fixture
def mesh():
    return build_box_mesh(2, 2, 2, p=3)


def bumpy(x):
    return np.sin(3.0 * x[..., 0]) * np.cos(x[..., 1]) + x[..., 2]


class TestErrorNorms:
    """Test nodal norms against closed forms."""

    def test_constant_offset(self, mesh):
        field = bumpy(mesh.coordinates) + 0.3
        norms = error_norms(field, bumpy, mesh)
        # unit volume
        assert norms.l1 == pytest.approx(0.3, rel=1e-12)
        assert norms.l2 == pytest.approx(0.3, rel=1e-12)
        assert norms.linf == pytest.approx(0.3, rel=1e-12)

    def test_components_are_summed(self, mesh):
        field = np.full(mesh.coordinates.shape[:-1] + (5,), 0.3)
        norms = error_norms(field, np.zeros_like(field), mesh)
        assert norms.l1 == pytest.approx(1.5, rel=1e-12)
        assert norms.l2 == pytest.approx(np.sqrt(5 * 0.09), rel=1e-12)

    def test_identical_fields(self, mesh):
        field = bumpy(mesh.coordinates)
        assert error_norms(field, field, mesh).as_dict() == {"l1": 0.0, "l2": 0.0, "linf": 0.0}

    def test_weighted_norms(self):
        norms = weighted_norms(np.array([1.0, -2.0]), np.array([0.5, 0.25]))
        assert norms.l1 == pytest.approx(1.0)
        assert norms.l2 == pytest.approx(np.sqrt(1.5))
        assert norms.linf == 2.0


class TestInterpolationNorms:
    """Test norms evaluated on a finer Gauss rule."""

    def test_lagrange_basis_is_identity_at_nodes(self):
        nodes = build_sbp_1d(4).nodes
        np.testing.assert_allclose(interpolation_matrix(nodes, nodes), np.eye(5), atol=1e-15)

    def test_basis_reproduces_polynomials(self):
        nodes = build_sbp_1d(3).nodes
        points = np.linspace(-1.0, 1.0, 7)
        np.testing.assert_allclose(
            interpolation_matrix(nodes, points) @ nodes**3, points**3, atol=1e-14
        )

    def test_polynomial_field_is_exact(self, mesh):
        def cubic(x):
            return x[..., 0] ** 3 - x[..., 1] * x[..., 2]

        norms = interpolation_error_norms(cubic(mesh.coordinates), cubic, mesh)
        assert norms.l2 < 1e-13
        assert norms.linf < 1e-13

    def test_interpolation_error_exceeds_nodal_error(self, mesh):
        field = bumpy(mesh.coordinates)
        assert error_norms(field, bumpy, mesh).l2 == 0.0
        assert interpolation_error_norms(field, bumpy, mesh).l2 > 0.0
