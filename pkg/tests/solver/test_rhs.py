"""Tests for the semi-discrete right-hand side and its entropy balance."""

import numpy as np
import pytest

from entropy_sbp.boundaries import FarFieldSpec, HeatEntropyFlow, HeatFlowKind, WallSpec
from entropy_sbp.cases.initial_conditions import random_smooth_state, uniform_state
from entropy_sbp.exceptions import AdmissibilityError, ConfigError
from entropy_sbp.mesh import build_box_mesh, build_perturbed_box_mesh
from entropy_sbp.operators import build_sbp_1d
from entropy_sbp.physics import (
    GasParameters,
    InviscidMode,
    assemble_c_matrices,
    cons_to_prim,
    ec_flux_prim,
    entropy_variables,
    inviscid_flux_prim,
    prim_to_cons,
    two_point_flux_prim,
)
from entropy_sbp.solver import (
    IntegratorConfig,
    SolverState,
    SpatialOperator,
    compute_rhs,
    entropy_rhs_contraction,
    integrate,
    ldg_gradients,
)

BOX_WALLS = ("x_min", "x_max", "y_min", "y_max", "z_min", "z_max")


@pytest.fixture
def viscous_gas():
    return GasParameters(mu=1e-2)


@pytest.fixture
def periodic_box():
    return build_box_mesh(2, 2, 2, p=3, periodic=(True, True, True))


@pytest.fixture
def cavity():
    return build_box_mesh(2, 2, 2, p=3)


def roughen(q, seed=0, amount=1e-2):
    """Break continuity across faces so the penalties see jumps."""
    rng = np.random.default_rng(seed)
    return q * (1.0 + amount * rng.uniform(-1.0, 1.0, q.shape[:-1] + (1,)))


def cavity_walls(stable=False, heat=None):
    mode = InviscidMode.STABLE if stable else InviscidMode.CONSERVATIVE
    beta = 4.0 if stable else 0.0
    walls = {name: WallSpec(beta=beta, inviscid_mode=mode) for name in BOX_WALLS}
    walls["z_max"] = WallSpec(
        angular_velocity=[0.0, 0.0, 0.05],
        rotation_center=[0.5, 0.5, 1.0],
        beta=beta,
        inviscid_mode=mode,
    )
    if heat is not None:
        walls["x_max"] = WallSpec(heat_flow=heat, beta=beta, inviscid_mode=mode)
    return walls


class TestSteadyStates:
    """Test states the discretization must hold exactly."""

    def test_rest_state_in_closed_box(self, cavity, viscous_gas):
        q = uniform_state(cavity, viscous_gas)
        walls = {name: WallSpec() for name in BOX_WALLS}
        rhs = compute_rhs(SolverState(q=q), cavity, viscous_gas, walls)
        np.testing.assert_allclose(rhs, 0.0, atol=1e-10)

    def test_free_stream_on_curved_periodic_mesh(self):
        mesh = build_perturbed_box_mesh(3, p=3, amplitude=0.05)
        gas = GasParameters(mu=1e-3)
        operator = SpatialOperator(mesh, gas, {})
        q = uniform_state(mesh, gas, velocity=(0.3, 0.2, 0.1))
        np.testing.assert_allclose(operator(q, 0.0), 0.0, atol=1e-10)

        config = IntegratorConfig(atol=1e-12, rtol=1e-12, h_init=1e-3)
        result = integrate(operator, q, 0.0, 0.01, config)
        assert result.completed
        np.testing.assert_allclose(result.y, q, atol=1e-11)

    def test_body_force_source(self, periodic_box):
        gas = GasParameters()
        operator = SpatialOperator(periodic_box, gas, {}, body_force=(0.01, 0.0, 0.0))
        q = uniform_state(periodic_box, gas, velocity=(0.1, 0.0, 0.0))
        rhs = operator(q, 0.0)
        np.testing.assert_allclose(rhs[..., 1], 0.01, atol=1e-10)
        np.testing.assert_allclose(rhs[..., 2:4], 0.0, atol=1e-10)
        np.testing.assert_allclose(rhs[..., 4], 0.001, atol=1e-10)


class TestConservation:
    """Test that interfaces exchange fluxes without loss."""

    @pytest.mark.parametrize("mode", [InviscidMode.CONSERVATIVE, InviscidMode.STABLE])
    def test_periodic_totals_are_constant(self, periodic_box, viscous_gas, mode):
        q = random_smooth_state(periodic_box, viscous_gas, (1.0, 1.0, 1.0), seed=4)
        operator = SpatialOperator(periodic_box, viscous_gas, {}, mode=mode)
        rhs = operator(q, 0.0)
        weights = periodic_box.quadrature_weights()[..., None]
        totals = np.sum(weights * rhs, axis=(0, 1, 2, 3))
        np.testing.assert_allclose(totals, 0.0, atol=1e-12)
        assert np.max(np.abs(rhs)) > 1e-3


class TestEntropyBalance:
    """Test dS/dt + DT - Xi = 0 on the discrete level."""

    def record(self, mesh, gas, q, conditions, mode=InviscidMode.CONSERVATIVE, t=0.0):
        operator = SpatialOperator(mesh, gas, conditions, mode=mode)
        state = SolverState(q=q, t=t)
        rhs = operator.evaluate(state)
        return state, entropy_rhs_contraction(state, rhs, mesh, gas)

    def test_periodic_inviscid_conservation(self, periodic_box):
        gas = GasParameters()
        q = random_smooth_state(periodic_box, gas, (1.0, 1.0, 1.0), seed=2)
        _, record = self.record(periodic_box, gas, q, {})
        assert record.DT == 0.0
        assert record.Xi == 0.0
        assert abs(record.dSdt) < 1e-12

    def test_periodic_inviscid_dissipation(self, periodic_box):
        gas = GasParameters()
        q = roughen(random_smooth_state(periodic_box, gas, (1.0, 1.0, 1.0), seed=2))
        state, record = self.record(periodic_box, gas, q, {}, mode=InviscidMode.STABLE)
        assert state.surface.interface_dissipation < 0.0
        assert abs(record.residual) < 1e-12

    @pytest.mark.parametrize("stable", [False, True])
    def test_cavity_balance(self, cavity, viscous_gas, stable):
        q = roughen(random_smooth_state(cavity, viscous_gas, (1.0, 1.0, 1.0), seed=7))
        mode = InviscidMode.STABLE if stable else InviscidMode.CONSERVATIVE
        state, record = self.record(cavity, viscous_gas, q, cavity_walls(stable), mode=mode)
        assert record.DT > 0.0
        assert record.relative_residual() < 1e-9
        if stable:
            assert state.surface.wall_dissipation < 0.0
            assert state.surface.interface_dissipation < 0.0
        else:
            assert state.surface.wall_dissipation == pytest.approx(0.0, abs=1e-12)

    def test_prescribed_heat_entropy_flow(self, cavity, viscous_gas):
        heat = HeatEntropyFlow(HeatFlowKind.SINUSOID, amplitude=1e-4, frequency=2.0)
        q = roughen(random_smooth_state(cavity, viscous_gas, (1.0, 1.0, 1.0), seed=7))
        state, record = self.record(cavity, viscous_gas, q, cavity_walls(heat=heat), t=0.125)
        # unit face area times g(1/8) = amplitude
        assert state.surface.heat_flow == pytest.approx(1e-4, rel=1e-12)
        assert record.relative_residual() < 1e-9


class TestGradients:
    """Test the LDG gradient equation."""

    def test_polynomial_gradient_is_exact(self):
        mesh = build_box_mesh(1, 1, 1, lengths=(2.0, 1.0, 0.5), p=3)
        x = mesh.coordinates
        w = np.empty(x.shape[:-1] + (5,))
        for c in range(5):
            w[..., c] = (c + 1) * x[..., 0] ** 2 + x[..., 1] - c * x[..., 2] ** 3
        theta = ldg_gradients(w, mesh.jacobian, mesh.metrics, build_sbp_1d(3))
        for c in range(5):
            np.testing.assert_allclose(theta[..., 0, c], 2.0 * (c + 1) * x[..., 0], atol=1e-12)
            np.testing.assert_allclose(theta[..., 1, c], 1.0, atol=1e-12)
            np.testing.assert_allclose(theta[..., 2, c], -3.0 * c * x[..., 2] ** 2, atol=1e-12)

    def test_constant_field_on_periodic_mesh(self, periodic_box, viscous_gas):
        operator = SpatialOperator(periodic_box, viscous_gas, {})
        state = SolverState(q=uniform_state(periodic_box, viscous_gas, velocity=(0.2, 0.0, 0.0)))
        operator.evaluate(state)
        np.testing.assert_allclose(state.theta, 0.0, atol=1e-11)


class TestOperatorErrors:
    """Test configuration and admissibility failures."""

    def test_missing_boundary_condition(self, cavity, viscous_gas):
        with pytest.raises(ConfigError, match="No boundary condition"):
            SpatialOperator(cavity, viscous_gas, {"x_min": WallSpec()})

    def test_inadmissible_state_names_element(self, periodic_box, viscous_gas):
        q = uniform_state(periodic_box, viscous_gas)
        q[3, 1, 2, 0, 0] = -1.0
        operator = SpatialOperator(periodic_box, viscous_gas, {})
        with pytest.raises(AdmissibilityError) as info:
            operator(q, 0.0)
        assert info.value.element == 3
        assert info.value.node == (1, 2, 0)


def extruded_oracle(v_line, op, ja, J, gas, mode):
    """Loop-assembled dq/dt of a periodic x-only problem.

    ``v_line`` is (elements, N, 5) ordered along x; ``ja`` the constant
    contravariant normal of the x faces.
    """
    n_elem, N, _ = v_line.shape
    out = np.zeros_like(v_line)
    for e in range(n_elem):
        for i in range(N):
            total = np.zeros(5)
            for k in range(N):
                total += 2.0 * op.D[i, k] * ec_flux_prim(v_line[e, i], v_line[e, k], ja, gas)
            out[e, i] = -total
        right = v_line[(e + 1) % n_elem, 0]
        left = v_line[(e - 1) % n_elem, -1]
        out[e, -1] -= (
            two_point_flux_prim(v_line[e, -1], right, ja, gas, mode)
            - inviscid_flux_prim(v_line[e, -1], ja, gas)
        ) / op.weights[-1]
        out[e, 0] += (
            two_point_flux_prim(left, v_line[e, 0], ja, gas, mode)
            - inviscid_flux_prim(v_line[e, 0], ja, gas)
        ) / op.weights[0]
    return out / J


class TestDenseOracle:
    """Compare the assembled operator with a loop-by-loop assembly."""

    @pytest.mark.parametrize("mode", [InviscidMode.CONSERVATIVE, InviscidMode.STABLE])
    def test_two_element_extruded_problem(self, mode):
        gas = GasParameters()
        mesh = build_box_mesh(2, 1, 1, p=2, periodic=(True, True, True))
        x = mesh.coordinates[..., 0]
        v = np.empty(x.shape + (5,))
        v[..., 0] = 1.0 + 0.2 * np.sin(2.0 * np.pi * x)
        v[..., 1] = 0.3 + 0.1 * np.cos(2.0 * np.pi * x)
        v[..., 2] = 0.1
        v[..., 3] = -0.2
        v[..., 4] = 1.0 + 0.1 * np.cos(4.0 * np.pi * x)
        # element jumps so the interface flux matters
        v[..., 0] *= 1.0 + 0.05 * np.arange(mesh.n_elements)[:, None, None, None]
        q = prim_to_cons(v, gas)

        rhs = compute_rhs(SolverState(q=q, t=0.0), mesh, gas, {}, mode=mode)

        order = np.argsort(mesh.coordinates[:, 0, 0, 0, 0])
        v_line = cons_to_prim(q, gas)[order][:, :, 0, 0, :]
        expected = extruded_oracle(
            v_line,
            build_sbp_1d(2),
            mesh.metrics[0, 0, 0, 0, 0, :],
            mesh.jacobian[0, 0, 0, 0],
            gas,
            mode,
        )
        for j in range(3):
            for k in range(3):
                np.testing.assert_allclose(rhs[order][:, :, j, k, :], expected, atol=1e-12)


def line_operator(op, n_elem, periodic, closed):
    """Derivative along one row of elements with central interface lifts.

    ``closed`` adds the no-slip wall closure at both ends of a non-periodic
    row: the lifted term drops the end value, as for the velocity part of
    the gradient and the energy part of the viscous divergence.
    """
    N = op.n_nodes
    lift = 1.0 / op.weights[0]
    M = np.kron(np.eye(n_elem), op.D)
    for e in range(n_elem if periodic else n_elem - 1):
        L, R = e * N + N - 1, ((e + 1) % n_elem) * N
        M[L, R] += 0.5 * lift
        M[L, L] -= 0.5 * lift
        M[R, L] -= 0.5 * lift
        M[R, R] += 0.5 * lift
    if closed and not periodic:
        M[0, 0] += lift
        M[-1, -1] -= lift
    return M


def direction_operator(line, direction, sizes):
    factors = [np.eye(s) for s in sizes]
    factors[direction] = line
    return np.kron(np.kron(factors[0], factors[1]), factors[2])


def to_lines(field, grid, N):
    """(K, N, N, N, ...) -> (nodes, ...) in global x-major line order."""
    tail = field.shape[4:]
    blocks = field.reshape(tuple(grid) + (N, N, N) + tail)
    axes = (0, 3, 1, 4, 2, 5) + tuple(range(6, 6 + len(tail)))
    return blocks.transpose(axes).reshape((-1,) + tail)


def from_lines(values, grid, N):
    tail = values.shape[1:]
    lines = values.reshape((grid[0], N, grid[1], N, grid[2], N) + tail)
    axes = (0, 2, 4, 1, 3, 5) + tuple(range(6, 6 + len(tail)))
    return lines.transpose(axes).reshape((int(np.prod(grid)), N, N, N) + tail)


def kronecker_viscous_rhs(v, grid, lengths, periodic, op, gas):
    """Viscous dq/dt of an affine box with stationary adiabatic walls.

    LDG gradient, C-matrix fluxes and divergence, each as dense Kronecker
    operators on the global node lines.
    """
    N = op.n_nodes
    sizes = [g * N for g in grid]
    h = np.asarray(lengths, dtype=float) / np.asarray(grid)
    W = to_lines(entropy_variables(v, gas), grid, N)
    V = to_lines(v, grid, N)

    open_ops, closed_ops = [], []
    for d in range(3):
        for target, closed in ((open_ops, False), (closed_ops, True)):
            line = line_operator(op, grid[d], periodic[d], closed)
            target.append((2.0 / h[d]) * direction_operator(line, d, sizes))

    theta = np.zeros(V.shape[:1] + (3, 5))
    for d in range(3):
        for a in range(5):
            A = closed_ops[d] if a in (1, 2, 3) else open_ops[d]
            theta[:, d, a] = A @ W[:, a]

    F = np.einsum("nmjab,njb->nma", assemble_c_matrices(V, gas), theta)
    rhs = np.zeros_like(V)
    for d in range(3):
        for a in range(5):
            A = closed_ops[d] if a == 4 else open_ops[d]
            rhs[:, a] += A @ F[:, d, a]
    return from_lines(rhs, grid, N)


class TestViscousOracle:
    """Compare the viscous terms with dense Kronecker assemblies."""

    GRID = (2, 2, 1)
    LENGTHS = (1.0, 0.5, 0.75)
    PERIODIC = (True, False, True)

    @pytest.fixture
    def channel(self):
        return build_box_mesh(*self.GRID, lengths=self.LENGTHS, p=2, periodic=self.PERIODIC)

    def test_matches_kronecker_assembly(self, channel):
        gas = GasParameters(mu=2e-2)
        inviscid = GasParameters(mu=0.0)
        walls = {"y_min": WallSpec(), "y_max": WallSpec()}
        q = roughen(random_smooth_state(channel, gas, self.LENGTHS, seed=5), seed=6)

        viscous_part = SpatialOperator(channel, gas, walls)(q, 0.0) - SpatialOperator(
            channel, inviscid, walls
        )(q, 0.0)
        expected = kronecker_viscous_rhs(
            cons_to_prim(q, gas), self.GRID, self.LENGTHS, self.PERIODIC, build_sbp_1d(2), gas
        )
        scale = max(1.0, float(np.max(np.abs(expected))))
        np.testing.assert_allclose(viscous_part, expected, atol=1e-11 * scale)
        assert np.max(np.abs(expected[..., 4])) > 1e-4

    def test_gradient_is_negative_adjoint_of_divergence(self):
        mesh = build_perturbed_box_mesh(2, p=3, amplitude=0.05)
        gas = GasParameters(mu=1e-2)
        operator = SpatialOperator(mesh, gas, {})
        inviscid = SpatialOperator(mesh, GasParameters(mu=0.0), {})
        q = roughen(random_smooth_state(mesh, gas, (1.0, 1.0, 1.0), seed=8), seed=9)

        state = SolverState(q=q)
        divergence = operator.evaluate(state) - inviscid(q, 0.0)
        F = state.viscous_flux

        rng = np.random.default_rng(10)
        w_test = rng.normal(size=q.shape)
        theta_test = ldg_gradients(
            w_test,
            mesh.jacobian,
            mesh.metrics,
            operator.op,
            operator.gradient_lifts(state.v, w_test, 0.0),
        )
        H = mesh.quadrature_weights()
        lhs = np.sum(H[..., None] * w_test * divergence)
        rhs = -np.sum(H[..., None, None] * theta_test * F)
        scale = np.sum(H[..., None] * np.abs(w_test * divergence))
        assert lhs == pytest.approx(rhs, abs=1e-11 * scale)
        assert scale > 1e-6


class TestWallPenaltyDefault:
    """Test the mesh default of the wall interior-penalty coefficient."""

    @pytest.fixture
    def slab(self):
        return build_box_mesh(2, 2, 4, lengths=(1.0, 1.0, 2.0), p=2)

    def test_stable_walls_take_inverse_normal_height(self, slab, viscous_gas):
        walls = {name: WallSpec(inviscid_mode=InviscidMode.STABLE) for name in BOX_WALLS}
        operator = SpatialOperator(slab, viscous_gas, walls, mode=InviscidMode.STABLE)
        for grp in operator.boundary_groups:
            np.testing.assert_allclose(grp.beta, 2.0, rtol=1e-12)

    def test_conservative_and_explicit_walls_keep_their_beta(self, slab, viscous_gas):
        walls = {name: WallSpec() for name in BOX_WALLS}
        walls["z_max"] = WallSpec(beta=3.0, inviscid_mode=InviscidMode.STABLE)
        operator = SpatialOperator(slab, viscous_gas, walls)
        assert all(grp.beta is None for grp in operator.boundary_groups)

    def test_default_matches_explicit_coefficient(self, slab, viscous_gas):
        q = roughen(random_smooth_state(slab, viscous_gas, (1.0, 1.0, 2.0), seed=12), seed=13)
        default = {name: WallSpec(inviscid_mode=InviscidMode.STABLE) for name in BOX_WALLS}
        explicit = {
            name: WallSpec(beta=2.0, inviscid_mode=InviscidMode.STABLE) for name in BOX_WALLS
        }
        state = SolverState(q=q)
        rhs = SpatialOperator(slab, viscous_gas, default, mode=InviscidMode.STABLE).evaluate(state)
        expected = SpatialOperator(slab, viscous_gas, explicit, mode=InviscidMode.STABLE)(q, 0.0)
        np.testing.assert_allclose(rhs, expected, rtol=1e-12, atol=1e-12)
        assert state.surface.wall_dissipation < 0.0


class TestWallForce:
    """Test the integrated traction of the fluid on the walls."""

    def test_uniform_pressure_in_closed_box_balances(self, cavity, viscous_gas):
        state = SolverState(q=uniform_state(cavity, viscous_gas, temperature=2.0))
        walls = {name: WallSpec() for name in BOX_WALLS}
        SpatialOperator(cavity, viscous_gas, walls).evaluate(state)
        np.testing.assert_allclose(state.wall_force, 0.0, atol=1e-12)

    def test_shear_flow_over_one_wall(self):
        gas = GasParameters(mu=1e-2)
        mesh = build_box_mesh(2, 2, 2, p=2, periodic=(True, False, True))
        shear = 0.1
        v = np.zeros(mesh.coordinates.shape[:-1] + (5,))
        v[..., 0] = 1.0
        v[..., 1] = shear * mesh.coordinates[..., 1]
        v[..., 4] = 1.0
        walls = {
            "y_min": WallSpec(),
            "y_max": FarFieldSpec(state=[1.0, shear, 0.0, 0.0, 1.0]),
        }
        state = SolverState(q=prim_to_cons(v, gas))
        SpatialOperator(mesh, gas, walls).evaluate(state)
        # p n - tau n on y_min with n = -e_y, unit face area
        np.testing.assert_allclose(state.wall_force, [gas.mu * shear, -1.0, 0.0], atol=1e-12)

    def test_force_reaches_the_record(self, cavity, viscous_gas):
        state = SolverState(q=uniform_state(cavity, viscous_gas))
        state.wall_force = np.array([0.5, -0.25, 2.0])
        state.w = entropy_variables(cons_to_prim(state.q, viscous_gas), viscous_gas)
        record = entropy_rhs_contraction(state, np.zeros_like(state.q), cavity, viscous_gas)
        assert (record.force_x, record.force_y, record.force_z) == (0.5, -0.25, 2.0)


class TestLongHorizon:
    """Test free-stream preservation and conservation over many fixed steps."""

    def test_free_stream_for_a_hundred_steps(self):
        mesh = build_perturbed_box_mesh(2, p=3, amplitude=0.05)
        gas = GasParameters(mu=1e-3)
        operator = SpatialOperator(mesh, gas, {})
        q = uniform_state(mesh, gas, velocity=(0.3, 0.2, 0.1))
        config = IntegratorConfig(atol=1e-12, rtol=1e-12, h_init=1e-4, h_max=1e-4)
        result = integrate(operator, q, 0.0, 0.01, config)
        assert result.completed
        assert result.accepted >= 100
        np.testing.assert_allclose(result.y, q, atol=1e-11)

    def test_periodic_totals_over_fifty_steps(self, periodic_box, viscous_gas):
        q0 = random_smooth_state(periodic_box, viscous_gas, (1.0, 1.0, 1.0), seed=14)
        operator = SpatialOperator(periodic_box, viscous_gas, {}, mode=InviscidMode.CONSERVATIVE)
        weights = periodic_box.quadrature_weights()[..., None]
        totals = []

        def track(t, y, dydt):
            totals.append(np.sum(weights * y, axis=(0, 1, 2, 3)))

        config = IntegratorConfig(atol=1e-6, rtol=1e-6, h_init=1e-3, h_max=1e-3)
        result = integrate(operator, q0, 0.0, 0.05, config, on_step=track)
        assert result.accepted >= 50
        drift = np.max(np.abs(np.array(totals) - totals[0]), axis=0)
        scale = np.maximum(np.abs(totals[0]), 1.0)
        assert np.all(drift / scale <= 1e-12)
        assert np.max(np.abs(result.y - q0)) > 1e-6
