"""Randomized numeric verification of the point-wise entropy identities."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np
from loguru import logger

from ..boundaries.data_models import HeatEntropyFlow, HeatFlowKind, WallSpec
from ..boundaries.wall import (
    inviscid_mirror_state,
    ip_dissipation_matrix,
    wall_entropy_production,
    wall_viscous_state,
)
from ..physics.data_models import GasParameters, InviscidMode
from ..physics.fluxes import ec_flux_prim, es_flux_prim
from ..physics.gas import entropy_pack, entropy_variables, inviscid_flux_prim, jacobians, prim_to_cons
from ..physics.viscous import assemble_c_matrices, primitive_gradients, viscous_fluxes
from .metrics import CheckResult, VerificationReport

MirrorFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass
class TrialData:
    """One chunk of random admissible inputs; leading axis = trial."""

    vL: np.ndarray
    vR: np.ndarray
    normal: np.ndarray
    theta: np.ndarray
    x: np.ndarray
    beta: np.ndarray
    t: float
    wall_velocity: np.ndarray
    angular_velocity: np.ndarray
    rotation_center: np.ndarray
    heat_amplitude: float

    @property
    def n(self) -> int:
        return self.vL.shape[0]


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.sum(a * b, axis=-1)


def _relative(error: np.ndarray, *scales: np.ndarray) -> np.ndarray:
    scale = 1.0 + sum(np.abs(s) for s in scales)
    return np.abs(error) / scale


class TheoremVerifier:
    """Replays the algebra behind the entropy estimates at random states.

    Every check returns one relative residual per trial. Trials run in chunks
    seeded from ``numpy.random.SeedSequence(seed)``, so the report does not
    depend on the thread count.

    Args:
        gas: Gas parameters; the default is viscous so the wall identities
            exercise the viscous penalties
        custom_tolerances: Per-check tolerance overrides
        chunk_size: Trials per chunk
        threads: Worker threads over chunks
        mirror: Inviscid wall ghost-state routine under test
    """

    def __init__(
        self,
        gas: Optional[GasParameters] = None,
        custom_tolerances: Optional[Dict[str, float]] = None,
        chunk_size: int = 1000,
        threads: int = 1,
        mirror: MirrorFunction = inviscid_mirror_state,
    ):
        if chunk_size < 1:
            raise ValueError(f"chunk_size must be >= 1, got {chunk_size}")
        self.gas = gas or GasParameters(mu=1e-2)
        self.custom_tolerances = custom_tolerances or {}
        self.chunk_size = chunk_size
        self.threads = max(1, int(threads))
        self.mirror = mirror
        self.checks: Dict[str, Callable[[TrialData], np.ndarray]] = {
            "godunov_potential": self.check_godunov_potential,
            "godunov_potential_flux": self.check_godunov_potential_flux,
            "shuffle": self.check_shuffle,
            "ec_consistency": self.check_ec_consistency,
            "es_dissipation_sign": self.check_es_dissipation_sign,
            "mirror_no_penetration": self.check_mirror_no_penetration,
            "wall_inviscid_entropy": self.check_wall_inviscid_entropy,
            "heat_flux_contraction": self.check_heat_flux_contraction,
            "wall_adiabatic": self.check_wall_adiabatic,
            "wall_heat_flow": self.check_wall_heat_flow,
            "wall_entropy_flux_no_slip": self.check_wall_entropy_flux_no_slip,
            "ip_closed_form": self.check_ip_closed_form,
            "ip_dissipation_sign": self.check_ip_dissipation_sign,
            "c_symmetry": self.check_c_symmetry,
            "c_psd": self.check_c_psd,
            "c_flux_oracle": self.check_c_flux_oracle,
            "jacobian_inverse": self.check_jacobian_inverse,
            "symmetrizer": self.check_symmetrizer,
        }

    def verify_all(self, seed: int = 0, trials: int = 10_000) -> VerificationReport:
        """Run every check on ``trials`` random inputs.

        Returns:
            VerificationReport with the max residual per check; failures are
            report entries, never exceptions
        """
        if trials < 1:
            raise ValueError(f"trials must be >= 1, got {trials}")
        sizes = [self.chunk_size] * (trials // self.chunk_size)
        if trials % self.chunk_size:
            sizes.append(trials % self.chunk_size)
        seeds = np.random.SeedSequence(seed).spawn(len(sizes))
        logger.info(f"Verifying {len(self.checks)} identities on {trials} trials (seed={seed})")

        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            chunk_results = list(pool.map(self._run_chunk, range(len(sizes)), seeds, sizes))
        results = [r for chunk in chunk_results for r in chunk]

        report = VerificationReport.from_results(results, seed, trials, self.custom_tolerances)
        if report.all_passed:
            logger.info(f"All identities hold, max residual {report.max_residual:.3e}")
        else:
            logger.warning(f"Failed identities: {', '.join(report.failures)}")
        return report

    def _run_chunk(self, chunk: int, seed_seq: np.random.SeedSequence, size: int) -> List[CheckResult]:
        data = self.sample(np.random.default_rng(seed_seq), size)
        results = []
        for name, check in self.checks.items():
            residual = np.asarray(check(data), dtype=float)
            results.append(
                CheckResult(
                    check=name,
                    chunk=chunk,
                    trials=size,
                    max_residual=float(np.max(residual)),
                    mean_residual=float(np.mean(residual)),
                )
            )
        return results

    def sample(self, rng: np.random.Generator, n: int) -> TrialData:
        """Random admissible states, unit normals, gradients and wall data."""

        def states() -> np.ndarray:
            v = np.empty((n, 5))
            v[:, 0] = rng.uniform(0.5, 2.0, n)
            v[:, 1:4] = rng.normal(0.0, 0.5, (n, 3))
            v[:, 4] = rng.uniform(0.5, 2.0, n)
            return v

        vL = states()
        vR = states()
        normal = rng.normal(size=(n, 3))
        normal /= np.linalg.norm(normal, axis=-1, keepdims=True)
        return TrialData(
            vL=vL,
            vR=vR,
            normal=normal,
            theta=rng.normal(size=(n, 3, 5)),
            x=rng.uniform(-1.0, 1.0, (n, 3)),
            beta=rng.uniform(0.1, 10.0, n),
            t=float(rng.uniform(0.0, 1.0)),
            wall_velocity=rng.normal(0.0, 0.3, 3),
            angular_velocity=rng.normal(0.0, 0.3, 3),
            rotation_center=rng.uniform(-0.5, 0.5, 3),
            heat_amplitude=float(rng.uniform(-1.0, 1.0)),
        )

    def _wall(self, data: TrialData, heat: float = 0.0, stable: bool = False) -> WallSpec:
        return WallSpec(
            velocity=data.wall_velocity,
            heat_flow=HeatEntropyFlow(HeatFlowKind.CONSTANT, amplitude=heat),
            beta=0.0,
            inviscid_mode=InviscidMode.STABLE if stable else InviscidMode.CONSERVATIVE,
            angular_velocity=data.angular_velocity,
            rotation_center=data.rotation_center,
        )

    def _psi_n(self, v: np.ndarray, n: np.ndarray) -> np.ndarray:
        return v[:, 0] * self.gas.R * _dot(v[:, 1:4], n)

    def _wall_scale(self, data: TrialData) -> np.ndarray:
        v, n = data.vL, data.normal
        w = entropy_variables(v, self.gas)
        F_n = np.einsum("...j,...ja->...a", n, viscous_fluxes(v, data.theta, self.gas))
        f_n = inviscid_flux_prim(v, n, self.gas)
        return np.sum(np.abs(w * f_n), axis=-1) + np.sum(np.abs(w * F_n), axis=-1)

    def check_godunov_potential(self, data: TrialData) -> np.ndarray:
        """Phi = W^T Q - S."""
        q = prim_to_cons(data.vL, self.gas)
        w, pack = entropy_pack(q, self.gas)
        wq = _dot(w, q)
        return _relative(pack.Phi - (wq - pack.S), wq, pack.S)

    def check_godunov_potential_flux(self, data: TrialData) -> np.ndarray:
        """Psi_m = W^T F^I_m - F_m for m = 1, 2, 3."""
        q = prim_to_cons(data.vL, self.gas)
        w, pack = entropy_pack(q, self.gas)
        residuals = []
        for m in range(3):
            wf = _dot(w, inviscid_flux_prim(data.vL, np.eye(3)[m], self.gas))
            residuals.append(_relative(pack.Psi[:, m] - (wf - pack.F[:, m]), wf, pack.F[:, m]))
        return np.max(residuals, axis=0)

    def check_shuffle(self, data: TrialData) -> np.ndarray:
        """(W_R - W_L)^T f^sc = Psi_n(R) - Psi_n(L)."""
        jump = entropy_variables(data.vR, self.gas) - entropy_variables(data.vL, self.gas)
        f_sc = ec_flux_prim(data.vL, data.vR, data.normal, self.gas)
        lhs = _dot(jump, f_sc)
        rhs = self._psi_n(data.vR, data.normal) - self._psi_n(data.vL, data.normal)
        return _relative(lhs - rhs, np.sum(np.abs(jump * f_sc), axis=-1))

    def check_ec_consistency(self, data: TrialData) -> np.ndarray:
        """f^sc(v, v) = f_n(v) and f^sc symmetric in its states."""
        f_n = inviscid_flux_prim(data.vL, data.normal, self.gas)
        same = ec_flux_prim(data.vL, data.vL, data.normal, self.gas)
        forward = ec_flux_prim(data.vL, data.vR, data.normal, self.gas)
        backward = ec_flux_prim(data.vR, data.vL, data.normal, self.gas)
        scale = 1.0 + np.max(np.abs(f_n), axis=-1) + np.max(np.abs(forward), axis=-1)
        err = np.maximum(np.max(np.abs(same - f_n), axis=-1), np.max(np.abs(forward - backward), axis=-1))
        return err / scale

    def check_es_dissipation_sign(self, data: TrialData) -> np.ndarray:
        """(W_R - W_L)^T (f^ssr - f^sc) <= 0."""
        jump = entropy_variables(data.vR, self.gas) - entropy_variables(data.vL, self.gas)
        f_sc = ec_flux_prim(data.vL, data.vR, data.normal, self.gas)
        f_ssr = es_flux_prim(data.vL, data.vR, data.normal, self.gas)
        production = _dot(jump, f_ssr - f_sc)
        return np.maximum(production, 0.0) / (1.0 + np.sum(np.abs(jump * f_sc), axis=-1))

    def check_mirror_no_penetration(self, data: TrialData) -> np.ndarray:
        """f^sc(v, mirror(v)) carries no mass and no energy through the wall."""
        mirrored = self.mirror(data.vL, data.normal)
        f = ec_flux_prim(data.vL, mirrored, data.normal, self.gas)
        scale = 1.0 + np.max(np.abs(inviscid_flux_prim(data.vL, data.normal, self.gas)), axis=-1)
        return np.maximum(np.abs(f[:, 0]), np.abs(f[:, 4])) / scale

    def check_wall_inviscid_entropy(self, data: TrialData) -> np.ndarray:
        """The inviscid wall penalty cancels the entropy flux: W^T f^sc = Psi_n."""
        v, n = data.vL, data.normal
        w = entropy_variables(v, self.gas)
        f = ec_flux_prim(v, self.mirror(v, n), n, self.gas)
        psi_n = self._psi_n(v, n)
        return _relative(psi_n - _dot(w, f), np.sum(np.abs(w * inviscid_flux_prim(v, n, self.gas)), axis=-1))

    def check_heat_flux_contraction(self, data: TrialData) -> np.ndarray:
        """W^T F^V_n = -kappa (dT/dn) / T for any velocity and gradient."""
        v, n = data.vL, data.normal
        w = entropy_variables(v, self.gas)
        F_n = np.einsum("...j,...ja->...a", n, viscous_fluxes(v, data.theta, self.gas))
        _, grad_T = primitive_gradients(v, data.theta)
        heat = self.gas.kappa * _dot(grad_T, n) / v[:, 4]
        return _relative(_dot(w, F_n) + heat, np.sum(np.abs(w * F_n), axis=-1))

    def check_wall_adiabatic(self, data: TrialData) -> np.ndarray:
        """Adiabatic wall with f^sc and no interior penalty is entropy neutral."""
        spec = self._wall(data)
        e = wall_entropy_production(
            data.vL, data.theta, spec, data.normal, data.t, self.gas, x=data.x
        )
        return _relative(e, self._wall_scale(data))

    def check_wall_heat_flow(self, data: TrialData) -> np.ndarray:
        """With prescribed heat entropy flow the wall contributes exactly g(t)."""
        spec = self._wall(data, heat=data.heat_amplitude)
        e = wall_entropy_production(
            data.vL, data.theta, spec, data.normal, data.t, self.gas, x=data.x
        )
        return _relative(e - data.heat_amplitude, self._wall_scale(data))

    def check_wall_entropy_flux_no_slip(self, data: TrialData) -> np.ndarray:
        """At the wall velocity the normal entropy flux F . n vanishes."""
        v = np.array(data.vL, copy=True)
        v[:, 1:4] = self._wall(data).wall_velocity(data.x, data.normal)
        _, pack = entropy_pack(prim_to_cons(v, self.gas), self.gas)
        flux_n = _dot(pack.F, data.normal)
        return _relative(flux_n, pack.S * (1.0 + np.linalg.norm(v[:, 1:4], axis=-1)))

    def check_ip_closed_form(self, data: TrialData) -> np.ndarray:
        """w^T L (w - w^bv) = -(2 beta mu / 3T)(4 U_n^2 + 3 |U_t - U_wall|^2)."""
        v, n = data.vL, data.normal
        spec = self._wall(data)
        v_bv = wall_viscous_state(v, spec, n, data.x)
        w = entropy_variables(v, self.gas)
        w_bv = entropy_variables(v_bv, self.gas)
        L = ip_dissipation_matrix(v, v_bv, data.beta, n, self.gas)
        value = np.einsum("...a,...ab,...b->...", w, L, w - w_bv)

        U = v[:, 1:4]
        U_n = _dot(U, n)
        slip = U - U_n[:, None] * n - spec.wall_velocity(data.x, n)
        closed = -(2.0 * data.beta * self.gas.mu / (3.0 * v[:, 4])) * (
            4.0 * U_n**2 + 3.0 * _dot(slip, slip)
        )
        return _relative(value - closed, closed)

    def check_ip_dissipation_sign(self, data: TrialData) -> np.ndarray:
        """Stable wall: production minus g(t) is non-positive."""
        base = self._wall(data, heat=data.heat_amplitude, stable=True)
        residuals = []
        # one beta per call keeps WallSpec scalar; sweep a few values
        for beta in (0.1, 1.0, 10.0):
            spec = WallSpec(
                velocity=base.velocity,
                heat_flow=base.heat_flow,
                beta=beta,
                inviscid_mode=InviscidMode.STABLE,
                angular_velocity=base.angular_velocity,
                rotation_center=base.rotation_center,
            )
            e = wall_entropy_production(
                data.vL, data.theta, spec, data.normal, data.t, self.gas, x=data.x
            )
            residuals.append(np.maximum(e - data.heat_amplitude, 0.0) / (1.0 + self._wall_scale(data)))
        return np.max(residuals, axis=0)

    def check_c_symmetry(self, data: TrialData) -> np.ndarray:
        """C_mj = C_jm^T."""
        C = assemble_c_matrices(data.vL, self.gas)
        asym = np.abs(C - np.swapaxes(np.swapaxes(C, 1, 2), -1, -2))
        return np.max(asym, axis=(1, 2, 3, 4)) / (1e-300 + np.max(np.abs(C), axis=(1, 2, 3, 4)))

    def check_c_psd(self, data: TrialData) -> np.ndarray:
        """The assembled 15 x 15 block matrix is positive semidefinite."""
        C = assemble_c_matrices(data.vL, self.gas)
        block = np.transpose(C, (0, 1, 3, 2, 4)).reshape(-1, 15, 15)
        eig = np.linalg.eigvalsh(0.5 * (block + np.swapaxes(block, -1, -2)))
        return np.maximum(-eig[:, 0], 0.0) / (1e-300 + eig[:, -1])

    def check_c_flux_oracle(self, data: TrialData) -> np.ndarray:
        """sum_j C_mj Theta_j equals the primitive-variable viscous flux."""
        C = assemble_c_matrices(data.vL, self.gas)
        from_c = np.einsum("...mjab,...jb->...ma", C, data.theta)
        oracle = viscous_fluxes(data.vL, data.theta, self.gas)
        scale = 1e-300 + np.max(np.abs(oracle), axis=(1, 2))
        return np.max(np.abs(from_c - oracle), axis=(1, 2)) / scale

    def check_jacobian_inverse(self, data: TrialData) -> np.ndarray:
        """dW/dV dV/dW = I."""
        dWdV, dVdW, _ = jacobians(data.vL, self.gas)
        product = np.einsum("...ij,...jk->...ik", dWdV, dVdW)
        scale = np.max(np.abs(dWdV), axis=(1, 2)) * np.max(np.abs(dVdW), axis=(1, 2))
        return np.max(np.abs(product - np.eye(5)), axis=(1, 2)) / scale

    def check_symmetrizer(self, data: TrialData) -> np.ndarray:
        """dQ/dW is symmetric positive definite."""
        _, _, dQdW = jacobians(data.vL, self.gas)
        scale = np.max(np.abs(dQdW), axis=(1, 2))
        asym = np.max(np.abs(dQdW - np.swapaxes(dQdW, -1, -2)), axis=(1, 2)) / scale
        eig = np.linalg.eigvalsh(0.5 * (dQdW + np.swapaxes(dQdW, -1, -2)))
        return np.maximum(asym, np.maximum(-eig[:, 0], 0.0) / scale)
