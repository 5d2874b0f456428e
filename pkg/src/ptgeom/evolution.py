"""Metric-compatible time evolution along a parameter path.

The evolution law is i∂_t|ψ⟩ = [H(λ_t) + iK(t)]|ψ⟩ with the gauge field
K(t) = -1/2 W⁻¹(λ_t) ∂_t W(λ_t).  K is exactly what is needed for the
λ_t-dependent inner product of any two evolving states to stay constant,
so norms and overlaps are conserved even though the generator is not
Hermitian in the naive sense.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .errors import IntegrationError, PreconditionError, StructuralError, ValidationError
from .hilbert import (
    TOL_NORM,
    HamiltonianFamily,
    MetricFamily,
    PhysicalState,
    physical_inner,
)
from .numerics import blas_threads, wrap_angle

TOL_UNITARITY = 1e-8
TOL_CYCLIC = 1e-6
TOL_PATH = 1e-12


@dataclass(frozen=True)
class ParameterPath:
    """Time-parametrized curve t ∈ [0, tau] ↦ λ_t in parameter space.

    ``velocity`` may supply dλ/dt analytically; otherwise central finite
    differences on ``map`` are used (the map is then evaluated slightly
    outside [0, tau] near the endpoints, which every smooth closed-form
    path supports).
    """

    dim_params: int
    map: Callable[[float], np.ndarray]
    tau: float
    closed: bool = False
    velocity: Optional[Callable[[float], np.ndarray]] = None

    def at(self, t):
        lam = np.atleast_1d(np.asarray(self.map(float(t)), dtype=float))
        if lam.shape != (self.dim_params,):
            raise StructuralError(f"path map returned shape {lam.shape}, expected ({self.dim_params},)")
        return lam

    def velocity_at(self, t, fd_step=None):
        if self.velocity is not None:
            return np.atleast_1d(np.asarray(self.velocity(float(t)), dtype=float))
        h = fd_step if fd_step is not None else 1e-4 * self.tau
        return (self.at(t + h) - self.at(t - h)) / (2.0 * h)

    def check_closed(self, tol_path=TOL_PATH):
        gap = float(np.linalg.norm(self.at(self.tau) - self.at(0.0)))
        if self.closed and gap > tol_path:
            raise ValidationError(f"path flagged closed but ‖λ(tau) − λ(0)‖ = {gap:.3e}")
        return gap


def constant_path(lam, tau):
    lam = np.atleast_1d(np.asarray(lam, dtype=float))
    return ParameterPath(
        dim_params=lam.shape[0],
        map=lambda t: lam,
        tau=tau,
        closed=True,
        velocity=lambda t: np.zeros_like(lam),
    )


def _is_lower_triangular(F):
    return np.max(np.abs(np.triu(F, 1))) <= 1e-14 * max(1.0, np.max(np.abs(F)))


def _metric_solve(Wm, rhs, F=None):
    """Compute W⁻¹ rhs, through the triangular factor W = F†F when given."""
    if F is not None:
        lower = _is_lower_triangular(F)
        y = scipy.linalg.solve_triangular(F.conj().T, rhs, lower=not lower, check_finite=False)
        return scipy.linalg.solve_triangular(F, y, lower=lower, check_finite=False)
    try:
        return np.linalg.solve(Wm, rhs)
    except np.linalg.LinAlgError:
        cond = np.linalg.cond(Wm)
        raise ValidationError(f"metric is numerically singular (cond estimate {cond:.3e})") from None


def metric_time_derivative(W, path, t, fd_step=None):
    """∂_t W(λ_t) by the chain rule over ∂_μW and the path velocity."""
    lam = path.at(t)
    lamdot = path.velocity_at(t, fd_step)
    Wdot = np.zeros((W.dim, W.dim), dtype=complex)
    for mu in range(path.dim_params):
        if lamdot[mu] != 0.0:
            Wdot += lamdot[mu] * W.derivative(lam, mu)
    return Wdot


def gauge_field(W, path, t, *, fd_step=None):
    """Gauge field K(t) = -1/2 W⁻¹(λ_t) ∂_tW(λ_t) along the path.

    The result is physical-Hermitian, W K = K† W, which is what makes the
    evolution unitary under the moving inner product.
    """
    if not 0.0 <= t <= path.tau + 1e-12 * path.tau:
        raise PreconditionError(f"t = {t} outside [0, {path.tau}]")
    lam = path.at(t)
    Wm = W(lam)
    Wdot = metric_time_derivative(W, path, t, fd_step)
    F = W.factor(lam) if W.factor is not None else None
    return -0.5 * _metric_solve(Wm, Wdot, F)


@dataclass
class EvolutionRecord:
    """States of one evolution, sampled on a time grid.

    ``states[k]`` lives in the physical Hilbert space at ``lambdas[k]``;
    ``norms[k]`` is its W(λ_k)-norm, whose drift from one measures the
    integrator's unitarity error.
    """

    times: np.ndarray
    lambdas: np.ndarray
    states: np.ndarray
    norms: np.ndarray
    metric: MetricFamily
    path: ParameterPath
    hamiltonian: Optional[HamiltonianFamily] = None
    tol_unitarity: float = TOL_UNITARITY
    _metrics: Optional[list] = field(default=None, repr=False)
    _densities: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def steps(self):
        return len(self.times) - 1

    @property
    def dim(self):
        return self.states.shape[1]

    @property
    def tau(self):
        return float(self.times[-1] - self.times[0])

    def norm_drift(self):
        return float(np.max(np.abs(self.norms - 1.0)))

    def metric_at(self, k):
        if self._metrics is None:
            self._metrics = [None] * len(self.times)
        if self._metrics[k] is None:
            self._metrics[k] = self.metric(self.lambdas[k])
        return self._metrics[k]

    def state(self, k):
        return PhysicalState(self.states[k], tuple(self.lambdas[k]))

    def densities(self):
        """Bi-densities ρ_k = |ψ_k⟩⟨ψ̃_k| along the grid (computed lazily)."""
        if self._densities is None:
            n = len(self.times)
            rho = np.empty((n, self.dim, self.dim), dtype=complex)
            for k in range(n):
                wpsi = self.metric_at(k) @ self.states[k]
                rho[k] = np.outer(self.states[k], wpsi.conj())
            self._densities = rho
        return self._densities

    def regauged(self, theta):
        """New record with states multiplied by e^{iθ(t_k)} (same rays)."""
        th = np.asarray([theta(t) for t in self.times]) if callable(theta) else np.asarray(theta)
        states = self.states * np.exp(1j * th)[:, None]
        return EvolutionRecord(
            times=self.times.copy(),
            lambdas=self.lambdas.copy(),
            states=states,
            norms=self.norms.copy(),
            metric=self.metric,
            path=self.path,
            hamiltonian=self.hamiltonian,
            tol_unitarity=self.tol_unitarity,
        )

    def retimed(self, new_times):
        """Attach the same state sequence to a new monotone time grid.

        This realizes a reparametrization s ↦ s'(s) of the same curve of
        rays: geometric quantities must not change, time integrals of
        Hamiltonian expectations will.
        """
        new_times = np.asarray(new_times, dtype=float)
        if new_times.shape != self.times.shape or np.any(np.diff(new_times) <= 0):
            raise StructuralError("new_times must be increasing and match the grid size")
        return EvolutionRecord(
            times=new_times,
            lambdas=self.lambdas.copy(),
            states=self.states.copy(),
            norms=self.norms.copy(),
            metric=self.metric,
            path=self.path,
            hamiltonian=self.hamiltonian,
            tol_unitarity=self.tol_unitarity,
        )

    def to_json_dict(self):
        return {
            "times": self.times.tolist(),
            "norms": self.norms.tolist(),
            "states": [
                [[float(c.real), float(c.imag)] for c in row] for row in self.states
            ],
        }


def _generator(H, W, path, t, fd_step):
    """Right-hand side matrix G(t) with ψ̇ = G ψ, G = -iH + K."""
    K = gauge_field(W, path, t, fd_step=fd_step)
    if H is None:
        return K
    return -1j * H(path.at(t)) + K


def evolve(H, W, path, psi0, steps, *, tol_unitarity=TOL_UNITARITY, refine_on_drift=True):
    """Integrate the evolution with a classical fixed-step RK4 scheme.

    Fixed step keeps runs deterministic and lets convergence be verified
    by exact step halving.  If the recorded W-norm drifts beyond 100x
    ``tol_unitarity`` the integration is retried once at twice the
    resolution before failing.

    Args:
        H: HamiltonianFamily or None (pure gauge evolution).
        W: MetricFamily.
        path: ParameterPath over [0, tau].
        psi0: PhysicalState, W(λ_0)-normalized.
        steps: number of RK4 steps (>= 2).

    Returns:
        EvolutionRecord with states at the steps+1 grid points.
    """
    if steps < 2:
        raise PreconditionError("need at least 2 steps")
    if not isinstance(psi0, PhysicalState):
        psi0 = PhysicalState(np.asarray(psi0, dtype=complex), path.at(0.0))
    path.check_closed()
    lam0 = path.at(0.0)
    W0 = W(lam0)
    nrm0 = physical_inner(W0, psi0.vec, psi0.vec, validate=False).real
    if abs(nrm0 - 1.0) > TOL_NORM:
        raise ValidationError(f"initial state not W-normalized: ⟨⟨ψ|ψ⟩⟩ = {nrm0:.10f}")

    fd_step = path.tau / (10.0 * steps)
    n = steps
    dt = path.tau / n
    dim = W.dim
    times = np.linspace(0.0, path.tau, n + 1)
    states = np.empty((n + 1, dim), dtype=complex)
    lambdas = np.empty((n + 1, path.dim_params))
    norms = np.empty(n + 1)

    psi = psi0.vec.astype(complex)
    states[0] = psi
    lambdas[0] = lam0
    norms[0] = np.sqrt(physical_inner(W0, psi, psi, validate=False).real)

    with blas_threads(1):
        G_next = _generator(H, W, path, 0.0, fd_step)
        for k in range(n):
            t = times[k]
            G1 = G_next
            Gm = _generator(H, W, path, t + 0.5 * dt, fd_step)
            G_next = _generator(H, W, path, t + dt, fd_step)
            k1 = G1 @ psi
            k2 = Gm @ (psi + 0.5 * dt * k1)
            k3 = Gm @ (psi + 0.5 * dt * k2)
            k4 = G_next @ (psi + dt * k3)
            psi = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            states[k + 1] = psi
            lam = path.at(times[k + 1])
            lambdas[k + 1] = lam
            Wk = W(lam)
            norms[k + 1] = np.sqrt(physical_inner(Wk, psi, psi, validate=False).real)

    record = EvolutionRecord(
        times=times,
        lambdas=lambdas,
        states=states,
        norms=norms,
        metric=W,
        path=path,
        hamiltonian=H,
        tol_unitarity=tol_unitarity,
    )
    drift = record.norm_drift()
    if drift > 100.0 * tol_unitarity:
        if refine_on_drift:
            refined = evolve(
                H, W, path, psi0, 2 * steps, tol_unitarity=tol_unitarity, refine_on_drift=False
            )
            if refined.norm_drift() <= 100.0 * tol_unitarity:
                return refined
            drift = refined.norm_drift()
        raise IntegrationError(
            f"W-norm drift {drift:.3e} exceeds 100x tolerance {tol_unitarity:.1e} even after "
            "step halving; increase steps or the Fock truncation"
        )
    return record


@dataclass(frozen=True)
class CyclicityReport:
    cyclic: bool
    alpha: float
    density_gap: float
    tol: float


def detect_cyclic(record, tol_cyclic=TOL_CYCLIC):
    """Decide cyclicity of a recorded evolution and extract the total phase.

    The evolution is cyclic when the closed parameter path brings the ray
    back: ‖ρ(tau) − ρ(0)‖_max ≤ tol.  The total phase is then
    α = arg⟨⟨ψ(0)|ψ(tau)⟩⟩ at λ_0, reduced to (−π, π].
    """
    if not record.path.closed:
        raise PreconditionError("cyclicity is only defined for closed parameter paths")
    rho = record.densities()
    gap = float(np.max(np.abs(rho[-1] - rho[0])))
    W0 = record.metric_at(0)
    overlap = physical_inner(W0, record.states[0], record.states[-1], validate=False)
    alpha = float(wrap_angle(np.angle(overlap)))
    return CyclicityReport(cyclic=bool(gap <= tol_cyclic), alpha=alpha, density_gap=gap, tol=tol_cyclic)


def pairwise_inner(record_a, record_b):
    """⟨⟨ψ_a(t_k)|ψ_b(t_k)⟩⟩ along a shared grid (unitarity diagnostics)."""
    if record_a.states.shape[0] != record_b.states.shape[0]:
        raise StructuralError("records have different grids")
    vals = np.empty(record_a.states.shape[0], dtype=complex)
    for k in range(len(vals)):
        vals[k] = record_a.states[k].conj() @ (record_a.metric_at(k) @ record_b.states[k])
    return vals
