"""Differential geometry of a smooth normalized state section.

Given a gauge |φ(λ)⟩ over a coordinate chart, normalized under the
λ-dependent inner product, the chart carries

  connection   A_μ  = Im⟨⟨φ|∂_μφ⟩⟩
  curvature    Ω_μν = 1/2 Im(⟨∂_μφ̃|∂_νφ⟩ + ⟨∂_μφ|∂_νφ̃⟩)
  metric       g_μν = 1/2 Re(⟨∂_μφ̃|∂_νφ⟩ − ⟨∂_μφ̃|φ⟩⟨φ̃|∂_νφ⟩ + (φ̃↔φ))
  QGT          Q_μν = the same combination without taking real parts

with |φ̃⟩ = W|φ⟩.  Im Q = Ω and Re Q = g entrywise; Ω and g are the
stored component matrices with Ω_μν = 1/2(∂_μA_ν − ∂_νA_μ).  As 2-form
coefficients in the wedge basis (Ω = Ω_μν dλ^μ ∧ dλ^ν summed over all
index pairs) the entries appear doubled: loop/surface integrals below
use the full antisymmetric sum, so Stokes' theorem holds as computed.

The metric may be pseudo-Riemannian: ds² = g_μν dλ^μ dλ^ν can be
negative, which classifies displacements as spacelike / lightlike /
timelike exactly as in special relativity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import NumericalConsistencyError, PreconditionError, StructuralError, ValidationError
from .hilbert import TOL_NORM, MetricFamily, identity_metric
from .numerics import trapezoid, wrap_angle

TOL_TENSOR = 1e-6
TOL_FID = 1e-8
TOL_LIGHT = 1e-6
TOL_PT = 1e-8

# 5-point central stencil = one Richardson level on top of plain central
# differences: truncation O(h^4).
_STENCIL_OFFSETS = np.array([-2.0, -1.0, 1.0, 2.0])
_STENCIL_WEIGHTS = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0


@dataclass(frozen=True)
class StateSection:
    """Smooth W-normalized gauge λ ↦ |φ(λ)⟩ over a coordinate chart.

    The first ``metric_coords`` coordinates are the system parameters the
    metric depends on; the rest parametrize the ray space.  ``tilde_eval``
    may supply W(λ)|φ(λ)⟩ in closed form, otherwise it is computed from
    the metric family.

    Args:
        dim_coords: number of real chart coordinates.
        eval: callback λ -> complex state vector.
        metric: MetricFamily evaluated on λ[:metric_coords]; None means W = I.
        metric_coords: how many leading coordinates feed the metric.
        fd_step: finite-difference step per coordinate (scalar or array).
        tilde_eval: optional callback λ -> W(λ)|φ(λ)⟩.
        grad/grad_tilde: optional analytic derivatives (λ, μ) -> vector,
            used instead of finite differences when supplied.
    """

    dim_coords: int
    eval: Callable[[np.ndarray], np.ndarray]
    metric: Optional[MetricFamily] = None
    metric_coords: int = 0
    fd_step: float | np.ndarray = 1e-4
    tilde_eval: Optional[Callable[[np.ndarray], np.ndarray]] = None
    grad: Optional[Callable[[np.ndarray, int], np.ndarray]] = None
    grad_tilde: Optional[Callable[[np.ndarray, int], np.ndarray]] = None
    name: str = "section"

    def value(self, lam):
        return np.asarray(self.eval(np.asarray(lam, dtype=float)), dtype=complex)

    def metric_matrix(self, lam):
        if self.metric is None:
            return None
        return self.metric(np.asarray(lam, dtype=float)[: self.metric_coords])

    def tilde_value(self, lam):
        if self.tilde_eval is not None:
            return np.asarray(self.tilde_eval(np.asarray(lam, dtype=float)), dtype=complex)
        W = self.metric_matrix(lam)
        phi = self.value(lam)
        return phi if W is None else W @ phi

    def norm_value(self, lam):
        return float((self.tilde_value(lam).conj() @ self.value(lam)).real)

    def steps(self):
        h = np.asarray(self.fd_step, dtype=float)
        return np.full(self.dim_coords, float(h)) if h.ndim == 0 else h

    def regauged(self, theta):
        """Section multiplied by e^{iθ(λ)}; tensors must be unchanged."""

        def ev(lam, _inner=self.eval):
            return np.exp(1j * theta(lam)) * np.asarray(_inner(lam), dtype=complex)

        tilde_ev = None
        if self.tilde_eval is not None:

            def tilde_ev(lam, _inner=self.tilde_eval):
                return np.exp(1j * theta(lam)) * np.asarray(_inner(lam), dtype=complex)

        return StateSection(
            dim_coords=self.dim_coords,
            eval=ev,
            metric=self.metric,
            metric_coords=self.metric_coords,
            fd_step=self.fd_step,
            tilde_eval=tilde_ev,
            name=self.name + "+gauge",
        )


@dataclass
class SectionJet:
    """φ, φ̃ and their first derivatives at one chart point (shared by all
    tensor evaluations so Im Q = Ω and Re Q = g hold to rounding)."""

    point: np.ndarray
    phi: np.ndarray
    tilde: np.ndarray
    dphi: np.ndarray      # (dim_coords, dim)
    dtilde: np.ndarray    # (dim_coords, dim)
    norm: float


def section_jet(section, point, *, tol_norm=TOL_NORM):
    """Evaluate the section and its derivatives at ``point``.

    Derivatives use a 4th-order central stencil (central differences with
    one Richardson level) per coordinate, or the section's analytic
    derivatives when present.  Normalization ⟨φ̃|φ⟩ = 1 is validated at
    every stencil point.
    """
    point = np.asarray(point, dtype=float)
    if point.shape != (section.dim_coords,):
        raise StructuralError(f"point shape {point.shape} != ({section.dim_coords},)")
    phi = section.value(point)
    tilde = section.tilde_value(point)
    norm = float((tilde.conj() @ phi).real)
    if abs(norm - 1.0) > tol_norm:
        raise ValidationError(f"section not W-normalized at {point}: ⟨⟨φ|φ⟩⟩ = {norm:.10f}")
    dim = phi.shape[0]
    m = section.dim_coords
    dphi = np.empty((m, dim), dtype=complex)
    dtilde = np.empty((m, dim), dtype=complex)
    steps = section.steps()
    for mu in range(m):
        if section.grad is not None and section.grad_tilde is not None:
            dphi[mu] = np.asarray(section.grad(point, mu), dtype=complex)
            dtilde[mu] = np.asarray(section.grad_tilde(point, mu), dtype=complex)
            continue
        h = steps[mu]
        acc_p = np.zeros(dim, dtype=complex)
        acc_t = np.zeros(dim, dtype=complex)
        for off, wgt in zip(_STENCIL_OFFSETS, _STENCIL_WEIGHTS):
            lam = point.copy()
            lam[mu] += off * h
            p = section.value(lam)
            t = section.tilde_value(lam)
            nrm = float((t.conj() @ p).real)
            if abs(nrm - 1.0) > 10.0 * max(tol_norm, 1e-6):
                raise ValidationError(
                    f"section normalization violated at stencil point {lam}: {nrm:.8f}"
                )
            acc_p += wgt * p
            acc_t += wgt * t
        dphi[mu] = acc_p / h
        dtilde[mu] = acc_t / h
    return SectionJet(point=point, phi=phi, tilde=tilde, dphi=dphi, dtilde=dtilde, norm=norm)


@dataclass(frozen=True)
class GeometricTensors:
    """Connection, curvature, metric and QGT sampled at one chart point."""

    point: np.ndarray
    A: np.ndarray
    Omega: np.ndarray
    g: np.ndarray
    Q: np.ndarray

    def residuals(self):
        return {
            "q_hermiticity": float(np.max(np.abs(self.Q - self.Q.conj().T))),
            "im_q_vs_omega": float(np.max(np.abs(self.Q.imag - self.Omega))),
            "re_q_vs_g": float(np.max(np.abs(self.Q.real - self.g))),
        }


def _tensor_blocks(jet):
    t1 = jet.dtilde.conj() @ jet.dphi.T            # ⟨∂_μφ̃|∂_νφ⟩
    t2 = jet.dphi.conj() @ jet.dtilde.T            # ⟨∂_μφ|∂_νφ̃⟩
    s = jet.dtilde.conj() @ jet.phi                # ⟨∂_μφ̃|φ⟩
    r = jet.tilde.conj() @ jet.dphi.T              # ⟨φ̃|∂_νφ⟩
    p = jet.dphi.conj() @ jet.tilde                # ⟨∂_μφ|φ̃⟩
    q = jet.phi.conj() @ jet.dtilde.T              # ⟨φ|∂_νφ̃⟩
    return t1, t2, s, r, p, q


def connection(section, point, *, jet=None):
    """Connection components A_μ = Im⟨⟨φ|∂_μφ⟩⟩ at a chart point.

    Under a regauge φ -> e^{iϑ(λ)}φ the result shifts by the gradient of
    ϑ, as a proper gauge potential must.
    """
    jet = jet or section_jet(section, point)
    return np.imag(jet.tilde.conj() @ jet.dphi.T)


def curvature(section, point, *, jet=None):
    """Curvature component matrix Ω_μν (real antisymmetric, gauge-invariant).

    Equals the antisymmetrized derivative 1/2(∂_μA_ν − ∂_νA_μ) of the
    connection; see ``curvature_from_connection`` for that cross-check.
    """
    jet = jet or section_jet(section, point)
    t1, t2, _, _, _, _ = _tensor_blocks(jet)
    m = 0.5 * np.imag(t1 + t2)
    return 0.5 * (m - m.T)


def metric_tensor(section, point, *, jet=None):
    """Parameter-space metric g_μν (real symmetric, possibly indefinite)."""
    jet = jet or section_jet(section, point)
    t1, t2, s, r, p, q = _tensor_blocks(jet)
    m = 0.5 * np.real(t1 - np.outer(s, r) + t2 - np.outer(p, q))
    return 0.5 * (m + m.T)


def qgt(section, point, *, jet=None):
    """Quantum geometric tensor Q_μν at a chart point.

    Complex Hermitian and gauge-invariant; Im Q is the curvature and Re Q
    the metric, so one tensor carries both.
    """
    jet = jet or section_jet(section, point)
    t1, t2, s, r, p, q = _tensor_blocks(jet)
    return 0.5 * (t1 - np.outer(s, r) + t2 - np.outer(p, q))


def geometric_tensors(section, point, *, tol_tensor=TOL_TENSOR):
    """All tensors at a point from one shared jet, with invariant checks."""
    jet = section_jet(section, point)
    tensors = GeometricTensors(
        point=np.asarray(point, dtype=float),
        A=connection(section, point, jet=jet),
        Omega=curvature(section, point, jet=jet),
        g=metric_tensor(section, point, jet=jet),
        Q=qgt(section, point, jet=jet),
    )
    res = tensors.residuals()
    if max(res.values()) > tol_tensor:
        raise NumericalConsistencyError(f"tensor invariants violated: {res}")
    return tensors


def curvature_from_connection(section, point, *, step=None):
    """Ω_μν = 1/2(∂_μA_ν − ∂_νA_μ) by finite differences of the connection."""
    point = np.asarray(point, dtype=float)
    m = section.dim_coords
    steps = section.steps() if step is None else np.full(m, float(step))
    dA = np.empty((m, m))
    for mu in range(m):
        h = steps[mu]
        acc = np.zeros(m)
        for off, wgt in zip(_STENCIL_OFFSETS, _STENCIL_WEIGHTS):
            lam = point.copy()
            lam[mu] += off * h
            acc += wgt * connection(section, lam)
        dA[mu] = acc / h
    return 0.5 * (dA - dA.T)


def line_element(section, point, dlam, *, tensors=None):
    """ds² = g_μν dλ^μ dλ^ν for a displacement (may be negative)."""
    g = (tensors.g if tensors is not None else metric_tensor(section, point))
    dlam = np.asarray(dlam, dtype=float)
    return float(dlam @ g @ dlam)


def classify_displacement(ds2, dlam, tol_light=TOL_LIGHT):
    scale = float(np.dot(dlam, dlam))
    if abs(ds2) <= tol_light * scale:
        return "lightlike"
    return "spacelike" if ds2 > 0 else "timelike"


def classify_evolution(section, curve, samples, *, tol_light=TOL_LIGHT, curve_period=1.0):
    """Classify the tangent of a chart curve at each sample as
    spacelike / lightlike / timelike by the sign of ds².

    Args:
        section: StateSection providing the metric tensor field.
        curve: callback s ∈ [0, curve_period] -> chart point.
        samples: number of sample points.

    Returns:
        list of (s, tag, ds2) triples.
    """
    out = []
    ds = curve_period / samples
    h = 1e-6 * curve_period
    for j in range(samples):
        s = (j + 0.5) * ds
        lam = np.asarray(curve(s), dtype=float)
        vel = (np.asarray(curve(s + h)) - np.asarray(curve(s - h))) / (2.0 * h)
        g = metric_tensor(section, lam)
        ds2 = float(vel @ g @ vel)
        out.append((s, classify_displacement(ds2, vel, tol_light), ds2))
    return out


def _psd_sqrt(M, cut=0.0):
    """Hermitian square root by eigendecomposition.

    ``cut`` zeroes eigenvalues below cut * max eigenvalue first; nested
    square roots of rank-deficient operators otherwise amplify rounding
    noise as noise^(1/2) per level."""
    vals, vecs = np.linalg.eigh(0.5 * (M + M.conj().T))
    vals = np.clip(vals, 0.0, None)
    if cut > 0.0 and vals[-1] > 0.0:
        vals[vals < cut * vals[-1]] = 0.0
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


@dataclass(frozen=True)
class FidelityResult:
    value: float            # pure-state overlap route
    operator_value: float   # tr|ρ^{1/2} σ ρ^{1/2}|^{1/2} route
    discrepancy: float


def fidelity(rho, sigma, W, *, tol_fid=TOL_FID):
    """Fidelity between two nearby bi-densities, by two redundant routes.

    Route (i) evaluates tr|ρ^{1/2} σ ρ^{1/2}|^{1/2} where the modulus is
    taken with the λ-inner-product adjoint X' = W⁻¹X†W; this is done in
    the W^{1/2} picture (similarity transform by the Hermitian square
    root of W at ρ's base point) where the adjoint becomes the ordinary
    one.  Route (ii) is the pure-state overlap |⟨φ̃'|φ⟩⟨φ̃|φ'⟩|^{1/2}.

    With an indefinite (pseudo-Riemannian) parameter-space metric the
    fidelity of nearby rays can exceed one along timelike displacements,
    since 2(1 − F) tracks ds²; no [0, 1] clamp is applied.

    Raises:
        NumericalConsistencyError: routes differ by more than 100x tol_fid.
    """
    rho_m = rho.mat if hasattr(rho, "mat") else np.asarray(rho, dtype=complex)
    sig_m = sigma.mat if hasattr(sigma, "mat") else np.asarray(sigma, dtype=complex)
    if rho_m.shape != sig_m.shape:
        raise StructuralError("bi-densities have different dimensions")
    lam = getattr(rho, "lam", None)
    Wm = W(np.asarray(lam)) if isinstance(W, MetricFamily) else np.asarray(W, dtype=complex)

    S = _psd_sqrt(Wm)
    S_inv = np.linalg.inv(S)
    rho_std = S @ rho_m @ S_inv
    sig_std = S @ sig_m @ S_inv
    root = _psd_sqrt(rho_std, cut=1e-12)
    M = root @ sig_std @ root
    absM = _psd_sqrt(M.conj().T @ M, cut=1e-12)
    op_value = float(np.trace(_psd_sqrt(absM, cut=1e-12)).real)

    # overlap route: tr[ρ σ] = ⟨φ̃|φ'⟩⟨φ̃'|φ⟩ for rank-one bi-densities
    overlap = complex(np.trace(rho_m @ sig_m))
    value = float(np.sqrt(abs(overlap)))

    disc = abs(op_value - value)
    if disc > 100.0 * tol_fid:
        raise NumericalConsistencyError(
            f"fidelity routes disagree: overlap {value:.12f} vs operator {op_value:.12f}"
        )
    return FidelityResult(value=value, operator_value=op_value, discrepancy=disc)


def parallel_transport_residual(states, times, metrics):
    """max_k |Im⟨⟨φ_k|Δφ_k/Δt_k⟩⟩| over a sequenced gauge.

    The inner product of link k uses the metric at the midpoint parameter
    (``metrics[k]`` evaluated between samples k and k+1), matching the
    construction of the transported gauge, so a parallel gauge scores
    zero by construction.  For a raw evolved state under H ≠ 0 the
    residual sits at the |⟨⟨ψ|Hψ⟩⟩| scale.

    Args:
        states: (N+1, dim) gauge samples.
        times: (N+1,) timestamps.
        metrics: callable k -> metric matrix for link k, or a single
            matrix used for all links.
    """
    states = np.asarray(states, dtype=complex)
    times = np.asarray(times, dtype=float)
    worst = 0.0
    get = metrics if callable(metrics) else (lambda k: metrics)
    for k in range(len(times) - 1):
        dt = times[k + 1] - times[k]
        link = states[k].conj() @ (get(k) @ states[k + 1])
        worst = max(worst, abs(link.imag) / dt)
    return float(worst)


def record_transport_residual(record, states=None):
    """Transport residual of an evolution record (or of a gauge attached
    to its grid), with link metrics at midpoint parameters."""
    if states is None:
        states = record.states

    def metric_of_link(k):
        return record.metric(0.5 * (record.lambdas[k] + record.lambdas[k + 1]))

    return parallel_transport_residual(states, record.times, metric_of_link)


def loop_integral_connection(section, loop, samples, *, loop_period=1.0):
    """Geometric phase −∮ A_μ dλ^μ around a closed chart loop, mod 2π.

    The fiber contribution −∮dθ vanishes automatically because the
    section's phase is single-valued over the chart.  Closed-loop
    trapezoid quadrature is spectrally accurate for smooth loops.
    """
    s = np.linspace(0.0, loop_period, samples + 1)
    start = np.asarray(loop(0.0), dtype=float)
    end = np.asarray(loop(loop_period), dtype=float)
    # closure is physical (same ray), so angle-valued coordinates may wrap
    rho0 = np.outer(section.value(start), section.tilde_value(start).conj())
    rho1 = np.outer(section.value(end), section.tilde_value(end).conj())
    if np.max(np.abs(rho1 - rho0)) > 1e-8:
        raise PreconditionError("loop is not closed (ray at the endpoint differs)")
    h = 1e-6 * loop_period
    integrand = np.empty(samples + 1)
    for j, sj in enumerate(s):
        lam = np.asarray(loop(sj), dtype=float)
        vel = (np.asarray(loop(sj + h)) - np.asarray(loop(sj - h))) / (2.0 * h)
        integrand[j] = float(connection(section, lam) @ vel)
    return float(wrap_angle(-trapezoid(integrand, s)))


def surface_integral_curvature(section, patch, grid, *, mod=True):
    """Geometric phase −∫_S Ω over a parametrized 2-surface, mod 2π.

    ``patch`` maps (u, v) ∈ [0,1]² to chart points; the curvature 2-form
    Ω = Ω_μν dλ^μ ∧ dλ^ν (full double sum) is pulled back with the
    antisymmetric Jacobian combination, then integrated by tensor-product
    trapezoid on a (grid+1)² lattice.  Must match the loop integral of
    the connection over the boundary within quadrature error (Stokes).
    """
    nu = nv = grid
    u = np.linspace(0.0, 1.0, nu + 1)
    v = np.linspace(0.0, 1.0, nv + 1)
    hu = 1e-6
    hv = 1e-6
    vals = np.empty((nu + 1, nv + 1))
    for i, ui in enumerate(u):
        for j, vj in enumerate(v):
            lam = np.asarray(patch(ui, vj), dtype=float)
            du = (np.asarray(patch(ui + hu, vj)) - np.asarray(patch(ui - hu, vj))) / (2.0 * hu)
            dv = (np.asarray(patch(ui, vj + hv)) - np.asarray(patch(ui, vj - hv))) / (2.0 * hv)
            Om = curvature(section, lam)
            vals[i, j] = float(du @ Om @ dv - dv @ Om @ du)
    inner = np.trapezoid(vals, v, axis=1)
    total = float(np.trapezoid(inner, u))
    return float(wrap_angle(-total)) if mod else -total


def polyline_connection_integral(section, vertices, samples_per_edge=16):
    """−∮A along a closed polygonal chart path (edge-wise quadrature).

    Each straight edge is integrated separately (Simpson), so the corner
    kinks cost no accuracy.  The vertex list must close on itself.
    """
    from scipy.integrate import simpson

    verts = [np.asarray(v, dtype=float) for v in vertices]
    if np.linalg.norm(verts[-1] - verts[0]) > 1e-12:
        raise PreconditionError("polyline is not closed")
    total = 0.0
    s = np.linspace(0.0, 1.0, samples_per_edge + 1)
    for a, b in zip(verts[:-1], verts[1:]):
        direction = b - a
        vals = np.array([float(connection(section, a + sj * direction) @ direction) for sj in s])
        total += float(simpson(vals, x=s))
    return float(wrap_angle(-total))


def small_loop_phase(section, point, mu, nu, h, samples_per_edge=8):
    """−∮A around the square of side h in the (μ, ν) plane at ``point``.

    For small h this reproduces −(wedge coefficient) h² = −2 Ω_μν h²
    with an O(h³) remainder, the plaquette limit of the curvature.
    """
    point = np.asarray(point, dtype=float)
    e_mu = np.zeros_like(point)
    e_nu = np.zeros_like(point)
    e_mu[mu] = h
    e_nu[nu] = h
    vertices = [point, point + e_mu, point + e_mu + e_nu, point + e_nu, point]
    return polyline_connection_integral(section, vertices, samples_per_edge)
