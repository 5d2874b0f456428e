"""Built-in model families exercising every code path.

The flagship is a driven harmonic oscillator on a truncated Fock space,
in two equivalent descriptions of the same physics:

* PT picture: zero Hamiltonian and a drive-dependent metric
  W(z) = e^{2z̄ a} e^{2z a†}, so the whole evolution is generated by the
  gauge field K(t) = −[ż a† + ż̄ a + 2 z ż̄].
* Hermitian picture: W = I and the drive Hamiltonian
  h(t) = i[ż a† − ż̄ a], reached by the map |ψ⟩ → e^{2z a†}|ψ⟩.

A two-level pseudo-Hermitian system and a W = I spin-1/2 loop cover the
desk-scale and standard-QM reductions.

Truncation conventions: exponentials of the raising operator are built
entrywise (the series is nilpotent, hence exact after N terms), and
products with a lower-triangular left factor equal the projection of the
exact infinite-dimensional product, so no scaling-and-squaring is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import lgamma

import numpy as np
from scipy.integrate import quad
from scipy.special import gammainc

from .errors import StructuralError, TruncationError, ValidationError
from .evolution import ParameterPath, constant_path
from .geometry import StateSection
from .hilbert import HamiltonianFamily, MetricFamily, identity_metric

TOL_TRUNC = 1e-12


# ---------------------------------------------------------------------------
# truncated Fock space primitives
# ---------------------------------------------------------------------------

def build_fock_ops(n):
    """Truncated ladder operators (a, a†, a†a) with a|k⟩ = √k |k−1⟩.

    [a, a†] = I holds except for the absorbing corner entry 1 − n at the
    top of the number ladder, so results are only trusted on states with
    negligible amplitude there.
    """
    if n < 2:
        raise StructuralError("Fock truncation must be at least 2")
    a = np.zeros((n, n), dtype=complex)
    ks = np.arange(1, n)
    a[ks - 1, ks] = np.sqrt(ks)
    adag = a.conj().T
    return a, adag, np.diag(np.arange(n, dtype=float))


@lru_cache(maxsize=8)
def _raising_coeffs(n):
    """C[m, k] = √(m!/k!) / (m−k)! for m ≥ k (else 0), plus the m−k grid."""
    m = np.arange(n)
    diff = m[:, None] - m[None, :]
    mask = diff >= 0
    lg = np.array([lgamma(j + 1.0) for j in range(n)])
    coeff = np.zeros((n, n))
    rows, cols = np.nonzero(mask)
    coeff[rows, cols] = np.exp(0.5 * (lg[rows] - lg[cols]) - np.array(
        [lgamma(d + 1.0) for d in (rows - cols)]
    ))
    return coeff, diff, mask


def raising_exp(beta, n):
    """e^{β a†} on the truncation: entries β^{m−k} √(m!/k!)/(m−k)!.

    Lower triangular with unit diagonal; exact (the series terminates)."""
    coeff, diff, mask = _raising_coeffs(n)
    out = np.zeros((n, n), dtype=complex)
    rows, cols = np.nonzero(mask)
    out[rows, cols] = np.asarray(beta, dtype=complex) ** diff[rows, cols] * coeff[rows, cols]
    return out


def raising_exp_dbeta(beta, n):
    """d/dβ of ``raising_exp``; equals a† e^{β a†} exactly on the truncation."""
    coeff, diff, mask = _raising_coeffs(n)
    out = np.zeros((n, n), dtype=complex)
    rows, cols = np.nonzero(mask & (diff >= 1))
    d = diff[rows, cols]
    out[rows, cols] = d * np.asarray(beta, dtype=complex) ** (d - 1) * coeff[rows, cols]
    return out


def coherent_tail_mass(z, n):
    """Probability mass of the coherent state |z⟩ above Fock level n−1."""
    mu = float(abs(z)) ** 2
    return float(gammainc(n, mu)) if mu > 0 else 0.0


def required_truncation(amplitude, tol=TOL_TRUNC, start=8):
    """Smallest truncation with coherent tail mass ≤ tol at |amplitude|."""
    n = start
    while coherent_tail_mass(amplitude, n) > tol:
        n *= 2
        if n > 1 << 16:
            raise TruncationError("amplitude too large for a sane truncation")
    while n > start and coherent_tail_mass(amplitude, n - 1) <= tol:
        n -= 1
    return n


def coherent_state(z, n, tol_trunc=TOL_TRUNC):
    """Normalized coherent state |z⟩ as a truncated Fock vector.

    Raises:
        TruncationError: tail mass beyond the truncation exceeds
            ``tol_trunc`` (the error names a sufficient dimension).
    """
    tail = coherent_tail_mass(z, n)
    if tail > tol_trunc:
        raise TruncationError(
            f"coherent tail mass {tail:.3e} at |z| = {abs(z):.3f} exceeds {tol_trunc:.1e} "
            f"for n = {n}",
            suggested_dim=required_truncation(abs(z), tol_trunc),
        )
    z = complex(z)
    if z == 0:
        vec = np.zeros(n, dtype=complex)
        vec[0] = 1.0
        return vec
    ks = np.arange(n)
    lg = np.array([lgamma(k + 1.0) for k in range(n)])
    vec = np.exp(ks * np.log(z) - 0.5 * lg - 0.5 * abs(z) ** 2)
    return vec.astype(complex)


def displacement_matrix(z, n):
    """Displacement D(z) = e^{z a† − z̄ a}, as the exact projection of the
    infinite-dimensional operator (via D = e^{−|z|²/2} e^{za†} e^{−z̄a})."""
    z = complex(z)
    return np.exp(-0.5 * abs(z) ** 2) * (raising_exp(z, n) @ raising_exp(-z, n).conj().T)


# ---------------------------------------------------------------------------
# oscillator metric W(z) = e^{2 z̄ a} e^{2 z a†} and its derivatives
# ---------------------------------------------------------------------------

def oscillator_metric_family(n):
    """Metric family over λ = (Re z, Im z) with W = E†E, E = e^{2 z a†}.

    The gradient differentiates the truncated family itself (not the
    formal infinite-dimensional operator), so W⁻¹-products built from it
    are exactly pseudo-Hermitian on the truncation.  The triangular
    factor E is exposed for numerically graded solves.
    """

    def as_z(lam):
        return complex(lam[0], lam[1])

    def eval_w(lam):
        E = raising_exp(2.0 * as_z(lam), n)
        return E.conj().T @ E

    def grad_w(lam, mu):
        z = as_z(lam)
        E = raising_exp(2.0 * z, n)
        dE = raising_exp_dbeta(2.0 * z, n) * (2.0 if mu == 0 else 2.0j)
        return dE.conj().T @ E + E.conj().T @ dE

    def factor(lam):
        return raising_exp(2.0 * as_z(lam), n)

    return MetricFamily(dim=n, eval=eval_w, grad=grad_w, factor=factor, name="oscillator-metric")


# ---------------------------------------------------------------------------
# driven oscillator model (both pictures)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OscillatorModel:
    """Driven oscillator with drive strength Ω_D, detuning δ and phase φ_L.

    The drive path is z(t) = i (Ω_D/δ)(e^{−iδt} − 1) e^{iφ_L}, a circle of
    radius Ω_D/δ traversed once over τ = 2π/δ.  The accumulated phase
    γ(t) = ∫ Im(z̄ ż) dt has the closed form (Ω_D/δ)² (sin δt − δt); at
    full period it equals twice the (signed) area of the drive loop.
    """

    n: int = 60
    omega_d: float = 0.3
    delta: float = 1.0
    phi_l: float = 0.0
    tol_trunc: float = TOL_TRUNC

    @property
    def ratio(self):
        return self.omega_d / self.delta

    @property
    def tau(self):
        return 2.0 * np.pi / self.delta

    def z1(self, t):
        return 1j * self.ratio * (np.exp(-1j * self.delta * t) - 1.0) * np.exp(1j * self.phi_l)

    def z1dot(self, t):
        return self.omega_d * np.exp(-1j * self.delta * t) * np.exp(1j * self.phi_l)

    def gamma_exact(self, t):
        r2 = self.ratio**2
        return r2 * (np.sin(self.delta * t) - self.delta * t)

    def check_truncation(self, extra_amplitude=0.0):
        # W involves e^{2za†}: doubled amplitudes, plus the state's own support
        amp = 2.0 * 2.0 * self.ratio + abs(extra_amplitude)
        tail = coherent_tail_mass(amp, self.n)
        if tail > self.tol_trunc:
            raise TruncationError(
                f"truncation n = {self.n} too small for amplitude {amp:.3f} "
                f"(tail {tail:.2e})",
                suggested_dim=required_truncation(amp, self.tol_trunc),
            )

    def drive_path(self):
        def lam(t):
            z = self.z1(t)
            return np.array([z.real, z.imag])

        def vel(t):
            zd = self.z1dot(t)
            return np.array([zd.real, zd.imag])

        return ParameterPath(
            dim_params=2, map=lam, tau=self.tau, closed=True, velocity=vel
        )

    def metric_family(self):
        return oscillator_metric_family(self.n)

    def pt_scenario(self, c=0.0):
        """PT picture: H = 0, metric W(z), initial coherent state |c⟩.

        Returns (H, W, path, psi0); every initial state is cyclic over one
        drive period and the whole total phase is geometric.
        """
        self.check_truncation(abs(c))
        psi0 = coherent_state(c, self.n, self.tol_trunc)
        return None, self.metric_family(), self.drive_path(), psi0

    def hermitian_scenario(self, c=0.0):
        """Equivalent Hermitian picture: W = I, drive Hamiltonian on the loop."""
        self.check_truncation(abs(c))
        psi0 = coherent_state(c, self.n, self.tol_trunc)
        return (
            self.hermitian_hamiltonian_family(),
            identity_metric(self.n),
            self.drive_path(),
            psi0,
        )

    def hermitian_hamiltonian_family(self):
        """h as a family over the drive loop: h = i[ż a† − ż̄ a] with
        ż(λ) = Ω_D e^{iφ_L} − i δ z, which reproduces the lab-frame drive
        i Ω_D (a† e^{−iδt+iφ_L} − a e^{iδt−iφ_L}) along the path."""
        a, adag, _ = build_fock_ops(self.n)
        w0 = self.omega_d * np.exp(1j * self.phi_l)

        def eval_h(lam):
            z = complex(lam[0], lam[1])
            zdot = w0 - 1j * self.delta * z
            return 1j * (zdot * adag - np.conj(zdot) * a)

        return HamiltonianFamily(dim=self.n, eval=eval_h, name="oscillator-drive")

    def propagator(self, t):
        """Exact PT-picture propagator e^{iγ(t)} e^{−2z(t)a†} D(z(t)).

        The commutators of the generator at different times are scalars,
        so the time-ordered exponential terminates and the global phase
        is exactly the accumulated γ(t); see ``oscillator_propagator``
        for the generic-drive version.
        """
        z = complex(self.z1(t))
        return (
            np.exp(1j * self.gamma_exact(t))
            * (raising_exp(-2.0 * z, self.n) @ displacement_matrix(z, self.n))
        )

    def section(self, fd_step=1e-4):
        return section_oscillator(self.n, fd_step=fd_step)


def hermitian_picture_hamiltonian(z1, t, n, z1dot=None, fd_step=1e-7):
    """Drive Hamiltonian h(t) = i[ż(t) a† − ż̄(t) a] for a drive curve z1."""
    a, adag, _ = build_fock_ops(n)
    zd = complex(z1dot(t)) if z1dot is not None else (
        complex(z1(t + fd_step)) - complex(z1(t - fd_step))
    ) / (2.0 * fd_step)
    return 1j * (zd * adag - np.conj(zd) * a)


def picture_map(psi, z1_value, n, tol_trunc=TOL_TRUNC):
    """Map a PT-picture state to the Hermitian picture: |ψ⟩ → e^{2z a†}|ψ⟩.

    Raises:
        TruncationError: the mapped state carries weight near the top of
            the ladder (the raising exponential pushed it outside the
            trust region of the truncation).
    """
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (n,):
        raise StructuralError(f"state has shape {psi.shape}, expected ({n},)")
    out = raising_exp(2.0 * complex(z1_value), n) @ psi
    margin = max(2, n // 8)
    tail = float(np.sum(np.abs(out[n - margin :]) ** 2) / np.sum(np.abs(out) ** 2))
    if tail > tol_trunc:
        raise TruncationError(
            f"picture map leaves {tail:.2e} of the state in the top {margin} levels; "
            "increase the truncation"
        )
    return out


def oscillator_propagator(z1, t, n, z1dot=None, fd_step=1e-7, tol_trunc=TOL_TRUNC):
    """PT-picture propagator for an arbitrary drive curve z1 with z1(0) = 0.

    Returns e^{iγ(t)} e^{−2z1(t)a†} D(z1(t)) with
    γ(t) = ∫₀ᵗ Im(z̄ ż) ds evaluated by adaptive quadrature; the scalar
    phase is fixed so the matrix matches the time-ordered evolution (its
    (0,0) entry carries the correct accumulated phase, not just a ray
    representative).
    """
    if abs(complex(z1(0.0))) > 1e-12:
        raise ValidationError("drive curve must start at z1(0) = 0")
    zt = complex(z1(t))
    tail = coherent_tail_mass(abs(zt), n)
    if tail > tol_trunc:
        raise TruncationError(
            f"truncation too small: coherent tail {tail:.3e} at |z| = {abs(zt):.3f}",
            suggested_dim=required_truncation(abs(zt), tol_trunc),
        )

    def zdot(s):
        if z1dot is not None:
            return complex(z1dot(s))
        return (complex(z1(s + fd_step)) - complex(z1(s - fd_step))) / (2.0 * fd_step)

    gamma = quad(lambda s: (np.conj(complex(z1(s))) * zdot(s)).imag, 0.0, t, limit=400)[0] if t > 0 else 0.0
    return np.exp(1j * gamma) * (raising_exp(-2.0 * zt, n) @ displacement_matrix(zt, n))


def section_oscillator(n, fd_step=1e-4):
    """State section |φ(λ)⟩ = e^{−2z¹a†}|z²⟩ over (λ¹, λ², λ³, λ⁴).

    z¹ = λ¹ + iλ² are the metric parameters and z² = λ³ + iλ⁴ the
    coherent label; the associated partner is e^{2z̄¹a}|z²⟩ and the
    W-norm is exactly ⟨z²|z²⟩ = 1 at every chart point.
    """

    def split(lam):
        return complex(lam[0], lam[1]), complex(lam[2], lam[3])

    def eval_phi(lam):
        z1, z2 = split(lam)
        return raising_exp(-2.0 * z1, n) @ coherent_state(z2, n)

    def eval_tilde(lam):
        z1, z2 = split(lam)
        # e^{2 z̄¹ a} = (e^{2 z¹ a†})†
        return raising_exp(2.0 * z1, n).conj().T @ coherent_state(z2, n)

    return StateSection(
        dim_coords=4,
        eval=eval_phi,
        metric=oscillator_metric_family(n),
        metric_coords=2,
        fd_step=fd_step,
        tilde_eval=eval_tilde,
        name="oscillator-section",
    )


# ---------------------------------------------------------------------------
# two-level pseudo-Hermitian model
# ---------------------------------------------------------------------------

_SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def two_level_matrices(s, gamma_pt, phi=0.0):
    """H = [[iγ, s e^{−iφ}], [s e^{iφ}, −iγ]] and its metric from the
    left-eigenvector Gram construction, which collapses to
    W = I + (γ/s)(cos φ σ_y + ...) = R(φ) (I + (γ/s) σ_y) R(φ)†
    with R(φ) = diag(1, e^{iφ}); pseudo-Hermiticity W H = H† W is exact.

    Real spectrum ±√(s² − γ²) requires the exact-symmetry regime s > |γ|
    (γ = 0 degenerates gracefully to a Hermitian H with W = I).  The
    coupling phase φ rotates the metric axis; loops that vary it sweep
    out genuinely curved ray paths, unlike pure (s, γ) loops."""
    if s <= 0:
        raise ValidationError("coupling s must be positive")
    if s <= abs(gamma_pt):
        raise ValidationError(
            f"broken-symmetry regime: s = {s} ≤ |gamma| = {abs(gamma_pt)} gives a complex spectrum"
        )
    e_m = np.exp(-1j * phi)
    H = np.array([[1j * gamma_pt, s * e_m], [s * np.conj(e_m), -1j * gamma_pt]], dtype=complex)
    c = gamma_pt / s
    W = np.array([[1.0, -1j * c * e_m], [1j * c * np.conj(e_m), 1.0]], dtype=complex)
    return H, W


def two_level_model(s, gamma_pt):
    """Hamiltonian and metric families over λ = (s, γ, φ) for the
    two-level pseudo-Hermitian system, validated at (s, gamma_pt, 0)."""
    two_level_matrices(s, gamma_pt)  # validate the regime

    def eval_h(lam):
        return two_level_matrices(lam[0], lam[1], lam[2])[0]

    def eval_w(lam):
        return two_level_matrices(lam[0], lam[1], lam[2])[1]

    def grad_w(lam, mu):
        sl, gl, ph = lam
        e_m = np.exp(-1j * ph)
        axis = np.array([[0.0, -1j * e_m], [1j * np.conj(e_m), 0.0]], dtype=complex)
        if mu == 0:
            return (-gl / sl**2) * axis
        if mu == 1:
            return (1.0 / sl) * axis
        c = gl / sl
        return c * np.array([[0.0, -e_m], [-np.conj(e_m), 0.0]], dtype=complex)

    H = HamiltonianFamily(dim=2, eval=eval_h, name="two-level")
    W = MetricFamily(dim=2, eval=eval_w, grad=grad_w, name="two-level-metric")
    return H, W


def two_level_loop(s0=1.0, gamma0=0.4, radius_gamma=0.25, radius_phi=0.9, tau=6.0, radius_s=0.0):
    """Closed circle in the (γ, φ) plane (optionally tilted into s) staying
    inside the exact-symmetry regime."""
    if s0 - abs(radius_s) <= gamma0 + radius_gamma:
        raise ValidationError("loop leaves the exact-symmetry regime s > gamma")
    w = 2.0 * np.pi / tau

    def lam(t):
        return np.array([
            s0 + radius_s * np.sin(w * t),
            gamma0 + radius_gamma * np.cos(w * t),
            radius_phi * np.sin(w * t),
        ])

    def vel(t):
        return np.array([
            radius_s * w * np.cos(w * t),
            -radius_gamma * w * np.sin(w * t),
            radius_phi * w * np.cos(w * t),
        ])

    return ParameterPath(dim_params=3, map=lam, tau=tau, closed=True, velocity=vel)


def floquet_cyclic_state(H, W, path, steps):
    """An exactly cyclic initial state: eigenvector of the one-period
    propagator, W(λ_0)-normalized.  Deterministic given fixed inputs."""
    from .evolution import evolve  # local import to avoid cycle at module load

    dim = W.dim
    W0 = W(path.at(0.0))
    columns = []
    for j in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[j] = 1.0
        nrm = np.sqrt((e.conj() @ (W0 @ e)).real)
        rec = evolve(H, W, path, e / nrm, steps)
        columns.append(rec.states[-1] * nrm)
    U = np.column_stack(columns)
    vals, vecs = np.linalg.eig(U)
    order = np.argsort(np.angle(vals))
    psi = vecs[:, order[0]]
    return psi / np.sqrt((psi.conj() @ (W0 @ psi)).real)


# ---------------------------------------------------------------------------
# standard-QM spin-1/2 reduction (W = I)
# ---------------------------------------------------------------------------

def spin_great_circle_scenario(tau=2.0):
    """Spin-1/2 precessing through a great circle of the Bloch sphere.

    H = (π/τ) σ_x drives |0⟩ around the circle through both poles in one
    period; the dynamical phase vanishes (⟨σ_x⟩ = 0 on the circle) so the
    total phase is purely geometric: half the enclosed solid angle, π ≡ −π.
    """
    Hm = (np.pi / tau) * _SIGMA_X
    H = HamiltonianFamily(dim=2, eval=lambda lam: Hm, name="spin-great-circle")
    W = identity_metric(2)
    path = constant_path([0.0], tau)
    psi0 = np.array([1.0, 0.0], dtype=complex)
    return H, W, path, psi0


def bloch_section(band="lower"):
    """Spin-1/2 Bloch sections over (θ, φ) with the ordinary inner product.

    The lower band carries the curvature 2-form −(1/2) sin θ dθ ∧ dφ
    (stored component matrix Ω_θφ = −(1/4) sin θ)."""

    def eval_phi(lam):
        th, ph = lam
        if band == "lower":
            return np.array([np.sin(th / 2.0), -np.exp(1j * ph) * np.cos(th / 2.0)])
        return np.array([np.cos(th / 2.0), np.exp(1j * ph) * np.sin(th / 2.0)])

    return StateSection(dim_coords=2, eval=eval_phi, metric=None, name=f"bloch-{band}")
