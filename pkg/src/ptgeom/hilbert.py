"""Parameter-dependent physical Hilbert space.

The physical inner product at a parameter point λ is ⟨⟨a|b⟩⟩_λ = a† W(λ) b
with W(λ) Hermitian positive-definite.  A Hamiltonian family is admissible
when it is Hermitian with respect to that product, W H = H† W
(pseudo-Hermiticity).  Every state |ψ⟩ carries an associated partner
|ψ̃⟩ = W|ψ⟩ that fills all bra slots, and a ray is represented by the
rank-one idempotent ρ = |ψ⟩⟨ψ̃|.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import StructuralError, ValidationError

# Defaults chosen for double precision dense linear algebra at dim <= 200.
TOL_HERM = 1e-10
TOL_PSEUDO = 1e-10
TOL_NORM = 1e-8
TOL_IDEM = 1e-10
TOL_TRACE = 1e-10
TOL_RANK = 1e-8
COND_WARN = 1e8


def _as_matrix(W, dim=None):
    W = np.asarray(W, dtype=complex)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise StructuralError(f"metric must be a square matrix, got shape {W.shape}")
    if dim is not None and W.shape[0] != dim:
        raise StructuralError(f"metric dimension {W.shape[0]} != expected {dim}")
    return W


def check_metric(W, *, tol_herm=TOL_HERM, warn_condition=True):
    """Validate a metric matrix: Hermitian and positive-definite.

    Positive definiteness is established by attempting a Cholesky
    factorization (cheapest definitive test); on failure the offending
    smallest eigenvalue is reported.  A condition-number guard warns when
    cond(W) > 1e8 since W⁻¹-based operations then amplify error.
    """
    W = _as_matrix(W)
    herm_residual = float(np.max(np.abs(W - W.conj().T)))
    if herm_residual > tol_herm:
        raise ValidationError(f"metric not Hermitian: residual {herm_residual:.3e} > {tol_herm:.1e}")
    try:
        np.linalg.cholesky(W)
    except np.linalg.LinAlgError:
        lam_min = float(np.linalg.eigvalsh(W)[0])
        raise ValidationError(f"metric not positive-definite: min eigenvalue {lam_min:.3e}") from None
    if warn_condition:
        cond = np.linalg.cond(W)
        if cond > COND_WARN:
            warnings.warn(
                f"metric condition number {cond:.2e} exceeds {COND_WARN:.0e}; "
                "inverse-metric operations may amplify rounding error",
                stacklevel=2,
            )
    return W


@dataclass(frozen=True)
class MetricFamily:
    """Smooth family λ ↦ W(λ) of inner-product metrics.

    Args:
        dim: matrix dimension.
        eval: callback λ (1-D real array) -> dim x dim complex Hermitian
            positive-definite matrix.
        grad: optional callback (λ, μ) -> ∂W/∂λ^μ.  When absent, central
            finite differences with relative step ``fd_step`` are used.
        fd_step: finite-difference step, scaled by max(1, |λ_μ|).
        factor: optional callback λ -> F with W = F† F and F triangular.
            Supplying it lets W⁻¹-products be computed by two triangular
            solves, which stays accurate for strongly graded metrics
            (e.g. exponentials of ladder operators) whose raw condition
            number is enormous.

    Callbacks must be pure; instances are immutable and safe to share.
    """

    dim: int
    eval: Callable[[np.ndarray], np.ndarray]
    grad: Optional[Callable[[np.ndarray, int], np.ndarray]] = None
    fd_step: float = 1e-5
    factor: Optional[Callable[[np.ndarray], np.ndarray]] = None
    name: str = "metric"

    def __call__(self, lam):
        W = _as_matrix(self.eval(np.asarray(lam, dtype=float)), self.dim)
        return W

    def validate(self, lam, *, tol_herm=TOL_HERM):
        return check_metric(self(lam), tol_herm=tol_herm)

    def derivative(self, lam, mu):
        """∂W/∂λ^μ at λ, analytic when available, else central differences."""
        lam = np.asarray(lam, dtype=float)
        if self.grad is not None:
            return _as_matrix(self.grad(lam, mu), self.dim)
        h = self.fd_step * max(1.0, abs(lam[mu]))
        lp, lm = lam.copy(), lam.copy()
        lp[mu] += h
        lm[mu] -= h
        return (self(lp) - self(lm)) / (2.0 * h)


@dataclass(frozen=True)
class HamiltonianFamily:
    """Smooth family λ ↦ H(λ); pseudo-Hermiticity is checked on demand."""

    dim: int
    eval: Callable[[np.ndarray], np.ndarray]
    name: str = "hamiltonian"

    def __call__(self, lam):
        H = np.asarray(self.eval(np.asarray(lam, dtype=float)), dtype=complex)
        if H.shape != (self.dim, self.dim):
            raise StructuralError(f"Hamiltonian shape {H.shape} != ({self.dim}, {self.dim})")
        return H


@dataclass(frozen=True)
class PhysicalState:
    """A state vector attached to the parameter point it lives at."""

    vec: np.ndarray
    lam: tuple

    def __post_init__(self):
        object.__setattr__(self, "vec", np.asarray(self.vec, dtype=complex))
        object.__setattr__(self, "lam", tuple(float(x) for x in np.atleast_1d(self.lam)))

    @property
    def dim(self):
        return self.vec.shape[0]

    def norm(self, W):
        """Physical norm √⟨⟨ψ|ψ⟩⟩ under the metric family or matrix W."""
        mat = W(self.lam) if isinstance(W, MetricFamily) else _as_matrix(W, self.dim)
        val = physical_inner(mat, self.vec, self.vec, validate=False)
        return float(np.sqrt(val.real))


@dataclass(frozen=True)
class BiDensity:
    """Rank-one idempotent ρ = |ψ⟩⟨ψ̃| representing a ray.

    Unit trace and ρ² = ρ hold regardless of the metric; ρ is generally
    not Hermitian in the naive inner product.
    """

    mat: np.ndarray
    lam: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "mat", np.asarray(self.mat, dtype=complex))
        object.__setattr__(self, "lam", tuple(float(x) for x in np.atleast_1d(self.lam)))

    def residuals(self):
        """Measured deviations from the bi-density invariants."""
        rho = self.mat
        idem = float(np.max(np.abs(rho @ rho - rho)))
        trace = float(abs(np.trace(rho) - 1.0))
        s = np.linalg.svd(rho, compute_uv=False)
        rank_tail = float(s[1] / s[0]) if len(s) > 1 and s[0] > 0 else 0.0
        return {"idempotency": idem, "trace": trace, "rank_tail": rank_tail}

    def validate(self, *, tol_idem=TOL_IDEM, tol_trace=TOL_TRACE, tol_rank=TOL_RANK):
        r = self.residuals()
        if r["idempotency"] > tol_idem:
            raise ValidationError(f"bi-density not idempotent: {r['idempotency']:.3e}")
        if r["trace"] > tol_trace:
            raise ValidationError(f"bi-density trace off unity by {r['trace']:.3e}")
        if r["rank_tail"] > tol_rank:
            raise ValidationError(f"bi-density numerical rank > 1: tail {r['rank_tail']:.3e}")
        return r


def physical_inner(W, a, b, *, validate=True):
    """Physical inner product ⟨⟨a|b⟩⟩ = a† W b.

    Conjugate symmetry ⟨⟨a|b⟩⟩ = ⟨⟨b|a⟩⟩* and sesquilinearity follow from
    W being Hermitian.  With ``validate`` the metric is checked Hermitian
    positive-definite first.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    W = _as_matrix(W)
    if a.shape != (W.shape[0],) or b.shape != (W.shape[0],):
        raise StructuralError(
            f"dimension mismatch: W is {W.shape}, vectors are {a.shape} and {b.shape}"
        )
    if validate:
        check_metric(W, warn_condition=False)
    return complex(a.conj() @ (W @ b))


def tilde(state, W):
    """Associated bra-side partner |ψ̃⟩ = W(λ)|ψ⟩ of a state.

    ⟨ψ̃|ψ⟩ reproduces the physical norm squared exactly.
    """
    if isinstance(state, PhysicalState):
        mat = W(state.lam) if isinstance(W, MetricFamily) else _as_matrix(W, state.dim)
        return mat @ state.vec
    vec = np.asarray(state, dtype=complex)
    mat = _as_matrix(W, vec.shape[0]) if not isinstance(W, MetricFamily) else W(np.zeros(1))
    return mat @ vec


def bi_density(state, W, *, tol_norm=TOL_NORM):
    """Bi-density ρ = |ψ⟩⟨ψ̃| of a normalized state.

    Invariant under ψ -> e^{iϑ}ψ, so it faithfully represents the ray.

    Raises:
        ValidationError: when the state is not W-normalized (the measured
            norm is carried in the message).
    """
    if not isinstance(state, PhysicalState):
        raise StructuralError("bi_density expects a PhysicalState")
    mat = W(state.lam) if isinstance(W, MetricFamily) else _as_matrix(W, state.dim)
    wpsi = mat @ state.vec
    nrm2 = (state.vec.conj() @ wpsi).real
    if abs(nrm2 - 1.0) > tol_norm:
        raise ValidationError(
            f"state not W-normalized: ⟨⟨ψ|ψ⟩⟩ = {nrm2:.12f} (tolerance {tol_norm:.1e})"
        )
    return BiDensity(np.outer(state.vec, wpsi.conj()), state.lam)


@dataclass(frozen=True)
class PseudoHermiticityReport:
    residual: float
    tol: float

    @property
    def passed(self):
        return self.residual <= self.tol


def check_pseudo_hermitian(H, W, lam, tol=TOL_PSEUDO):
    """Report ‖W H − H† W‖_max at λ against ``tol`` (never raises)."""
    lam = np.asarray(lam, dtype=float)
    Hm = H(lam) if isinstance(H, HamiltonianFamily) else np.asarray(H, dtype=complex)
    Wm = W(lam) if isinstance(W, MetricFamily) else _as_matrix(W)
    if Hm.shape != Wm.shape:
        raise StructuralError(f"shape mismatch: H {Hm.shape} vs W {Wm.shape}")
    residual = float(np.max(np.abs(Wm @ Hm - Hm.conj().T @ Wm)))
    return PseudoHermiticityReport(residual=residual, tol=tol)


def identity_metric(dim):
    """The W = I family: all operations reduce to standard quantum mechanics."""
    eye = np.eye(dim, dtype=complex)
    zero = np.zeros((dim, dim), dtype=complex)
    return MetricFamily(
        dim=dim,
        eval=lambda lam: eye,
        grad=lambda lam, mu: zero,
        factor=lambda lam: eye,
        name="identity",
    )
