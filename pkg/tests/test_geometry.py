import numpy as np
import pytest

from ptgeom.errors import NumericalConsistencyError, PreconditionError, ValidationError
from ptgeom.geometry import (
    StateSection,
    classify_displacement,
    classify_evolution,
    connection,
    curvature,
    curvature_from_connection,
    fidelity,
    geometric_tensors,
    line_element,
    loop_integral_connection,
    metric_tensor,
    polyline_connection_integral,
    qgt,
    section_jet,
    small_loop_phase,
    surface_integral_curvature,
)
from ptgeom.hilbert import PhysicalState, bi_density, identity_metric
from ptgeom.models import bloch_section, section_oscillator
from ptgeom.numerics import wrap_angle

Q_GOLDEN = np.array(
    [[0, 0, -1, -1j], [0, 0, 1j, -1], [-1, -1j, 1, 1j], [1j, -1, -1j, 1]], dtype=complex
)
G_GOLDEN = Q_GOLDEN.real
OMEGA_GOLDEN = Q_GOLDEN.imag


@pytest.fixture(scope="module")
def small_section():
    return section_oscillator(40)


@pytest.fixture(scope="module")
def random_section(rng):
    """Generic W = I section on C^3 over two coordinates, for the
    standard-QM reduction cross-check."""
    A = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    B = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    A, B = 0.5 * (A + A.conj().T), 0.5 * (B + B.conj().T)
    v0 = rng.normal(size=3) + 1j * rng.normal(size=3)

    def eval_phi(lam):
        import scipy.linalg

        vec = scipy.linalg.expm(1j * (lam[0] * A + lam[1] * B)) @ v0
        return vec / np.linalg.norm(vec)

    return StateSection(dim_coords=2, eval=eval_phi, metric=None, name="random-su3")


# --- connection -------------------------------------------------------------

def test_connection_real_section_vanishes():
    def eval_phi(lam):
        v = np.array([np.cos(lam[0]), np.sin(lam[0])])
        return v

    sec = StateSection(dim_coords=1, eval=eval_phi, metric=None)
    assert np.max(np.abs(connection(sec, np.array([0.3])))) < 1e-12


def test_connection_pure_gauge():
    v0 = np.array([0.6, 0.8], dtype=complex)

    def eval_phi(lam):
        return np.exp(1j * lam[0]) * v0

    sec = StateSection(dim_coords=2, eval=eval_phi, metric=None)
    A = connection(sec, np.array([0.4, -1.2]))
    assert np.allclose(A, [1.0, 0.0], atol=1e-10)


def test_connection_oscillator_closed_form(small_section):
    # Im⟨⟨φ|∂φ⟩⟩ = (2λ4, -2λ3, -λ4, λ3) from displacement-operator algebra
    pt = np.array([0.07, -0.12, 0.15, 0.09])
    A = connection(small_section, pt)
    expect = np.array([2 * pt[3], -2 * pt[2], -pt[3], pt[2]])
    assert np.max(np.abs(A - expect)) < 1e-6


# --- tensors against the golden matrices -----------------------------------

def test_tensors_constant_over_chart(small_section):
    for pt in (np.zeros(4), np.array([0.12, 0.05, -0.08, 0.11])):
        t = geometric_tensors(small_section, pt)
        assert np.max(np.abs(t.Q - Q_GOLDEN)) < 1e-6
        assert np.max(np.abs(t.Omega - OMEGA_GOLDEN)) < 1e-6
        assert np.max(np.abs(t.g - G_GOLDEN)) < 1e-6


def test_tensor_storage_symmetries(small_section):
    t = geometric_tensors(small_section, np.array([0.1, 0.0, 0.05, -0.1]))
    assert np.array_equal(t.Omega, -t.Omega.T)
    assert np.array_equal(t.g, t.g.T)
    assert np.max(np.abs(t.Q - t.Q.conj().T)) < 1e-10


def test_curvature_equals_connection_derivative(small_section):
    pt = np.array([0.05, 0.1, -0.05, 0.08])
    om1 = curvature(small_section, pt)
    om2 = curvature_from_connection(small_section, pt)
    assert np.max(np.abs(om1 - om2)) < 1e-8


def test_constant_section_flat():
    v0 = np.array([1.0, 1.0j]) / np.sqrt(2.0)
    sec = StateSection(dim_coords=2, eval=lambda lam: v0, metric=None)
    assert np.max(np.abs(curvature(sec, np.zeros(2)))) < 1e-12


# --- standard-QM reduction ---------------------------------------------------

def test_bloch_closed_forms():
    sec = bloch_section()
    th = 1.1
    t = geometric_tensors(sec, np.array([th, 0.7]))
    # textbook: Fubini-Study metric diag(1/4, sin²θ/4), curvature ∓ sinθ/4
    assert t.g[0, 0] == pytest.approx(0.25, abs=1e-9)
    assert t.g[1, 1] == pytest.approx(np.sin(th) ** 2 / 4.0, abs=1e-9)
    assert abs(t.g[0, 1]) < 1e-9
    assert t.Omega[0, 1] == pytest.approx(-np.sin(th) / 4.0, abs=1e-9)


def test_w_identity_reduces_to_textbook_qgt(random_section, rng):
    """Independent implementation: Q_μν = ⟨∂μφ|(1−|φ⟩⟨φ|)|∂νφ⟩ by plain
    central differences, compared entrywise."""
    pt = np.array([0.2, -0.1])
    h = 1e-5
    dphi = []
    for mu in range(2):
        lp, lm = pt.copy(), pt.copy()
        lp[mu] += h
        lm[mu] -= h
        dphi.append((random_section.value(lp) - random_section.value(lm)) / (2 * h))
    phi = random_section.value(pt)
    proj = np.eye(3) - np.outer(phi, phi.conj())
    expect = np.array([[np.vdot(dphi[m], proj @ dphi[n]) for n in range(2)] for m in range(2)])
    got = qgt(random_section, pt)
    assert np.max(np.abs(got - expect)) < 1e-8


# --- gauge invariance --------------------------------------------------------

def test_tensors_gauge_invariant_connection_shifts(small_section, rng):
    coeff = rng.normal(size=4)

    def theta(lam):
        return float(coeff @ np.tanh(lam))

    def grad_theta(lam):
        return coeff * (1.0 / np.cosh(lam)) ** 2

    pt = np.array([0.12, -0.03, 0.2, 0.06])
    base = geometric_tensors(small_section, pt)
    regauged = geometric_tensors(small_section.regauged(theta), pt)
    assert np.max(np.abs(regauged.Q - base.Q)) < 1e-6
    assert np.max(np.abs((regauged.A - base.A) - grad_theta(pt))) < 1e-6


# --- fidelity ----------------------------------------------------------------

def test_fidelity_identical_states():
    rho = bi_density(PhysicalState(np.array([0.6, 0.8j]), (0.0,)), identity_metric(2))
    F = fidelity(rho, rho, np.eye(2))
    assert F.value == pytest.approx(1.0, abs=1e-12)
    assert F.discrepancy < 1e-10


def test_fidelity_orthogonal_states():
    e0 = bi_density(PhysicalState(np.array([1.0, 0.0]), (0.0,)), identity_metric(2))
    e1 = bi_density(PhysicalState(np.array([0.0, 1.0]), (0.0,)), identity_metric(2))
    F = fidelity(e0, e1, np.eye(2))
    assert F.value == pytest.approx(0.0, abs=1e-8)


def test_fidelity_exceeds_one_along_timelike_displacement(small_section):
    # ds² < 0 forces F > 1 through 2(1 − F) = ds²; this is the
    # pseudo-Riemannian signature showing up in the fidelity
    W = small_section.metric
    base = np.array([0.05, -0.03, 0.08, 0.02])
    delta = 0.02 * np.array([1.0, 0.5, 1.0, 0.5])  # λ1=λ3, λ2=λ4 direction
    rho = bi_density(PhysicalState(small_section.value(base), tuple(base[:2])), W(base[:2]))
    sig = bi_density(
        PhysicalState(small_section.value(base + delta), tuple((base + delta)[:2])),
        W((base + delta)[:2]),
    )
    F = fidelity(rho, sig, W(base[:2]))
    assert F.value > 1.0
    g = metric_tensor(small_section, base)
    assert 2.0 * (1.0 - F.value) == pytest.approx(float(delta @ g @ delta), abs=1e-6)


def test_fidelity_metric_taylor_bloch():
    sec = bloch_section()
    b0 = np.array([1.1, 0.4])
    g = metric_tensor(sec, b0)
    eye = np.eye(2, dtype=complex)
    rem = []
    for d in (0.08, 0.04, 0.02):
        delta = d * np.array([0.8, 0.6])
        rho = bi_density(PhysicalState(sec.value(b0), (0.0,)), eye)
        sig = bi_density(PhysicalState(sec.value(b0 + delta), (0.0,)), eye)
        F = fidelity(rho, sig, eye)
        rem.append(2.0 * (1.0 - F.value) - float(delta @ g @ delta))
    ratios = [rem[i] / rem[i + 1] for i in range(2)]
    assert all(7.0 <= r <= 9.0 for r in ratios), ratios


# --- line element and classification ----------------------------------------

def test_line_element_zero_displacement(small_section):
    assert line_element(small_section, np.zeros(4), np.zeros(4)) == 0.0


def test_line_element_constrained_directions(small_section):
    # along λ1=λ3, λ2=λ4: ds² = -(dλ1² + dλ2²)
    d = np.array([0.3, -0.2, 0.3, -0.2])
    val = line_element(small_section, np.zeros(4), d)
    assert val == pytest.approx(-(0.3**2 + 0.2**2), abs=1e-6)


def test_line_element_generic_quadratic_form(small_section):
    # ds² = -2dλ1dλ3 - 2dλ2dλ4 + dλ3² + dλ4²
    d = np.array([0.1, 0.2, 0.3, 0.4])
    expect = -2 * d[0] * d[2] - 2 * d[1] * d[3] + d[2] ** 2 + d[3] ** 2
    assert line_element(small_section, np.zeros(4), d) == pytest.approx(expect, abs=1e-6)


def test_classify_displacement_tags():
    assert classify_displacement(1.0, np.ones(2)) == "spacelike"
    assert classify_displacement(-1.0, np.ones(2)) == "timelike"
    assert classify_displacement(1e-9, np.ones(2)) == "lightlike"


def test_stationary_curve_lightlike(small_section):
    tags = classify_evolution(small_section, lambda s: np.zeros(4), 5)
    assert all(t == "lightlike" for _, t, _ in tags)


def test_drive_loop_timelike(small_section):
    r = 0.25

    def curve(s):
        x, y = r * np.sin(2 * np.pi * s), r * (np.cos(2 * np.pi * s) - 1.0)
        return np.array([x, y, x, y])

    tags = classify_evolution(small_section, curve, 8)
    assert all(t == "timelike" for _, t, _ in tags)


def test_bloch_curves_never_timelike():
    sec = bloch_section()
    tags = classify_evolution(
        sec, lambda s: np.array([1.0 + 0.4 * np.cos(2 * np.pi * s), 0.5 + 0.4 * np.sin(2 * np.pi * s)]), 8
    )
    assert all(t in ("spacelike", "lightlike") for _, t, _ in tags)


# --- loop and surface integrals ----------------------------------------------

def test_zero_area_loop(small_section):
    # out-and-back along a line: no enclosed area, no phase
    def loop(s):
        amp = np.sin(np.pi * s) ** 2
        return amp * np.array([0.1, 0.05, 0.1, 0.05])

    val = loop_integral_connection(small_section, loop, 256)
    assert abs(val) < 1e-8


def test_loop_matches_drive_area(small_section):
    r = 0.25

    def loop(s):
        x, y = r * np.sin(2 * np.pi * s), r * (np.cos(2 * np.pi * s) - 1.0)
        return np.array([x, y, x, y])

    val = loop_integral_connection(small_section, loop, 512)
    assert abs(wrap_angle(val - (-2 * np.pi * r * r))) < 1e-8


def test_degenerate_patch_zero(small_section):
    val = surface_integral_curvature(small_section, lambda u, v: np.zeros(4), 8)
    assert abs(val) < 1e-12


def test_stokes_loop_vs_surface(small_section):
    r = 0.25

    def loop(s):
        x, y = r * np.sin(2 * np.pi * s), r * (np.cos(2 * np.pi * s) - 1.0)
        return np.array([x, y, x, y])

    g_loop = loop_integral_connection(small_section, loop, 256)
    g_surf = surface_integral_curvature(small_section, lambda u, v: u * loop(v), 32)
    assert abs(wrap_angle(g_loop - g_surf)) < 1e-4


def test_bloch_cap_half_solid_angle():
    sec = bloch_section()
    thc = 0.9
    g_loop = loop_integral_connection(sec, lambda s: np.array([thc, 2 * np.pi * s]), 256)
    g_surf = surface_integral_curvature(
        sec, lambda u, v: np.array([max(u, 1e-9) * thc, 2 * np.pi * v]), 64
    )
    half_solid = np.pi * (1.0 - np.cos(thc))
    assert abs(wrap_angle(g_loop - half_solid)) < 1e-8
    assert abs(wrap_angle(g_surf - g_loop)) < 1e-4


def test_small_square_plaquette(small_section):
    t = geometric_tensors(small_section, np.zeros(4))
    for h in (0.1, 0.05):
        val = small_loop_phase(small_section, np.zeros(4), 0, 3, h)
        assert val == pytest.approx(-2.0 * t.Omega[0, 3] * h * h, abs=1e-10)


def test_polyline_requires_closure(small_section):
    with pytest.raises(PreconditionError):
        polyline_connection_integral(small_section, [np.zeros(4), np.ones(4) * 0.1])


# --- section validation -------------------------------------------------------

def test_section_rejects_unnormalized():
    sec = StateSection(dim_coords=1, eval=lambda lam: np.array([1.0, 1.0]), metric=None)
    with pytest.raises(ValidationError, match="normalized"):
        section_jet(sec, np.array([0.0]))


def test_jet_shares_samples_across_tensors(small_section):
    jet = section_jet(small_section, np.zeros(4))
    t1 = curvature(small_section, np.zeros(4), jet=jet)
    t2 = qgt(small_section, np.zeros(4), jet=jet)
    assert np.max(np.abs(t2.imag - t1)) < 1e-10
