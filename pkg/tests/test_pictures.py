"""Cross-checks between the gauge-only picture and the drive picture of
the oscillator, plus truncation-convergence invariants."""

import numpy as np
import pytest

from ptgeom.errors import TruncationError
from ptgeom.evolution import detect_cyclic, evolve
from ptgeom.geometry import geometric_tensors
from ptgeom.models import OscillatorModel, picture_map, section_oscillator
from ptgeom.numerics import wrap_angle
from ptgeom.phases import phase_report


@pytest.fixture(scope="module")
def paired_records():
    model = OscillatorModel(n=40, omega_d=0.25, delta=1.0)
    H_pt, W_pt, path, psi0 = model.pt_scenario()
    rec_pt = evolve(H_pt, W_pt, path, psi0, 900)
    H_h, W_h, _, psi0_h = model.hermitian_scenario()
    rec_h = evolve(H_h, W_h, path, psi0_h, 900)
    return model, rec_pt, rec_h


def test_mapped_evolution_matches_direct_integration(paired_records):
    model, rec_pt, rec_h = paired_records
    n = model.n
    for k in np.linspace(0, rec_pt.steps, 7, dtype=int):
        z = model.z1(rec_pt.times[k])
        mapped = picture_map(rec_pt.states[k], z, n)
        direct = rec_h.states[k]
        fid = abs(np.vdot(mapped, direct)) / (np.linalg.norm(mapped) * np.linalg.norm(direct))
        assert fid >= 1.0 - 1e-8


def test_both_pictures_share_total_phase_and_cyclicity(paired_records):
    model, rec_pt, rec_h = paired_records
    a_pt, a_h = detect_cyclic(rec_pt), detect_cyclic(rec_h)
    assert a_pt.cyclic and a_h.cyclic
    assert abs(wrap_angle(a_pt.alpha - a_h.alpha)) < 1e-8
    assert abs(wrap_angle(a_pt.alpha - model.gamma_exact(model.tau))) < 1e-8


def test_picture_map_trust_radius():
    with pytest.raises(TruncationError):
        # a state already at the top of a tiny ladder cannot be raised
        psi = np.zeros(6, dtype=complex)
        psi[4] = 1.0
        picture_map(psi, 1.5, 6)


def test_tensors_converge_under_truncation_doubling():
    # inside the trust region the reported tensors are truncation-free
    pt = np.array([0.05, -0.04, 0.06, 0.03])
    t60 = geometric_tensors(section_oscillator(60), pt)
    t120 = geometric_tensors(section_oscillator(120), pt)
    assert np.max(np.abs(t60.Q - t120.Q)) < 1e-8
    assert np.max(np.abs(t60.g - t120.g)) < 1e-8
    assert np.max(np.abs(t60.Omega - t120.Omega)) < 1e-8


def test_phases_converge_under_truncation_doubling():
    vals = []
    for n in (40, 80):
        model = OscillatorModel(n=n, omega_d=1.0 / 12.0, delta=1.0)
        H, W, path, psi0 = model.pt_scenario()
        rec = evolve(H, W, path, psi0, 700)
        vals.append(phase_report(rec, H).gamma)
    assert abs(vals[0] - vals[1]) < 1e-8


@pytest.mark.parametrize("ratio", [0.1, 0.2, 0.3])
def test_area_law_across_drive_strengths(ratio):
    model = OscillatorModel(n=44, omega_d=ratio, delta=1.0)
    H, W, path, psi0 = model.pt_scenario()
    rec = evolve(H, W, path, psi0, 1000)
    rep = detect_cyclic(rec)
    assert abs(wrap_angle(rep.alpha - (-2.0 * np.pi * ratio**2))) < 1e-5
