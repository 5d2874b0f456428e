"""Acceptance suite: every headline criterion at its stated tolerance.

The criteria are computed once per session by ptgeom.golden (the same
code path the ``ptgeom golden`` CLI verb runs) and asserted one by one,
printing one status line each.  The oscillator-section fidelity-Taylor
window is a strict expected failure: on that section the remainder is
exactly quartic, so its δ-halving ratio is 16, outside the stated 8 ± 1
(see the criterion docstring in ptgeom.golden).
"""

import pytest

from ptgeom import golden


@pytest.fixture(scope="session")
def results():
    res = {r.name: r for r in golden.run_all()}
    for r in res.values():
        print(r.line())
    return res


def _check(results, name):
    r = results[name]
    print(r.line())
    assert r.passed, r.detail


def test_01_golden_qgt(results):
    _check(results, "golden-qgt")


def test_02_golden_curvature_metric(results):
    _check(results, "golden-curvature-metric")


def test_03_im_re_split(results):
    _check(results, "im-re-split")


def test_04_single_geometric_phase(results):
    _check(results, "single-geometric-phase")


def test_05_four_route_agreement(results):
    _check(results, "four-route-agreement")


def test_06_stokes_consistency(results):
    _check(results, "stokes-consistency")


def test_07_unitarity(results):
    _check(results, "unitarity")


def test_08_invariance_suite(results):
    _check(results, "invariance-suite")


def test_09_timelike_classification(results):
    _check(results, "timelike-classification")


def test_10_garrison_wright(results):
    _check(results, "garrison-wright-identity")


def test_11a_fidelity_taylor_standard(results):
    _check(results, "fidelity-taylor-standard")


@pytest.mark.xfail(
    strict=True,
    reason="remainder is exactly quartic on the oscillator section: the "
    "δ-halving ratio is 16, outside the stated 8 ± 1 window",
)
def test_11b_fidelity_taylor_oscillator(results):
    _check(results, "fidelity-taylor-oscillator")
