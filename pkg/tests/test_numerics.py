import numpy as np
import pytest
from hypothesis import given, strategies as st

from ptgeom.errors import ResolutionError
from ptgeom.numerics import (
    accumulated_arg,
    angle_distance,
    fd_weights,
    integrate_samples,
    series_derivative,
    wrap_angle,
)


def test_fd_weights_central():
    # classical 5-point first-derivative stencil
    w = fd_weights(np.array([-2.0, -1.0, 0.0, 1.0, 2.0]), 0.0, 1)
    assert np.allclose(w, [1 / 12, -8 / 12, 0.0, 8 / 12, -1 / 12])


def test_fd_weights_one_sided():
    x = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
    w = fd_weights(x, 0.0, 1)
    # exact for polynomials up to degree 4
    for p in range(5):
        deriv = sum(wi * xi**p for wi, xi in zip(w, x))
        assert deriv == pytest.approx(p * 0.0 ** max(p - 1, 0), abs=1e-10)


@given(st.floats(min_value=-50, max_value=50))
def test_wrap_angle_range_and_congruence(x):
    w = float(wrap_angle(x))
    assert -np.pi < w <= np.pi + 1e-12
    assert abs((x - w) / (2 * np.pi) - round((x - w) / (2 * np.pi))) < 1e-9


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_angle_distance_symmetry(a, b):
    assert angle_distance(a, b) == pytest.approx(angle_distance(b, a), abs=1e-12)
    assert angle_distance(a, a + 2 * np.pi) < 1e-9


def test_series_derivative_uniform_twisted():
    # f(t) = e^{i w t} v: twisted-periodic with wrap e^{i w T}
    t = np.linspace(0.0, 2.0, 401)
    w = 1.3
    v = np.array([1.0, 2.0j])
    vals = np.exp(1j * w * t)[:, None] * v
    d = series_derivative(vals, t, wrap_factor=np.exp(1j * w * 2.0))
    expect = 1j * w * vals
    assert np.max(np.abs(d - expect)) < 1e-9


def test_series_derivative_nonuniform():
    s = np.linspace(0.0, 1.0, 301)
    t = 2.0 * (0.2 * s + 0.8 * s**2)
    vals = np.sin(3.0 * t) + 0.5 * t**2
    d = series_derivative(vals, t)
    expect = 3.0 * np.cos(3.0 * t) + t
    assert np.max(np.abs(d - expect)) < 2e-6


def test_integrate_samples_uniform_periodic_is_spectral():
    t = np.linspace(0.0, 2 * np.pi, 129)
    y = np.exp(np.sin(t))
    from scipy.integrate import quad

    exact = quad(lambda x: np.exp(np.sin(x)), 0, 2 * np.pi)[0]
    assert integrate_samples(y, t) == pytest.approx(exact, abs=1e-12)


def test_integrate_samples_nonuniform():
    s = np.linspace(0.0, 1.0, 501)
    t = 0.3 * s + 0.7 * s**2
    y = np.cos(4.0 * t)
    exact = np.sin(4.0 * t[-1]) / 4.0
    assert integrate_samples(y, t) == pytest.approx(exact, abs=1e-9)


def test_accumulated_arg_tracks_through_branch_cut():
    # 100 small turns sum past pi without wrapping
    factors = np.exp(1j * np.full(100, 0.05))
    assert accumulated_arg(factors) == pytest.approx(5.0)


def test_accumulated_arg_resolution_error():
    with pytest.raises(ResolutionError):
        accumulated_arg(np.array([np.exp(2.0j)]))
    with pytest.raises(ResolutionError):
        accumulated_arg(np.array([0.0 + 0.0j]))
