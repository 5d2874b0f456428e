"""Small numerical kernels shared by the evolution, phase and geometry code.

Angles, finite-difference derivatives of sampled state trajectories
(uniform or smoothly stretched grids, with optional twisted-periodic
wrap-around), trapezoid quadrature, and incremental argument tracking.
"""

from __future__ import annotations

from contextlib import contextmanager

import numpy as np
from threadpoolctl import threadpool_limits

from .errors import ResolutionError, StructuralError

TWO_PI = 2.0 * np.pi


@contextmanager
def blas_threads(n=1):
    """Cap BLAS thread pools inside long loops of small dense operations.

    At the matrix sizes used here (dim <= 200) multi-threaded BLAS loses
    badly to synchronization overhead; parallelism belongs at the
    scenario/sweep level instead.
    """
    with threadpool_limits(limits=n):
        yield


def wrap_angle(x):
    """Reduce an angle (or array of angles) to the interval (-pi, pi]."""
    return np.pi - (np.pi - np.asarray(x)) % TWO_PI


def angle_distance(a, b):
    """Distance between two angles on the circle, in [0, pi]."""
    return float(abs(wrap_angle(a - b)))


def fd_weights(x, x0, order):
    """Finite-difference weights on arbitrary nodes (Fornberg's algorithm).

    Args:
        x: 1-D array of distinct node positions.
        x0: evaluation point.
        order: derivative order m >= 0.

    Returns:
        weights w with sum_j w[j] f(x[j]) ~= f^(m)(x0).
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    if order >= n:
        raise StructuralError(f"need more than {order} nodes for order-{order} derivative")
    c = np.zeros((n, order + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = x[0] - x0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - x0
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def series_derivative(values, times, *, wrap_factor=None, stencil=5):
    """Differentiate a sampled trajectory values[k] ~ f(times[k]) in time.

    Uses Fornberg weights on a moving window, so non-uniform (smoothly
    reparametrized) grids keep full stencil accuracy.  When ``wrap_factor``
    is given the series is treated as twisted-periodic,
    f(t + T) = wrap_factor * f(t) with T = times[-1] - times[0] and
    values[-1] corresponding to values[0] * wrap_factor, which is exact for
    cyclic evolutions; otherwise one-sided windows are used at the ends.

    Args:
        values: array (N, ...) of samples (complex allowed).
        times: increasing array (N,).
        wrap_factor: complex scalar for twisted-periodic extension, or None.
        stencil: number of nodes per window (5 -> 4th order).

    Returns:
        array like ``values`` with d/dt estimates at each sample.
    """
    values = np.asarray(values)
    times = np.asarray(times, dtype=float)
    n = len(times)
    if values.shape[0] != n:
        raise StructuralError("values and times length mismatch")
    if n < stencil:
        raise StructuralError(f"need at least {stencil} samples")
    period = times[-1] - times[0]
    half = stencil // 2
    dts = np.diff(times)
    uniform = np.allclose(dts, dts[0], rtol=1e-12, atol=0.0)

    if wrap_factor is not None:
        # duplicate endpoint: samples 0..n-2 tile the period
        m = n - 1
        idx = np.arange(-half, m + half)
        phase = np.where(idx < 0, 1.0 / wrap_factor, 1.0) * np.where(
            idx >= m, wrap_factor, 1.0
        )
        t_ext = times[idx % m] + period * (idx // m)
        v_ext = values[idx % m] * phase.reshape((-1,) + (1,) * (values.ndim - 1))
        out = np.empty_like(values)
        if uniform:
            w0 = fd_weights(t_ext[0:stencil], times[0], 1)
            windows = np.stack([v_ext[k : k + m] for k in range(stencil)])
            out[:m] = np.tensordot(w0, windows, axes=(0, 0))
        else:
            for k in range(m):
                w = fd_weights(t_ext[k : k + stencil], times[k], 1)
                out[k] = np.tensordot(w, v_ext[k : k + stencil], axes=(0, 0))
        out[m] = out[0] * wrap_factor
        return out

    out = np.empty_like(values)
    for k in range(n):
        lo = min(max(k - half, 0), n - stencil)
        w = fd_weights(times[lo : lo + stencil], times[k], 1)
        out[k] = np.tensordot(w, values[lo : lo + stencil], axes=(0, 0))
    return out


def trapezoid(y, t):
    """Composite trapezoid of samples y over nodes t (complex-safe).

    For smooth integrands that are periodic over [t0, tN] (the usual case
    here: every integrand of a cyclic evolution) the closed-loop trapezoid
    rule converges spectrally, which is why no higher-order composite rule
    is needed on these grids.
    """
    y = np.asarray(y)
    t = np.asarray(t, dtype=float)
    return complex(np.trapezoid(y, t)) if np.iscomplexobj(y) else float(np.trapezoid(y, t))


def integrate_samples(y, t):
    """Integrate samples y(t) over the grid t.

    Uniform grids get the closed-loop trapezoid rule (spectrally accurate
    for the periodic integrands of cyclic evolutions); non-uniform grids
    (smoothly reparametrized records) get composite Simpson with explicit
    node positions.
    """
    from scipy.integrate import simpson

    y = np.asarray(y)
    t = np.asarray(t, dtype=float)
    dts = np.diff(t)
    if np.allclose(dts, dts[0], rtol=1e-12, atol=0.0):
        return trapezoid(y, t)
    if np.iscomplexobj(y):
        return complex(simpson(y.real, x=t)) + 1j * complex(simpson(y.imag, x=t))
    return float(simpson(y, x=t))


def accumulated_arg(factors, *, max_jump=np.pi / 2, context="phase links"):
    """Sum of arguments of a sequence of complex factors, tracked link by
    link so the total is a continuous representative (no branch cuts).

    Raises ResolutionError when a single link turns by more than
    ``max_jump``: the grid is then too coarse to unwrap trustworthily.
    """
    factors = np.asarray(factors, dtype=complex)
    if np.any(np.abs(factors) == 0.0):
        raise ResolutionError(f"{context}: vanishing overlap, cannot track the argument")
    args = np.angle(factors)
    worst = float(np.max(np.abs(args)))
    if worst > max_jump:
        raise ResolutionError(
            f"{context}: phase jump {worst:.3f} rad exceeds {max_jump:.3f} between samples; "
            "refine the grid"
        )
    return float(np.sum(args))
