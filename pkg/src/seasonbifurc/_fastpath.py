"""Compiled inner loops for the period map.

The bifurcation sweeps iterate the one-period flow tens of thousands of
times per season length, which is far too slow in interpreted Python.
These kernels reproduce, step for step, the classical RK4 scheme of the
generic stepper for the two built-in model families.  Season indicators
enter only through per-step stage values precomputed by the caller, so the
same kernels serve sharp and mollified schedules.

The module is optional: if numba is unavailable the integrator falls back
to the pure-numpy reference path.
"""

from __future__ import annotations

try:
    from numba import njit

    AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True)
def rk4_lv2_period(u0, out, n_steps, dt, cg0, cgm, cg1, cd0, cdm, cd1, coeffs):
    """One period of RK4 for the two-species family.

    ``coeffs`` packs (alpha1, alpha2, beta11, beta12, beta21, beta22,
    mu1, mu2); ``cg*``/``cd*`` hold the growth/decline indicator values at
    the left, middle and right stage times of each step.  Writes the
    ``n_steps + 1`` node states into ``out``.
    """
    a1 = coeffs[0]
    a2 = coeffs[1]
    b11 = coeffs[2]
    b12 = coeffs[3]
    b21 = coeffs[4]
    b22 = coeffs[5]
    m1 = coeffs[6]
    m2 = coeffs[7]
    x = u0[0]
    y = u0[1]
    out[0, 0] = x
    out[0, 1] = y
    h = dt
    h2 = 0.5 * dt
    h6 = dt / 6.0
    for k in range(n_steps):
        g0 = cg0[k]
        gm = cgm[k]
        g1 = cg1[k]
        d0 = cd0[k]
        dm = cdm[k]
        d1 = cd1[k]
        k1x = (x * (a1 - b11 * x - b12 * y)) * g0 - (m1 * x) * d0
        k1y = (y * (a2 - b21 * x - b22 * y)) * g0 - (m2 * y) * d0
        px = x + h2 * k1x
        py = y + h2 * k1y
        k2x = (px * (a1 - b11 * px - b12 * py)) * gm - (m1 * px) * dm
        k2y = (py * (a2 - b21 * px - b22 * py)) * gm - (m2 * py) * dm
        px = x + h2 * k2x
        py = y + h2 * k2y
        k3x = (px * (a1 - b11 * px - b12 * py)) * gm - (m1 * px) * dm
        k3y = (py * (a2 - b21 * px - b22 * py)) * gm - (m2 * py) * dm
        px = x + h * k3x
        py = y + h * k3y
        k4x = (px * (a1 - b11 * px - b12 * py)) * g1 - (m1 * px) * d1
        k4y = (py * (a2 - b21 * px - b22 * py)) * g1 - (m2 * py) * d1
        x = x + h6 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + h6 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        out[k + 1, 0] = x
        out[k + 1, 1] = y


@njit(cache=True)
def rk4_scalar_period(u0, out, n_steps, dt, cg0, cgm, cg1, cd0, cdm, cd1, coeffs):
    """One period of RK4 for the scalar family; coeffs = (alpha, beta, mu)."""
    a = coeffs[0]
    b = coeffs[1]
    m = coeffs[2]
    x = u0[0]
    out[0, 0] = x
    h = dt
    h2 = 0.5 * dt
    h6 = dt / 6.0
    for k in range(n_steps):
        k1 = (x * (a - b * x)) * cg0[k] - (m * x) * cd0[k]
        p = x + h2 * k1
        k2 = (p * (a - b * p)) * cgm[k] - (m * p) * cdm[k]
        p = x + h2 * k2
        k3 = (p * (a - b * p)) * cgm[k] - (m * p) * cdm[k]
        p = x + h * k3
        k4 = (p * (a - b * p)) * cg1[k] - (m * p) * cd1[k]
        x = x + h6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1, 0] = x


@njit(cache=True)
def l2_distance_sq(weights, a, b):
    """Trapezoid-weighted squared L2 distance between two node arrays."""
    total = 0.0
    for k in range(a.shape[0]):
        row = 0.0
        for i in range(a.shape[1]):
            d = a[k, i] - b[k, i]
            row += d * d
        total += weights[k] * row
    return total
