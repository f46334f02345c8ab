"""Season switching kernels and smoothed season indicators.

A period of unit length is split into a growth season ``(0, tau]`` and a
decline season ``(tau, 1]``.  The switch between them is either sharp
(``epsilon = 0``) or smeared over a window of width ``epsilon`` by a
compactly supported bump kernel.  This module owns the kernel itself, the
smoothed indicator functions of the two seasons, and the effective season
length ``r_eps`` that replaces ``tau`` in every closed-form criticality
formula once transitions are mollified.

The kernel profile is the standard bump

    rho(s) = C * exp(-1 / (1 - 4 s^2))   on (-1/2, 1/2),   rho = 0 outside,

with ``C`` chosen so that the profile integrates to one; the scaled kernel
is ``rho_eps(s) = rho(s / epsilon) / epsilon``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "KernelSpec",
    "SeasonSchedule",
    "kernel_eval",
    "season_indicators",
    "r_eps",
]

# Number of nodes in the tabulated antiderivatives of the unit profile.
_TABLE_NODES = 4096


def _bump_raw(x: np.ndarray) -> np.ndarray:
    """Unnormalized bump profile on (-1/2, 1/2), zero outside."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 0.5
    xi = x[inside]
    out[inside] = np.exp(-1.0 / (1.0 - 4.0 * xi * xi))
    return out


class _UnitBumpTables:
    """Cumulative antiderivatives of the unit bump, tabulated once.

    ``cdf`` holds P(x) = int_{-1/2}^x rho, ``moment`` holds
    int_{-1/2}^x u rho(u) du.  Both are evaluated by cubic Hermite
    interpolation; the node derivatives (rho and x rho) are known exactly,
    which makes the interpolation error O(h^4), i.e. ~1e-12 at this table
    size.  Per-cell integrals use 5-point Gauss-Legendre, so the table
    itself is accurate to machine precision.
    """

    def __init__(self, n_nodes: int = _TABLE_NODES):
        x = np.linspace(-0.5, 0.5, n_nodes)
        h = x[1] - x[0]
        gl_x, gl_w = np.polynomial.legendre.leggauss(5)
        mids = 0.5 * (x[:-1] + x[1:])
        pts = mids[:, None] + (0.5 * h) * gl_x[None, :]
        vals = _bump_raw(pts)
        cell_mass = vals @ gl_w * (0.5 * h)
        cell_moment = (pts * vals) @ gl_w * (0.5 * h)

        raw_total = float(np.sum(cell_mass))
        self.normalization = 1.0 / raw_total
        self.nodes = x
        self.step = h
        self.cdf = np.concatenate(([0.0], np.cumsum(cell_mass))) / raw_total
        self.cdf[-1] = 1.0
        self.cdf_deriv = _bump_raw(x) / raw_total
        self.moment = np.concatenate(([0.0], np.cumsum(cell_moment))) / raw_total
        self.moment_deriv = x * self.cdf_deriv

    def _hermite(self, values, derivs, y):
        pos = (y - self.nodes[0]) / self.step
        idx = np.clip(pos.astype(np.int64), 0, len(self.nodes) - 2)
        th = pos - idx
        om = 1.0 - th
        h00 = (1.0 + 2.0 * th) * om * om
        h10 = th * om * om
        h01 = th * th * (3.0 - 2.0 * th)
        h11 = th * th * (th - 1.0)
        return (
            h00 * values[idx]
            + h01 * values[idx + 1]
            + self.step * (h10 * derivs[idx] + h11 * derivs[idx + 1])
        )

    def cdf_at(self, y):
        """P(y), clamped to 0 below the support and 1 above it."""
        y = np.asarray(y, dtype=float)
        shape = y.shape
        y = np.atleast_1d(y)
        out = np.empty_like(y)
        lo = y <= -0.5
        hi = y >= 0.5
        mid = ~(lo | hi)
        out[lo] = 0.0
        out[hi] = 1.0
        out[mid] = self._hermite(self.cdf, self.cdf_deriv, y[mid])
        return out.reshape(shape)

    def cdf_antideriv_at(self, y):
        """Q(y) = int_{-1/2}^y P(u) du for y in [-1/2, 1/2]."""
        y = np.asarray(y, dtype=float)
        yc = np.clip(y, -0.5, 0.5)
        q = yc * self.cdf_at(yc) - self._hermite(self.moment, self.moment_deriv, yc)
        # Above the support P == 1, so Q continues linearly.
        return np.where(y > 0.5, q + (y - 0.5), q)


_tables_cache: _UnitBumpTables | None = None


def _tables() -> _UnitBumpTables:
    global _tables_cache
    if _tables_cache is None:
        _tables_cache = _UnitBumpTables()
    return _tables_cache


@dataclass(frozen=True)
class KernelSpec:
    """Mollifier choice for season transitions.

    Parameters
    ----------
    epsilon : float
        Transition width, ``0 <= epsilon < 1``.  ``epsilon = 0`` requests
        sharp switching; the kernel then has no density and
        :func:`kernel_eval` refuses to evaluate it.

    The ``normalization`` attribute holds the constant ``C`` of the unit
    profile (epsilon independent).
    """

    epsilon: float
    normalization: float = field(init=False, repr=False)

    def __post_init__(self):
        eps = float(self.epsilon)
        if not np.isfinite(eps) or eps < 0.0 or eps >= 1.0:
            raise ValueError(
                f"epsilon must lie in [0, 1), got {self.epsilon!r}"
            )
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "normalization", _tables().normalization)

    @property
    def sharp(self) -> bool:
        return self.epsilon == 0.0


@dataclass(frozen=True)
class SeasonSchedule:
    """Season split of the unit period: growth on (0, tau], decline after.

    For mollified schedules (``kernel.epsilon > 0``) the switch at ``tau``
    must sit far enough inside the period that the transition window does
    not cross the period boundary, i.e. ``epsilon/2 < tau < 1 - epsilon/2``.
    Sharp schedules accept the closed interval [0, 1]; the endpoints are
    the degenerate all-decline / all-growth seasons.
    """

    tau: float
    kernel: KernelSpec

    def __post_init__(self):
        tau = float(self.tau)
        eps = self.kernel.epsilon
        if not np.isfinite(tau):
            raise ValueError(f"tau must be finite, got {self.tau!r}")
        if eps == 0.0:
            if not 0.0 <= tau <= 1.0:
                raise ValueError(f"tau must lie in [0, 1], got {tau}")
        else:
            if not eps / 2 < tau < 1.0 - eps / 2:
                raise ValueError(
                    f"tau={tau} outside the admissible range "
                    f"({eps / 2}, {1 - eps / 2}) for epsilon={eps}; the "
                    "transition window may not cross the period boundary"
                )
        object.__setattr__(self, "tau", tau)

    @property
    def epsilon(self) -> float:
        return self.kernel.epsilon

    @classmethod
    def sharp(cls, tau: float) -> "SeasonSchedule":
        return cls(tau, KernelSpec(0.0))

    @classmethod
    def mollified(cls, tau: float, epsilon: float) -> "SeasonSchedule":
        return cls(tau, KernelSpec(epsilon))


def kernel_eval(kernel: KernelSpec, s):
    """Density of the scaled kernel, ``rho(s / epsilon) / epsilon``.

    Parameters
    ----------
    kernel : KernelSpec
        Must have ``epsilon > 0``.
    s : float or array_like
        Evaluation points.

    Returns
    -------
    float or ndarray
        Nonnegative values, zero outside ``(-epsilon/2, epsilon/2)``.
    """
    if kernel.sharp:
        raise ValueError("sharp kernel (epsilon = 0) has no density")
    s = np.asarray(s, dtype=float)
    scalar = s.ndim == 0
    out = kernel.normalization / kernel.epsilon * _bump_raw(s / kernel.epsilon)
    return float(out) if scalar else out


def season_indicators(schedule: SeasonSchedule, t):
    """Smoothed indicators (chi_g, chi_d) of the two seasons at time ``t``.

    ``t`` is interpreted on the single period [0, 1].  For a sharp schedule
    chi_g is the plain indicator of (0, tau].  For a mollified schedule

        chi_g(t) = int_0^tau rho_eps(t - s) ds,
        chi_d(t) = int_tau^1 rho_eps(t - s) ds,

    evaluated through the tabulated kernel antiderivative.  The two sum to
    one away from the period boundary (for t in [eps/2, 1 - eps/2]); close
    to the boundary part of the kernel mass falls outside the period and
    the sum drops below one, which is intentional.

    Returns a pair of floats for scalar ``t`` and a pair of arrays
    otherwise.
    """
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    tau = schedule.tau
    eps = schedule.epsilon
    if eps == 0.0:
        chi_g = ((t > 0.0) & (t <= tau)).astype(float)
        chi_d = 1.0 - chi_g
    else:
        tab = _tables()
        p_t = tab.cdf_at(t / eps)
        p_tau = tab.cdf_at((t - tau) / eps)
        p_one = tab.cdf_at((t - 1.0) / eps)
        chi_g = p_t - p_tau
        chi_d = p_tau - p_one
    if scalar:
        return float(chi_g), float(chi_d)
    return chi_g, chi_d


def _r_eps_kernel(kernel: KernelSpec, x):
    """Effective season length for a bare kernel; see :func:`r_eps`."""
    x = np.asarray(x, dtype=float)
    eps = kernel.epsilon
    if eps == 0.0:
        return x.copy()
    tab = _tables()
    half = eps / 2.0
    q0 = float(tab.cdf_antideriv_at(0.0))
    qh = float(tab.cdf_antideriv_at(0.5))
    ramp_in = eps * (qh - q0)

    out = np.empty_like(x)
    lo = x <= half
    hi = x >= 1.0 - half
    mid = ~(lo | hi)
    out[lo] = eps * (tab.cdf_antideriv_at(x[lo] / eps) - q0)
    out[mid] = ramp_in + (x[mid] - half)
    out[hi] = (
        ramp_in
        + (1.0 - eps)
        + eps * (qh - tab.cdf_antideriv_at((1.0 - x[hi]) / eps))
    )
    return out


def r_eps(schedule: SeasonSchedule, tau_arg):
    """Effective season length r_eps(tau_arg).

    Defined as the kernel mass that a growth season of length ``tau_arg``
    retains inside the unit period,

        r_eps(x) = int_0^x int_0^1 rho_eps(t - s) dt ds.

    It is the identity for sharp schedules, strictly increasing in general,
    and converges to the identity uniformly as epsilon -> 0.  The closed
    forms for critical season lengths and Floquet multipliers are all
    expressed through it.

    Parameters
    ----------
    schedule : SeasonSchedule
        Only the kernel part is used; the schedule's own ``tau`` does not
        enter.
    tau_arg : float or array_like in [0, 1]

    Returns
    -------
    float or ndarray
    """
    x = np.asarray(tau_arg, dtype=float)
    scalar = x.ndim == 0
    if np.any((x < -1e-12) | (x > 1.0 + 1e-12)):
        raise ValueError("tau_arg must lie in [0, 1]")
    x = np.clip(np.atleast_1d(x), 0.0, 1.0)
    out = _r_eps_kernel(schedule.kernel, x)
    return float(out[0]) if scalar else out
