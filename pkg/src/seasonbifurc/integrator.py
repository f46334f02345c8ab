"""Fixed-step RK4 time stepping for seasonal systems.

The integrator works on a uniform mesh over one period.  Two details
matter for correctness:

* With sharp switching the right-hand side jumps at ``tau``.  The switch
  is snapped to the nearest mesh node and the period is integrated as two
  smooth pieces, each using its own season's field at every RK4 stage, so
  the classical fourth order is retained.  The snapped value is reported
  on every result object.
* With mollified switching the right-hand side is smooth in time and the
  indicators are simply evaluated at the stage times.

Variational (linearized) solves reuse a stored orbit: stage states in the
interior of a step come from cubic Hermite interpolation with
season-consistent endpoint slopes, which keeps the fundamental matrix at
the same order as the orbit itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IntegrationError
from .mollifier import SeasonSchedule, season_indicators
from .models import SeasonalModel

try:
    from . import _fastpath

    _HAVE_FAST = _fastpath.AVAILABLE
except ImportError:  # pragma: no cover
    _HAVE_FAST = False

__all__ = [
    "Trajectory",
    "FundamentalMatrixPath",
    "PeriodMesh",
    "PeriodStepper",
    "period_mesh",
    "integrate_period",
    "integrate_horizon",
    "integrate_variational",
    "write_states_csv",
]

_FAST_KERNELS = {"lv2": "rk4_lv2_period", "scalar_lv": "rk4_scalar_period"}


@dataclass(frozen=True)
class PeriodMesh:
    """Uniform mesh over one period, with the snapped switch location."""

    n_steps: int
    dt: float
    times: np.ndarray
    tau_index: int | None
    effective_tau: float


@dataclass(frozen=True)
class Trajectory:
    """States sampled on a uniform mesh; may span several periods."""

    times: np.ndarray
    states: np.ndarray
    dt: float
    effective_tau: float

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]


@dataclass(frozen=True)
class FundamentalMatrixPath:
    """G(t, 0) of the linearized flow at every mesh node."""

    times: np.ndarray
    matrices: np.ndarray
    effective_tau: float

    @property
    def monodromy(self) -> np.ndarray:
        return self.matrices[-1]


def period_mesh(schedule: SeasonSchedule, dt: float) -> PeriodMesh:
    """Build the uniform period mesh, snapping dt and (if sharp) tau.

    ``dt`` is snapped to the nearest exact divisor 1/n of the period; for a
    sharp schedule ``tau`` is then snapped to the nearest node so that the
    switch falls on the mesh.
    """
    if not np.isfinite(dt) or dt <= 0 or dt > 0.5:
        raise ValueError(f"dt must lie in (0, 0.5], got {dt!r}")
    n = int(round(1.0 / dt))
    if abs(n * dt - 1.0) > 0.05:
        raise ValueError(
            f"dt={dt!r} is not close to an exact divisor of the unit period"
        )
    dt_eff = 1.0 / n
    times = np.arange(n + 1) / n
    if schedule.epsilon == 0.0:
        k = int(round(schedule.tau * n))
        k = min(max(k, 0), n)
        return PeriodMesh(n, dt_eff, times, k, k / n)
    return PeriodMesh(n, dt_eff, times, None, schedule.tau)


def _stage_indicators(schedule: SeasonSchedule, mesh: PeriodMesh):
    """Indicator values at the (left, mid, right) stage times of each step."""
    n = mesh.n_steps
    if schedule.epsilon == 0.0:
        cg = np.zeros(n)
        cg[: mesh.tau_index] = 1.0
        cd = 1.0 - cg
        return cg, cg, cg, cd, cd, cd
    t0 = mesh.times[:-1]
    tm = t0 + 0.5 * mesh.dt
    t1 = mesh.times[1:]
    cg0, cd0 = season_indicators(schedule, t0)
    cgm, cdm = season_indicators(schedule, tm)
    cg1, cd1 = season_indicators(schedule, t1)
    return cg0, cgm, cg1, cd0, cdm, cd1


class PeriodStepper:
    """Reusable one-period RK4 stepper for a fixed (model, schedule, dt).

    Stage indicator values are precomputed once, so iterating the period
    map (the expensive part of equilibrium searches) costs one kernel call
    per period.  The built-in families run through compiled kernels when
    numba is available; any model integrates through the generic path,
    selectable with ``force_generic`` for cross-checking.
    """

    def __init__(
        self,
        model: SeasonalModel,
        schedule: SeasonSchedule,
        dt: float,
        force_generic: bool = False,
    ):
        self.model = model
        self.schedule = schedule
        self.mesh = period_mesh(schedule, dt)
        self._chis = _stage_indicators(schedule, self.mesh)
        self._fast = None
        if not force_generic and _HAVE_FAST and model.fast_tag in _FAST_KERNELS:
            self._fast = getattr(_fastpath, _FAST_KERNELS[model.fast_tag])

    @property
    def times(self) -> np.ndarray:
        return self.mesh.times

    def run(self, u0, out: np.ndarray | None = None) -> np.ndarray:
        """Integrate one period from ``u0``; returns the (n+1, N) node states."""
        u0 = np.asarray(u0, dtype=float)
        if u0.shape != (self.model.dimension,):
            raise ValueError(
                f"initial state must have shape ({self.model.dimension},), "
                f"got {u0.shape}"
            )
        if not np.all(np.isfinite(u0)):
            raise ValueError(f"initial state must be finite, got {u0}")
        n = self.mesh.n_steps
        if out is None:
            out = np.empty((n + 1, self.model.dimension))
        if self._fast is not None:
            self._fast(u0, out, n, self.mesh.dt, *self._chis, self.model.fast_coeffs)
        else:
            self._run_generic(u0, out)
        if not np.all(np.isfinite(out)):
            bad = int(np.argwhere(~np.isfinite(out).all(axis=1))[0, 0])
            t_bad = float(self.mesh.times[bad])
            raise IntegrationError(
                f"non-finite state at t={t_bad:.6g} within the period", time=t_bad
            )
        return out

    def _run_generic(self, u0, out):
        fg = self.model.growth_field
        fd = self.model.decline_field
        cg0, cgm, cg1, cd0, cdm, cd1 = self._chis
        h = self.mesh.dt
        h2 = 0.5 * h
        h6 = h / 6.0
        u = u0.copy()
        out[0] = u
        # Overflow is detected on the stored states and raised as an
        # IntegrationError; silence the transient numpy warnings here.
        with np.errstate(over="ignore", invalid="ignore"):
            for k in range(self.mesh.n_steps):
                k1 = cg0[k] * fg(u) + cd0[k] * fd(u)
                p = u + h2 * k1
                k2 = cgm[k] * fg(p) + cdm[k] * fd(p)
                p = u + h2 * k2
                k3 = cgm[k] * fg(p) + cdm[k] * fd(p)
                p = u + h * k3
                k4 = cg1[k] * fg(p) + cd1[k] * fd(p)
                u = u + h6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                out[k + 1] = u


def integrate_period(
    model: SeasonalModel, schedule: SeasonSchedule, u0, dt: float
) -> Trajectory:
    """Integrate exactly one period and return the sampled trajectory."""
    stepper = PeriodStepper(model, schedule, dt)
    states = stepper.run(u0)
    return Trajectory(
        times=stepper.mesh.times,
        states=states,
        dt=stepper.mesh.dt,
        effective_tau=stepper.mesh.effective_tau,
    )


def integrate_horizon(
    model: SeasonalModel,
    schedule: SeasonSchedule,
    u0,
    n_periods: int,
    dt: float,
) -> Trajectory:
    """Integrate ``n_periods`` consecutive periods, storing every node.

    Memory grows linearly with the horizon (n_periods / dt nodes); for
    long equilibrium searches use
    :func:`seasonbifurc.equilibrium.find_equilibrium`, which keeps only two
    periods at a time.
    """
    if n_periods < 1:
        raise ValueError(f"n_periods must be positive, got {n_periods}")
    stepper = PeriodStepper(model, schedule, dt)
    n = stepper.mesh.n_steps
    states = np.empty((n_periods * n + 1, model.dimension))
    u = np.asarray(u0, dtype=float)
    for p in range(n_periods):
        block = stepper.run(u)
        states[p * n : (p + 1) * n + 1] = block
        u = block[-1]
    times = np.arange(n_periods * n + 1) / n
    return Trajectory(
        times=times,
        states=states,
        dt=stepper.mesh.dt,
        effective_tau=stepper.mesh.effective_tau,
    )


def _variational_stages(model, schedule, times, states, mesh):
    """Per-step (H0, Hm, H1) stage matrices along a stored orbit.

    Sharp schedules evaluate the active season's Jacobian at all three
    stages of a step (the mesh has a node at the switch, so every step lies
    in a single season); mollified schedules blend both Jacobians with the
    indicator stage values.  Midpoint states come from cubic Hermite
    interpolation, using season-consistent endpoint slopes.
    """
    n = mesh.n_steps
    jg = model.growth_jacobian
    jd = model.decline_jacobian
    fg = model.growth_field
    fd = model.decline_field
    h = mesh.dt
    sharp = schedule.epsilon == 0.0
    if not sharp:
        cg0, cgm, cg1, cd0, cdm, cd1 = _stage_indicators(schedule, mesh)
    for k in range(n):
        u0 = states[k]
        u1 = states[k + 1]
        if sharp:
            growth = k < mesh.tau_index
            f = fg if growth else fd
            j = jg if growth else jd
            um = 0.5 * (u0 + u1) + (h / 8.0) * (f(u0) - f(u1))
            yield j(u0), j(um), j(u1)
        else:
            m0 = cg0[k] * fg(u0) + cd0[k] * fd(u0)
            m1 = cg1[k] * fg(u1) + cd1[k] * fd(u1)
            um = 0.5 * (u0 + u1) + (h / 8.0) * (m0 - m1)
            h0 = cg0[k] * jg(u0) + cd0[k] * jd(u0)
            hm = cgm[k] * jg(um) + cdm[k] * jd(um)
            h1 = cg1[k] * jg(u1) + cd1[k] * jd(u1)
            yield h0, hm, h1


def integrate_variational(
    model: SeasonalModel, schedule: SeasonSchedule, orbit
) -> FundamentalMatrixPath:
    """Fundamental matrix G(t, 0) of the linearization along ``orbit``.

    Parameters
    ----------
    model, schedule
        The system the orbit belongs to.
    orbit
        Any object with ``times`` and ``states`` sampled on a period mesh
        (a :class:`Trajectory` over one period, or a periodic orbit).

    Returns
    -------
    FundamentalMatrixPath
        ``matrices[k]`` approximates G(times[k], 0); ``matrices[-1]`` is
        the monodromy matrix.
    """
    times = np.asarray(orbit.times, dtype=float)
    states = np.asarray(orbit.states, dtype=float)
    n = len(times) - 1
    if abs(times[-1] - 1.0) > 1e-12 or abs(times[0]) > 1e-12:
        raise ValueError("variational solve expects an orbit over one period")
    mesh = period_mesh(schedule, 1.0 / n)
    dim = model.dimension
    h = mesh.dt
    out = np.empty((n + 1, dim, dim))
    phi = np.eye(dim)
    out[0] = phi
    for k, (h0, hm, h1) in enumerate(
        _variational_stages(model, schedule, times, states, mesh)
    ):
        k1 = h0 @ phi
        k2 = hm @ (phi + 0.5 * h * k1)
        k3 = hm @ (phi + 0.5 * h * k2)
        k4 = h1 @ (phi + h * k3)
        phi = phi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k + 1] = phi
    if not np.all(np.isfinite(out)):
        raise IntegrationError("non-finite fundamental matrix")
    return FundamentalMatrixPath(
        times=times, matrices=out, effective_tau=mesh.effective_tau
    )


def write_states_csv(path, times, states, comments=()) -> None:
    """Write a (t, u_1..u_N) table as CSV with '#' comment header lines.

    Floats are rendered with repr-level precision so identical runs produce
    byte-identical files.
    """
    states = np.asarray(states)
    n_comp = states.shape[1]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write("t," + ",".join(f"u_{i + 1}" for i in range(n_comp)) + "\n")
        for t, row in zip(times, states):
            fh.write(
                repr(float(t)) + "," + ",".join(repr(float(x)) for x in row) + "\n"
            )
