"""Critical season lengths and bifurcation diagrams.

The season length tau is the bifurcation parameter throughout.  Two kinds
of critical values are located:

* primary: a Floquet multiplier of the trivial (extinction) orbit reaches
  1, solving r_eps(tau) = mu_i/(alpha_i+mu_i) * r_eps(1) per species;
* secondary: the single-species orbit born at the primary value loses
  stability against the other species, detected either by the closed-form
  sharp-season expression or by scanning the defining equation's residual
  over the sweep mesh.

Diagrams are built by running the equilibrium solver over a tau mesh and
recording per-component L2 norms, iteration counts, and the growth-season
integral of the first component (the quantity the secondary criterion
needs).
"""

from __future__ import annotations

import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .equilibrium import PeriodicOrbit, find_equilibrium, l2_norm_component
from .errors import SeasonBifurcError
from .linearization import build_H, dual_solution
from .mollifier import SeasonSchedule, r_eps, season_indicators
from .models import LVMalthusParams, lv_malthus_model
from .oracles import coexistence_equilibrium

__all__ = [
    "SolverSettings",
    "DiagramRow",
    "CriticalParameter",
    "ConditionDEstimate",
    "default_tau_mesh",
    "primary_tau",
    "sweep_diagram",
    "growth_integral_U",
    "secondary_tau_scan",
    "secondary_tau_analytic",
    "secondary_condition_d",
    "secondary_branch_approx",
]

logger = logging.getLogger(__name__)

_KINDS = ("primary", "secondary")
_METHODS = ("closed_form", "root_find", "mesh_scan")


@dataclass(frozen=True)
class SolverSettings:
    """Equilibrium-solver knobs shared by sweeps and critical-value scans.

    ``initial=None`` selects the default initial state, half the
    coexistence equilibrium of the growth field.
    """

    dt: float = 0.1 / 365
    tol: float = 1e-15
    max_periods: int = 50000
    initial: tuple[float, ...] | None = None

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if self.max_periods < 2:
            raise ValueError(
                f"max_periods must be at least 2, got {self.max_periods!r}"
            )


@dataclass(frozen=True)
class DiagramRow:
    """One sweep entry.  ``norms`` are per-component L2(0,1) norms.

    ``growth_integral`` and ``error`` are in-memory extras: the former
    feeds the secondary-value scan, the latter records a per-row failure
    message (the sweep keeps going).  Neither appears in the CSV schema.
    """

    tau: float
    norms: tuple[float, ...]
    iterations: int
    converged: bool
    growth_integral: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class CriticalParameter:
    """A located critical season length with its defining-equation residual."""

    kind: str
    tau_value: float
    method: str
    residual: float
    component: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"kind must be one of {_KINDS}, got {self.kind!r}")
        if self.method not in _METHODS:
            raise ValueError(
                f"method must be one of {_METHODS}, got {self.method!r}"
            )
        if not 0.0 < self.tau_value < 1.0:
            raise ValueError(
                f"critical tau must lie in (0, 1), got {self.tau_value!r}"
            )

    def describe(self) -> str:
        comp = "" if self.component is None else f" component={self.component + 1}"
        return (
            f"{self.kind} tau={self.tau_value:.12g} method={self.method} "
            f"residual={self.residual:.3e}{comp}"
        )


def default_tau_mesh(n: int = 365) -> np.ndarray:
    """The standard sweep mesh tau_k = k/n, k = 0..n."""
    return np.arange(n + 1) / n


def _make_schedule(tau: float, eps: float) -> SeasonSchedule:
    if eps == 0.0:
        return SeasonSchedule.sharp(tau)
    return SeasonSchedule.mollified(tau, eps)


def primary_tau(
    params: LVMalthusParams, eps: float = 0.0
) -> tuple[CriticalParameter, CriticalParameter]:
    """Critical season lengths where the trivial orbit loses stability.

    Solves r_eps(tau) = mu_i/(alpha_i+mu_i) * r_eps(1) for each species:
    in closed form for sharp seasons (r is the identity there) and by
    root bracketing on the strictly increasing r_eps otherwise.  The
    smaller of the two values is where the extinction state first
    destabilizes as tau grows.
    """
    ratios = params.alpha / params.mu
    if abs(ratios[0] - ratios[1]) <= 1e-12 * float(np.max(np.abs(ratios))):
        raise ValueError(
            "alpha_1/mu_1 and alpha_2/mu_2 must differ; equal ratios make "
            "both multipliers cross 1 together (two-dimensional kernel)"
        )
    out = []
    if eps == 0.0:
        for i in range(2):
            tau_i = float(params.mu[i] / (params.alpha[i] + params.mu[i]))
            out.append(
                CriticalParameter("primary", tau_i, "closed_form", 0.0, i)
            )
    else:
        carrier = SeasonSchedule.mollified(0.5, eps)
        r_one = r_eps(carrier, 1.0)
        for i in range(2):
            target = float(
                params.mu[i] / (params.alpha[i] + params.mu[i]) * r_one
            )
            root = brentq(
                lambda x: r_eps(carrier, x) - target, 0.0, 1.0, xtol=1e-14
            )
            resid = abs(r_eps(carrier, float(root)) - target)
            out.append(
                CriticalParameter("primary", float(root), "root_find", resid, i)
            )
    return tuple(out)


def _initial_state(params: LVMalthusParams, solver: SolverSettings) -> np.ndarray:
    if solver.initial is not None:
        u0 = np.asarray(solver.initial, dtype=float)
        if u0.shape != (2,):
            raise ValueError(f"initial state must have 2 entries, got {u0!r}")
        return u0
    return 0.5 * coexistence_equilibrium(params)


def _solve_row(job) -> DiagramRow:
    alpha, beta, mu, eps, tau, dt, tol, max_periods, initial = job
    params = LVMalthusParams(
        alpha=np.array(alpha), beta=np.array(beta), mu=np.array(mu)
    )
    model = lv_malthus_model(params)
    schedule = _make_schedule(tau, eps)
    try:
        orbit = find_equilibrium(
            model,
            schedule,
            np.array(initial),
            dt=dt,
            tol=tol,
            max_periods=max_periods,
        )
    except SeasonBifurcError as exc:
        logger.warning("sweep row tau=%.6g failed: %s", tau, exc)
        return DiagramRow(
            tau=float(tau),
            norms=(float("nan"), float("nan")),
            iterations=0,
            converged=False,
            error=str(exc),
        )
    return DiagramRow(
        tau=float(tau),
        norms=tuple(l2_norm_component(orbit, i) for i in range(2)),
        iterations=orbit.iterations,
        converged=orbit.converged,
        growth_integral=growth_integral_U(orbit, orbit.effective_tau),
    )


def sweep_diagram(
    params: LVMalthusParams,
    eps: float,
    tau_mesh,
    solver: SolverSettings = SolverSettings(),
    workers: int = 1,
    on_row=None,
) -> list[DiagramRow]:
    """Equilibrium solve at every mesh point; rows in mesh order.

    ``workers > 1`` dispatches rows to a process pool; results are
    identical to the serial run because rows are independent and are
    reassembled in mesh order.  ``on_row`` (if given) is called with each
    finished row, in order, which is how the CLI streams checkpoints.
    """
    tau_mesh = np.asarray(tau_mesh, dtype=float)
    if tau_mesh.ndim != 1 or tau_mesh.size < 1:
        raise ValueError("tau mesh must be a nonempty 1-d array")
    if tau_mesh.size > 1 and np.any(np.diff(tau_mesh) <= 0):
        raise ValueError("tau mesh must be strictly increasing")
    if eps == 0.0:
        if tau_mesh[0] < 0.0 or tau_mesh[-1] > 1.0:
            raise ValueError("tau mesh must lie inside [0, 1]")
    elif tau_mesh[0] <= eps / 2 or tau_mesh[-1] >= 1.0 - eps / 2:
        raise ValueError(
            f"tau mesh must lie inside (eps/2, 1 - eps/2) = "
            f"({eps / 2:g}, {1 - eps / 2:g}) for eps={eps:g}"
        )
    initial = tuple(float(x) for x in _initial_state(params, solver))
    jobs = [
        (
            tuple(params.alpha),
            tuple(map(tuple, params.beta)),
            tuple(params.mu),
            float(eps),
            float(t),
            solver.dt,
            solver.tol,
            solver.max_periods,
            initial,
        )
        for t in tau_mesh
    ]
    rows: list[DiagramRow] = []
    if workers <= 1:
        for job in jobs:
            row = _solve_row(job)
            rows.append(row)
            if on_row is not None:
                on_row(row)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for row in pool.map(_solve_row, jobs):
                rows.append(row)
                if on_row is not None:
                    on_row(row)
    return rows


def growth_integral_U(orbit: PeriodicOrbit, tau: float) -> float:
    """Integral of the first component over the growth season.

    Sharp schedules integrate u1 from 0 to the mesh node nearest ``tau``;
    mollified schedules weight u1 by the smooth growth indicator over the
    whole period, which reduces to the former as eps -> 0.
    """
    times = np.asarray(orbit.times, dtype=float)
    u1 = np.asarray(orbit.states, dtype=float)[:, 0]
    if orbit.schedule.epsilon == 0.0:
        n = len(times) - 1
        k = min(max(int(round(float(tau) * n)), 0), n)
        return float(np.trapezoid(u1[: k + 1], times[: k + 1]))
    chi_g, _ = season_indicators(orbit.schedule, times)
    return float(np.trapezoid(u1 * chi_g, times))


def secondary_tau_scan(
    params: LVMalthusParams,
    eps: float,
    rows: list[DiagramRow],
    residual_bound: float = 0.02,
) -> CriticalParameter | None:
    """Mesh point where the species-2 invasion criterion balances.

    Scans |(beta_21 U_n + mu_2 r_eps(1))/(alpha_2+mu_2) - r_eps(tau_n)|
    over the sweep rows and returns the minimizer.  Returns None (with a
    warning) when the smallest residual exceeds ``residual_bound``, which
    means no secondary crossing is present on the scanned range.
    """
    if not rows:
        raise ValueError("scan needs at least one diagram row")
    if any(r.growth_integral is None for r in rows):
        raise ValueError("scan rows must carry growth integrals")
    carrier = (
        SeasonSchedule.sharp(0.5)
        if eps == 0.0
        else SeasonSchedule.mollified(0.5, eps)
    )
    taus = np.array([r.tau for r in rows])
    big_u = np.array([r.growth_integral for r in rows])
    a2 = float(params.alpha[1])
    m2 = float(params.mu[1])
    b21 = float(params.beta[1, 0])
    r_one = r_eps(carrier, 1.0)
    r_vals = r_eps(carrier, taus)
    resid = np.abs((b21 * big_u + m2 * r_one) / (a2 + m2) - r_vals)
    idx = int(np.argmin(resid))
    if resid[idx] > residual_bound:
        warnings.warn(
            "no secondary crossing detected: minimal scan residual "
            f"{resid[idx]:.3e} exceeds the bound {residual_bound:.3e}",
            UserWarning,
            stacklevel=2,
        )
        return None
    return CriticalParameter(
        "secondary", float(taus[idx]), "mesh_scan", float(resid[idx])
    )


def secondary_tau_analytic(params: LVMalthusParams) -> CriticalParameter:
    """Sharp-season secondary critical value in closed form.

    On the single-species branch the growth integral is itself linear in
    tau, so the invasion criterion collapses to

        tau = (mu_2 b11 - mu_1 b21) / ((a2+m2) b11 - (a1+m1) b21).

    Requires mu_2 beta_11 != mu_1 beta_21 (otherwise the defining
    equation degenerates) and a result inside (0, 1).
    """
    a1, a2 = (float(x) for x in params.alpha)
    m1, m2 = (float(x) for x in params.mu)
    b11 = float(params.beta[0, 0])
    b21 = float(params.beta[1, 0])
    num = m2 * b11 - m1 * b21
    scale = max(abs(m2 * b11), abs(m1 * b21))
    if abs(num) <= 1e-14 * scale:
        raise ValueError(
            "secondary closed form degenerates when mu_2 beta_11 equals "
            f"mu_1 beta_21 (got {m2 * b11!r} vs {m1 * b21!r})"
        )
    den = (a2 + m2) * b11 - (a1 + m1) * b21
    tau = num / den
    if not 0.0 < tau < 1.0:
        raise ValueError(
            f"closed-form secondary value {tau!r} falls outside (0, 1); "
            "no admissible secondary crossing for these parameters"
        )
    return CriticalParameter("secondary", float(tau), "closed_form", 0.0)


@dataclass(frozen=True)
class ConditionDEstimate:
    """Finite-difference estimate of the branch-derivative pairing.

    The underlying matrix derivative along the branch has no closed form,
    so this is a numerical estimate only; ``caveat`` says so and
    ``delta_tau`` records the step actually used after mesh snapping.
    """

    value: float
    delta_tau: float
    caveat: str = "numerical-only"

    def __float__(self) -> float:
        return self.value


def secondary_condition_d(
    params: LVMalthusParams,
    schedule: SeasonSchedule,
    orbit_at_critical: PeriodicOrbit,
    report,
    delta_tau: float = 2.0 / 365.0,
    branch_pair: tuple[PeriodicOrbit, PeriodicOrbit] | None = None,
    solver: SolverSettings | None = None,
) -> ConditionDEstimate:
    """Quadrature of phi0^T G(1,t) B(t) G(t,0) phi0 with B from differences.

    B(t) approximates the tau-derivative of the linearization matrix along
    the single-species branch, built by central differences between the
    branch equilibria at tau +/- ``delta_tau`` (solved here unless
    ``branch_pair`` supplies them; both must live on the critical orbit's
    mesh).  A nonzero value indicates the critical multiplier leaves the
    unit circle with nonzero speed, which is what the observed change of
    stability at the secondary point requires.
    """
    if report.unit_multiplier_count != 1:
        raise SeasonBifurcError(
            "condition (d) needs a one-dimensional kernel; report has "
            f"unit_multiplier_count={report.unit_multiplier_count}"
        )
    model = lv_malthus_model(params)
    times = np.asarray(orbit_at_critical.times, dtype=float)
    n = len(times) - 1
    eps = schedule.epsilon
    if branch_pair is None:
        if solver is None:
            solver = SolverSettings(dt=1.0 / n, tol=1e-12, max_periods=20000)
        u0 = np.array([0.5 * float(params.carrying_bounds[0]), 0.0])
        lo = find_equilibrium(
            model,
            _make_schedule(schedule.tau - delta_tau, eps),
            u0,
            dt=solver.dt,
            tol=solver.tol,
            max_periods=solver.max_periods,
        )
        hi = find_equilibrium(
            model,
            _make_schedule(schedule.tau + delta_tau, eps),
            u0,
            dt=solver.dt,
            tol=solver.tol,
            max_periods=solver.max_periods,
        )
    else:
        lo, hi = branch_pair
    if len(lo.times) != len(times) or len(hi.times) != len(times):
        raise ValueError("branch orbits must share the critical orbit's mesh")
    half_step = 0.5 * (hi.effective_tau - lo.effective_tau)
    if not half_step > 0:
        raise ValueError(
            "branch orbits do not straddle the critical value after snapping"
        )
    sched_lo = _make_schedule(lo.effective_tau, eps)
    sched_hi = _make_schedule(hi.effective_tau, eps)
    path = report.path
    forward = path.matrices @ report.phi0
    backward = dual_solution(
        model, schedule, orbit_at_critical, np.asarray(report.phi0, float)
    )
    integrand = np.empty(n + 1)
    for k in range(n + 1):
        h_hi = build_H(model, sched_hi, hi.states[k], times[k])
        h_lo = build_H(model, sched_lo, lo.states[k], times[k])
        b = (h_hi - h_lo) / (2.0 * half_step)
        integrand[k] = backward[k] @ (b @ forward[k])
    value = float(np.trapezoid(integrand, times))
    return ConditionDEstimate(value=value, delta_tau=float(half_step))


def secondary_branch_approx(
    params: LVMalthusParams,
    schedule: SeasonSchedule,
    orbit_at_critical: PeriodicOrbit,
    report,
    sigma: float,
) -> PeriodicOrbit:
    """First-order secondary branch: orbit + sigma * G(t,0) phi0.

    The kernel vector is rescaled so its second component is 1, matching
    the convention that the new branch carries unit species-2 content at
    leading order; in the decoupled case the correction is then exactly
    (0, exp of the integrated species-2 linearization).
    """
    if report.unit_multiplier_count != 1:
        raise SeasonBifurcError(
            "branch approximation needs a one-dimensional kernel; report "
            f"has unit_multiplier_count={report.unit_multiplier_count}"
        )
    if sigma == 0:
        return orbit_at_critical
    phi = np.asarray(report.phi0, dtype=float)
    if abs(phi[1]) < 1e-10:
        raise SeasonBifurcError(
            "kernel vector has no species-2 content; this is not a "
            "secondary critical orbit"
        )
    phi = phi / phi[1]
    correction = report.path.matrices @ phi
    states = np.asarray(orbit_at_critical.states, dtype=float) + sigma * correction
    return PeriodicOrbit(
        schedule=orbit_at_critical.schedule,
        times=np.asarray(orbit_at_critical.times, dtype=float),
        states=states,
        iterations=orbit_at_critical.iterations,
        converged=False,
        residual=float("inf"),
        effective_tau=orbit_at_critical.effective_tau,
    )
