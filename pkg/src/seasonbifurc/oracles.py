"""Closed-form references for cross-checking the numerical machinery.

The scalar seasonal system and the trivial/single-species orbits of the
two-species system admit exact solutions (season-by-season integration of
logistic growth and exponential decline).  This module evaluates those
formulas so tests and the ``validate`` command can compare the generic
integrator, equilibrium solver, and variational solver against answers
obtained by a completely different route.

Derivation notes for the scalar closed form live in the README; the short
version: on the growth season v follows the logistic flow

    v(t) = alpha v0 e^{alpha t} / (alpha + beta v0 (e^{alpha t} - 1)),

on the decline season it decays as e^{-mu (t - tau)}, and imposing
v(1) = v(0) = v0 gives

    v0 = alpha (e^{alpha tau - mu (1 - tau)} - 1) / (beta (e^{alpha tau} - 1)),

which is positive exactly when tau > mu / (alpha + mu).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .integrator import FundamentalMatrixPath, period_mesh
from .mollifier import SeasonSchedule, r_eps, season_indicators
from .models import LVMalthusParams

__all__ = [
    "ScalarSeasonSolution",
    "scalar_equilibrium_closed_form",
    "trivial_floquet_closed_form",
    "coexistence_equilibrium",
    "nondiagonal_fundamental_closed_form",
    "sample_admissible_params",
    "CheckResult",
    "cross_check_suite",
]


@dataclass(frozen=True)
class ScalarSeasonSolution:
    """Exact periodic solution of the sharp scalar seasonal system.

    ``extinct`` marks season lengths at or below the survival threshold
    mu/(alpha+mu), where the only periodic solution is v = 0.
    """

    alpha: float
    beta: float
    mu: float
    tau: float
    v0: float
    extinct: bool

    def evaluate(self, t):
        """Periodic solution value at time t (vectorized, t in [0, 1])."""
        t = np.asarray(t, dtype=float)
        a, b, m, tau = self.alpha, self.beta, self.mu, self.tau
        grow = np.exp(a * np.minimum(t, tau))
        v_grow = a * self.v0 * grow / (a + b * self.v0 * (grow - 1.0))
        v_tau = a * self.v0 * np.exp(a * tau) / (
            a + b * self.v0 * (np.exp(a * tau) - 1.0)
        )
        out = np.where(t <= tau, v_grow, v_tau * np.exp(-m * (t - tau)))
        return float(out) if out.ndim == 0 else out

    def growth_integral(self) -> float:
        """Exact integral of v over the growth season (0, tau]."""
        a, b = self.alpha, self.beta
        return float(
            np.log((a + b * self.v0 * (np.exp(a * self.tau) - 1.0)) / a) / b
        )


def scalar_equilibrium_closed_form(
    alpha: float, beta: float, mu: float, tau: float
) -> ScalarSeasonSolution:
    """Periodic fixed point of the sharp scalar system, season by season.

    Returns the extinction solution (v0 = 0, ``extinct=True``) when tau is
    at or below mu/(alpha+mu); above it, v0 is positive and the evaluator
    reproduces the unique positive periodic orbit.
    """
    for name, val in (("alpha", alpha), ("beta", beta), ("mu", mu)):
        if not val > 0:
            raise ValueError(f"{name} must be positive, got {val!r}")
    if not 0 <= tau <= 1:
        raise ValueError(f"tau must lie in [0, 1], got {tau!r}")
    threshold = mu / (alpha + mu)
    if tau <= threshold:
        return ScalarSeasonSolution(alpha, beta, mu, tau, 0.0, True)
    v0 = (
        alpha
        * (np.exp(alpha * tau - mu * (1.0 - tau)) - 1.0)
        / (beta * (np.exp(alpha * tau) - 1.0))
    )
    return ScalarSeasonSolution(alpha, beta, mu, tau, float(v0), False)


def trivial_floquet_closed_form(
    params: LVMalthusParams, schedule: SeasonSchedule
) -> np.ndarray:
    """Floquet multipliers of the zero orbit, from the exponential form.

    The linearization at zero is diagonal, so the monodromy matrix is the
    exponential of the integrated diagonal and the multipliers are

        lambda_i = exp((alpha_i + mu_i) r_eps(tau) - mu_i r_eps(1)).
    """
    r_tau = r_eps(schedule, schedule.tau)
    r_one = r_eps(schedule, 1.0)
    return np.exp((params.alpha + params.mu) * r_tau - params.mu * r_one)


def coexistence_equilibrium(params: LVMalthusParams) -> np.ndarray:
    """Point where the growth field's interaction terms balance: beta u = alpha."""
    try:
        return np.linalg.solve(params.beta, params.alpha)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - params exclude this
        raise ValueError(f"singular competition matrix: {exc}") from exc


def _cumtrapz(y: np.ndarray, x: np.ndarray) -> np.ndarray:
    out = np.empty_like(y)
    out[0] = 0.0
    np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x), out=out[1:])
    return out


def _seasonal_cumulative(schedule, times, tau_index, grow_vals, decl_vals):
    """Cumulative integral of grow*chi_g + decl*chi_d along the mesh.

    Sharp schedules integrate each season separately up to / from the
    switch node, avoiding the O(dt) error a naive trapezoid rule commits
    at the jump; mollified schedules blend with the smooth indicators.
    """
    if schedule.epsilon == 0.0:
        k = tau_index
        out = np.empty_like(times)
        out[: k + 1] = _cumtrapz(grow_vals[: k + 1], times[: k + 1])
        out[k:] = out[k] + _cumtrapz(decl_vals[k:], times[k:])
        return out
    chi_g, chi_d = season_indicators(schedule, times)
    return _cumtrapz(grow_vals * chi_g + decl_vals * chi_d, times)


def nondiagonal_fundamental_closed_form(
    params: LVMalthusParams, schedule: SeasonSchedule, orbit
) -> FundamentalMatrixPath:
    """Fundamental matrix along a single-species orbit, via quadratures.

    On an orbit with u2 = 0 the linearization is upper triangular, so
    G(t, 0) has exponential diagonal entries and an explicit integral for
    the off-diagonal coupling:

        G_ii(t, 0) = exp(Hc_ii(t)),
        G_12(t, 0) = exp(Hc_11(t)) * int_0^t exp(Hc_22 - Hc_11) H_12 dz,
        G_21 = 0,

    with Hc the cumulative integral of the blended Jacobian and
    H_12(z) = -beta_12 u1(z) chi_g(z).  Everything is built from the
    stored orbit by composite trapezoid rules, independently of the
    variational integrator.
    """
    times = np.asarray(orbit.times, dtype=float)
    states = np.asarray(orbit.states, dtype=float)
    u1 = states[:, 0]
    u2_max = float(np.max(np.abs(states[:, 1])))
    if u2_max > 1e-8:
        raise ValueError(
            "closed-form fundamental matrix needs a single-species orbit; "
            f"max |u2| on the mesh is {u2_max:.3e}"
        )
    n = len(times) - 1
    mesh = period_mesh(schedule, 1.0 / n)
    a1, a2 = params.alpha
    m1, m2 = params.mu
    b11 = params.beta[0, 0]
    b12 = params.beta[0, 1]
    b21 = params.beta[1, 0]
    ones = np.ones_like(times)
    hc11 = _seasonal_cumulative(
        schedule, times, mesh.tau_index, a1 - 2.0 * b11 * u1, -m1 * ones
    )
    hc22 = _seasonal_cumulative(
        schedule, times, mesh.tau_index, a2 - b21 * u1, -m2 * ones
    )
    q = _seasonal_cumulative(
        schedule,
        times,
        mesh.tau_index,
        np.exp(hc22 - hc11) * (-b12 * u1),
        np.zeros_like(times),
    )
    g = np.zeros((n + 1, 2, 2))
    g[:, 0, 0] = np.exp(hc11)
    g[:, 1, 1] = np.exp(hc22)
    g[:, 0, 1] = g[:, 0, 0] * q
    return FundamentalMatrixPath(
        times=times, matrices=g, effective_tau=mesh.effective_tau
    )


def sample_admissible_params(rng: np.random.Generator) -> LVMalthusParams:
    """Draw random parameters satisfying every structural assumption.

    Beyond the coexistence inequalities enforced by
    :class:`~seasonbifurc.models.LVMalthusParams` itself, the draw keeps
    species 1 the faster grower (alpha_1/mu_1 well above alpha_2/mu_2, so
    kernels stay one-dimensional and species 1 bifurcates first) and
    rejects draws whose secondary critical value falls outside (0.1, 0.9)
    or too close to the primary one for a mesh scan to separate them.
    """
    for _ in range(1000):
        mu = rng.uniform(0.8, 1.2, size=2)
        a1 = rng.uniform(1.6, 2.6)
        a2 = rng.uniform(0.8, 1.2)
        if a1 / mu[0] < a2 / mu[1] + 0.4:
            continue
        b11 = rng.uniform(0.8, 1.25)
        b22 = rng.uniform(0.8, 1.25)
        b21 = rng.uniform(0.0, 0.85 * a2 * b11 / a1)
        b12 = rng.uniform(0.0, 0.85 * a1 * b22 / a2)
        num = mu[1] * b11 - mu[0] * b21
        den = (a2 + mu[1]) * b11 - (a1 + mu[0]) * b21
        if den <= 0 or num <= 0:
            continue
        tau_secondary = num / den
        tau_primary = mu[0] / (a1 + mu[0])
        if not tau_primary + 0.05 < tau_secondary < 0.9:
            continue
        return LVMalthusParams(
            alpha=np.array([a1, a2]),
            beta=np.array([[b11, b12], [b21, b22]]),
            mu=mu,
        )
    raise RuntimeError("parameter sampler failed to find an admissible draw")


@dataclass(frozen=True)
class CheckResult:
    """One oracle/numerics comparison: measured discrepancy vs tolerance."""

    name: str
    label: str
    error: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.error <= self.tol

    def row(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (
            f"{status}  {self.name:<28} {self.label:<24} "
            f"error={self.error:.3e}  tol={self.tol:.1e}"
        )


def _check_scalar_fixed_point(params, dt) -> list[CheckResult]:
    from .equilibrium import period_map
    from .models import LogisticMalthusParams, logistic_malthus_model

    a1, m1 = float(params.alpha[0]), float(params.mu[0])
    b11 = float(params.beta[0, 0])
    tau_raw = 0.5 * (m1 / (a1 + m1) + 1.0)
    mesh = period_mesh(SeasonSchedule.sharp(tau_raw), dt)
    tau = mesh.effective_tau
    sol = scalar_equilibrium_closed_form(a1, b11, m1, tau)
    scal = logistic_malthus_model(LogisticMalthusParams(r=a1, mu=m1, beta=b11))
    sched = SeasonSchedule.sharp(tau)
    mapped = period_map(scal, sched, np.array([sol.v0]), dt)
    err_fp = abs(float(mapped[0]) - sol.v0)
    u_exact = (a1 * tau - m1 * (1.0 - tau)) / b11
    err_u = abs(sol.growth_integral() - u_exact)
    below = scalar_equilibrium_closed_form(a1, b11, m1, m1 / (a1 + m1) - 1e-6)
    above = scalar_equilibrium_closed_form(a1, b11, m1, m1 / (a1 + m1) + 1e-6)
    err_thr = abs(below.v0) + (0.0 if above.v0 > 0 else 1.0)
    lbl = f"tau={tau:.4f}"
    return [
        CheckResult("scalar_fixed_point", lbl, err_fp, 1e-7),
        CheckResult("scalar_growth_integral", lbl, err_u, 1e-8),
        CheckResult("extinction_threshold", lbl, err_thr, 1e-12),
    ]


def _check_trivial_floquet(params, model, dt) -> list[CheckResult]:
    from .equilibrium import constant_orbit
    from .integrator import integrate_variational

    out = []
    for eps, tau in ((0.0, 0.45), (0.05, 0.45)):
        sched = (
            SeasonSchedule.sharp(tau)
            if eps == 0.0
            else SeasonSchedule.mollified(tau, eps)
        )
        orbit = constant_orbit(sched, dt, np.zeros(2))
        mono = integrate_variational(model, sched, orbit).monodromy
        sched_eff = (
            SeasonSchedule.sharp(orbit.effective_tau) if eps == 0.0 else sched
        )
        exact = trivial_floquet_closed_form(params, sched_eff)
        err = float(np.max(np.abs(np.sort(np.diag(mono)) - np.sort(exact))))
        out.append(
            CheckResult("trivial_floquet", f"eps={eps:g}", err, 1e-7)
        )
    return out


def _check_coexistence(params, model) -> list[CheckResult]:
    point = coexistence_equilibrium(params)
    growth = model.growth_field(point)
    err = float(np.max(np.abs(growth)))
    err_pos = 0.0 if np.all(point > 0) else 1.0
    return [
        CheckResult("coexistence_residual", "beta u = alpha", err, 1e-12),
        CheckResult("coexistence_positive", "beta u = alpha", err_pos, 0.5),
    ]


def _check_nondiagonal_fundamental(params, model, dt) -> list[CheckResult]:
    from .equilibrium import find_equilibrium
    from .integrator import integrate_variational

    a1, m1 = float(params.alpha[0]), float(params.mu[0])
    num = float(params.mu[1] * params.beta[0, 0] - params.mu[0] * params.beta[1, 0])
    den = float(
        (params.alpha[1] + params.mu[1]) * params.beta[0, 0]
        - (params.alpha[0] + params.mu[0]) * params.beta[1, 0]
    )
    tau_lo = m1 / (a1 + m1)
    tau_hi = num / den if den > 0 and 0 < num / den < 1 else 1.0
    tau = 0.5 * (tau_lo + min(tau_hi, 1.0))
    sched = SeasonSchedule.sharp(tau)
    u0 = np.array([0.5 * params.carrying_bounds[0], 0.0])
    orbit = find_equilibrium(
        model, sched, u0, dt=dt, tol=1e-12, max_periods=4000
    )
    exact = nondiagonal_fundamental_closed_form(params, sched, orbit)
    numeric = integrate_variational(model, sched, orbit)
    err = float(np.max(np.abs(exact.monodromy - numeric.monodromy)))
    return [
        CheckResult(
            "nondiagonal_fundamental", f"tau={orbit.effective_tau:.4f}", err, 1e-5
        )
    ]


def cross_check_suite(
    extra_params=(),
    random_draws: int = 20,
    seed: int = 2023,
    dt: float = 0.1 / 365,
) -> list[CheckResult]:
    """Run every oracle/integrator comparison; returns one result per check.

    The suite always covers the default parameter set, then
    ``random_draws`` seeded admissible draws, then anything passed in
    ``extra_params``.  All comparisons pit a closed-form quantity against
    its numerically integrated counterpart.
    """
    from .models import lv_malthus_model

    baseline = LVMalthusParams(
        alpha=np.array([2.0, 1.0]),
        beta=np.array([[1.0, 0.0], [0.25, 1.0]]),
        mu=np.array([1.0, 1.0]),
    )
    rng = np.random.default_rng(seed)
    param_sets = [("baseline", baseline)]
    for k in range(random_draws):
        param_sets.append((f"draw_{k:02d}", sample_admissible_params(rng)))
    for i, p in enumerate(extra_params):
        param_sets.append((f"extra_{i}", p))
    results: list[CheckResult] = []
    for label, params in param_sets:
        model = lv_malthus_model(params)
        for res in (
            _check_scalar_fixed_point(params, dt)
            + _check_trivial_floquet(params, model, dt)
            + _check_coexistence(params, model)
            + _check_nondiagonal_fundamental(params, model, dt)
        ):
            results.append(
                CheckResult(res.name, f"{label} {res.label}", res.error, res.tol)
            )
    return results
