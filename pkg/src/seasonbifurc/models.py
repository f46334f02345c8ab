"""Seasonal vector fields and the concrete model families.

A seasonal system is a pair of autonomous fields: a growth field active on
(0, tau] and a decline field active on (tau, 1], blended by the season
indicators of a :class:`~seasonbifurc.mollifier.SeasonSchedule`.  Two
concrete families are provided:

* two-species competitive Lotka-Volterra growth against Malthusian decline
  (:class:`LVMalthusParams`), the workhorse for the bifurcation analysis;
* scalar logistic growth against Malthusian decline
  (:class:`LogisticMalthusParams`), which admits closed-form periodic
  solutions and serves as an oracle.

Admissibility in the sense used here means both fields point inward on the
faces of the box [0, K], which keeps every trajectory started in the box
inside it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .mollifier import SeasonSchedule, season_indicators

__all__ = [
    "LVMalthusParams",
    "LogisticMalthusParams",
    "SeasonalModel",
    "AdmissibilityReport",
    "lv_fields",
    "lv_jacobians",
    "logistic_malthus_fields",
    "lv_malthus_model",
    "logistic_malthus_model",
    "rhs_seasonal",
    "check_admissibility",
]


def _as_readonly(a, shape, name):
    arr = np.array(a, dtype=float).reshape(shape)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite, got {a!r}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class LVMalthusParams:
    """Two-species competitive Lotka-Volterra growth, Malthusian decline.

    Growth field:  f_i = u_i (alpha_i - beta_i1 u_1 - beta_i2 u_2),
    decline field: f_i = -mu_i u_i.

    Construction enforces the coexistence conditions that make the
    only-growth system admit a stable interior equilibrium:

    * alpha_i > 0, mu_i > 0, beta_ii > 0, beta_ij >= 0;
    * beta_11 beta_22 > beta_12 beta_21;
    * beta_ii alpha_j > beta_ji alpha_i for i != j.
    """

    alpha: np.ndarray
    beta: np.ndarray
    mu: np.ndarray

    def __post_init__(self):
        alpha = _as_readonly(self.alpha, (2,), "alpha")
        beta = _as_readonly(self.beta, (2, 2), "beta")
        mu = _as_readonly(self.mu, (2,), "mu")
        if np.any(alpha <= 0):
            raise ValueError(f"growth rates alpha must be positive, got {alpha}")
        if np.any(mu <= 0):
            raise ValueError(f"decline rates mu must be positive, got {mu}")
        if beta[0, 0] <= 0 or beta[1, 1] <= 0:
            raise ValueError(f"self-competition beta_ii must be positive, got {beta}")
        if beta[0, 1] < 0 or beta[1, 0] < 0:
            raise ValueError(f"cross-competition beta_ij must be nonnegative, got {beta}")
        if not beta[0, 0] * beta[1, 1] > beta[0, 1] * beta[1, 0]:
            raise ValueError(
                "coexistence requires beta_11 beta_22 > beta_12 beta_21, got "
                f"{beta[0, 0] * beta[1, 1]} <= {beta[0, 1] * beta[1, 0]}"
            )
        if not beta[0, 0] * alpha[1] > beta[1, 0] * alpha[0]:
            raise ValueError(
                "coexistence requires beta_11 alpha_2 > beta_21 alpha_1, got "
                f"{beta[0, 0] * alpha[1]} <= {beta[1, 0] * alpha[0]}"
            )
        if not beta[1, 1] * alpha[0] > beta[0, 1] * alpha[1]:
            raise ValueError(
                "coexistence requires beta_22 alpha_1 > beta_12 alpha_2, got "
                f"{beta[1, 1] * alpha[0]} <= {beta[0, 1] * alpha[1]}"
            )
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "mu", mu)

    @property
    def carrying_bounds(self) -> np.ndarray:
        """Per-species box bound K_i = alpha_i / beta_ii."""
        return self.alpha / np.diag(self.beta)


@dataclass(frozen=True, eq=False)
class LogisticMalthusParams:
    """Scalar logistic growth against Malthusian decline.

    With the defaults the growth field is the classical ``r u (1 - u)``.
    Passing ``alpha``/``beta`` explicitly selects the general scalar form
    ``u (alpha - beta u)`` (carrying capacity alpha/beta), which is the
    single-species restriction of the two-species family.
    """

    r: float
    mu: float
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self):
        r = float(self.r)
        mu = float(self.mu)
        alpha = r if self.alpha is None else float(self.alpha)
        beta = r if self.beta is None else float(self.beta)
        for name, val in (("r", r), ("mu", mu), ("alpha", alpha), ("beta", beta)):
            if not np.isfinite(val) or val <= 0:
                raise ValueError(f"{name} must be a positive real, got {val!r}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def carrying_bound(self) -> float:
        return self.alpha / self.beta


@dataclass(frozen=True, eq=False)
class SeasonalModel:
    """Bundle of growth/decline fields, their Jacobians and a box bound.

    ``fast_tag``/``fast_coeffs`` are optional hints that let the integrator
    dispatch to a compiled kernel for the built-in families; custom models
    leave them unset and take the generic path.
    """

    dimension: int
    growth_field: Callable[[np.ndarray], np.ndarray]
    decline_field: Callable[[np.ndarray], np.ndarray]
    growth_jacobian: Callable[[np.ndarray], np.ndarray]
    decline_jacobian: Callable[[np.ndarray], np.ndarray]
    bound: np.ndarray
    label: str = "custom"
    params: Any = None
    fast_tag: str | None = None
    fast_coeffs: np.ndarray | None = None

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be at least 1")
        bound = _as_readonly(self.bound, (self.dimension,), "bound")
        if np.any(bound <= 0):
            raise ValueError(f"box bound must be positive, got {bound}")
        object.__setattr__(self, "bound", bound)


def lv_fields(params: LVMalthusParams, u) -> tuple[np.ndarray, np.ndarray]:
    """Growth and decline field values at state ``u``."""
    u = np.asarray(u, dtype=float)
    growth = u * (params.alpha - params.beta @ u)
    decline = -params.mu * u
    return growth, decline


def lv_jacobians(params: LVMalthusParams, u) -> tuple[np.ndarray, np.ndarray]:
    """Jacobians of the two fields at state ``u``.

    The growth Jacobian is ``diag(alpha - beta u) - diag(u) beta`` written
    out entrywise; the decline Jacobian is the constant ``-diag(mu)``.
    """
    u = np.asarray(u, dtype=float)
    a, b = params.alpha, params.beta
    jg = np.array(
        [
            [a[0] - 2 * b[0, 0] * u[0] - b[0, 1] * u[1], -b[0, 1] * u[0]],
            [-b[1, 0] * u[1], a[1] - b[1, 0] * u[0] - 2 * b[1, 1] * u[1]],
        ]
    )
    jd = np.diag(-params.mu)
    return jg, jd


def logistic_malthus_fields(params: LogisticMalthusParams, u):
    """Field values of the scalar family; accepts scalars or length-1 arrays."""
    arr = np.asarray(u, dtype=float)
    growth = arr * (params.alpha - params.beta * arr)
    decline = -params.mu * arr
    if arr.ndim == 0:
        return float(growth), float(decline)
    return growth, decline


def lv_malthus_model(params: LVMalthusParams) -> SeasonalModel:
    """Build the two-species seasonal model from its parameters."""
    a, b, m = params.alpha, params.beta, params.mu

    def growth(u):
        return u * (a - b @ u)

    def decline(u):
        return -m * u

    def growth_jac(u):
        return lv_jacobians(params, u)[0]

    jd = np.diag(-m)
    jd.setflags(write=False)

    def decline_jac(u):
        return jd

    coeffs = np.array([a[0], a[1], b[0, 0], b[0, 1], b[1, 0], b[1, 1], m[0], m[1]])
    return SeasonalModel(
        dimension=2,
        growth_field=growth,
        decline_field=decline,
        growth_jacobian=growth_jac,
        decline_jacobian=decline_jac,
        bound=params.carrying_bounds,
        label="lv-malthus",
        params=params,
        fast_tag="lv2",
        fast_coeffs=coeffs,
    )


def logistic_malthus_model(params: LogisticMalthusParams) -> SeasonalModel:
    """Build the scalar seasonal model from its parameters."""
    alpha, beta, mu = params.alpha, params.beta, params.mu

    def growth(u):
        return u * (alpha - beta * u)

    def decline(u):
        return -mu * u

    def growth_jac(u):
        return np.array([[alpha - 2.0 * beta * u[0]]])

    jd = np.array([[-mu]])
    jd.setflags(write=False)

    def decline_jac(u):
        return jd

    return SeasonalModel(
        dimension=1,
        growth_field=growth,
        decline_field=decline,
        growth_jacobian=growth_jac,
        decline_jacobian=decline_jac,
        bound=np.array([params.carrying_bound]),
        label="logistic-malthus",
        params=params,
        fast_tag="scalar_lv",
        fast_coeffs=np.array([alpha, beta, mu]),
    )


def rhs_seasonal(model: SeasonalModel, schedule: SeasonSchedule, t, u) -> np.ndarray:
    """Right-hand side of the seasonal system at time ``t`` and state ``u``.

    ``t`` is reduced modulo the unit period before the indicators are
    evaluated.  Note that with sharp switching the value exactly at the
    switch belongs to the decline side (the growth season is the half-open
    (0, tau]); the time stepper never samples across the switch because it
    splits the period there.
    """
    u = np.asarray(u, dtype=float)
    chi_g, chi_d = season_indicators(schedule, float(t) % 1.0)
    return chi_g * model.growth_field(u) + chi_d * model.decline_field(u)


@dataclass(frozen=True)
class AdmissibilityReport:
    """Outcome of the inward-pointing check on the box faces."""

    ok: bool
    n_samples: int
    worst_margin: float
    violation: str | None = None


def check_admissibility(
    model: SeasonalModel,
    samples: int = 256,
    seed: int = 0,
    slack: float = 1e-9,
) -> AdmissibilityReport:
    """Sample the faces of [0, K] and check both fields point inward.

    On a face ``u_i = 0`` both fields must have nonnegative i-th component;
    on ``u_i = K_i`` both must be nonpositive.  ``slack`` absorbs floating
    point noise.  Returns a report rather than raising, so callers can
    decide how strict to be.
    """
    rng = np.random.default_rng(seed)
    n = model.dimension
    bound = model.bound
    worst = np.inf
    violation = None
    checked = 0
    for i in range(n):
        for side, value, sign in (("lower", 0.0, 1.0), ("upper", bound[i], -1.0)):
            pts = rng.uniform(0.0, 1.0, size=(samples, n)) * bound
            pts[:, i] = value
            for u in pts:
                g = np.asarray(model.growth_field(u), dtype=float)
                d = np.asarray(model.decline_field(u), dtype=float)
                margin = min(sign * g[i], sign * d[i])
                checked += 1
                worst = min(worst, margin)
                if margin < -slack and violation is None:
                    violation = (
                        f"component {i} on the {side} face at u={u}: "
                        f"growth={g[i]:.3e}, decline={d[i]:.3e}"
                    )
    return AdmissibilityReport(
        ok=violation is None,
        n_samples=checked,
        worst_margin=float(worst),
        violation=violation,
    )
