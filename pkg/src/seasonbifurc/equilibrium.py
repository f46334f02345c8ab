"""Periodic equilibria by forward iteration of the period map.

The period map sends an initial state to the state one period later.  Its
attracting fixed points are found by plain forward iteration, stopping
when consecutive periods agree in the L2(0, 1) norm below a tolerance.
This mirrors how the long-time behavior of the seasonal system is actually
observed: the iteration only ever finds stable equilibria, and the number
of periods needed is itself a diagnostic (it blows up near critical season
lengths).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .integrator import PeriodStepper
from .mollifier import SeasonSchedule
from .models import SeasonalModel

try:
    from ._fastpath import AVAILABLE as _HAVE_FAST
    from ._fastpath import l2_distance_sq as _l2_sq_fast
except ImportError:  # pragma: no cover
    _HAVE_FAST = False

__all__ = [
    "PeriodicOrbit",
    "period_map",
    "find_equilibrium",
    "l2_norm_component",
    "constant_orbit",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PeriodicOrbit:
    """One period of a (numerically) periodic solution on a uniform mesh.

    ``residual`` is the L2(0, 1) distance between the final two computed
    periods; ``iterations`` counts period-map applications.  The stored
    period runs from ``states[0]`` to ``states[-1]`` = period map of
    ``states[0]``, so ``endpoint_mismatch()`` doubles as a fixed-point
    certificate.
    """

    schedule: SeasonSchedule
    times: np.ndarray
    states: np.ndarray
    iterations: int
    converged: bool
    residual: float
    residual_history: np.ndarray = field(repr=False, default=None)
    effective_tau: float = None

    def __post_init__(self):
        if self.effective_tau is None:
            object.__setattr__(self, "effective_tau", self.schedule.tau)
        if self.residual_history is None:
            object.__setattr__(self, "residual_history", np.empty(0))

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0])

    def endpoint_mismatch(self) -> float:
        """Euclidean distance between the period's first and last states."""
        return float(np.linalg.norm(self.states[-1] - self.states[0]))


def _trapezoid_weights(times: np.ndarray) -> np.ndarray:
    w = np.empty_like(times)
    h = np.diff(times)
    w[0] = h[0] / 2
    w[-1] = h[-1] / 2
    w[1:-1] = (h[:-1] + h[1:]) / 2
    return w


def _l2_distance(weights, a, b) -> float:
    if _HAVE_FAST:
        return float(np.sqrt(_l2_sq_fast(weights, a, b)))
    d = a - b
    return float(np.sqrt(np.einsum("k,ki->", weights, d * d)))


def period_map(model: SeasonalModel, schedule: SeasonSchedule, u0, dt: float):
    """State one period after ``u0``."""
    stepper = PeriodStepper(model, schedule, dt)
    return stepper.run(u0)[-1].copy()


def find_equilibrium(
    model: SeasonalModel,
    schedule: SeasonSchedule,
    u0,
    dt: float = 0.1 / 365,
    tol: float = 1e-15,
    max_periods: int = 50000,
    stepper: PeriodStepper | None = None,
) -> PeriodicOrbit:
    """Iterate the period map from ``u0`` until consecutive periods agree.

    Parameters
    ----------
    model, schedule
        System definition.
    u0 : array_like
        Initial state, inside the model's box [0, K].
    dt : float
        Mesh step (snapped to an exact divisor of the period).
    tol : float
        Convergence threshold on the L2(0, 1) distance between consecutive
        periods.
    max_periods : int
        Iteration budget; at least 2.  When exhausted the orbit is returned
        with ``converged=False``, which is itself meaningful near critical
        season lengths where convergence slows down algebraically.
    stepper : PeriodStepper, optional
        Preconstructed stepper (must match model/schedule/dt); lets sweeps
        reuse the precomputed stage indicators.

    Returns
    -------
    PeriodicOrbit
    """
    if max_periods < 2:
        raise ValueError("max_periods must be at least 2")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if stepper is None:
        stepper = PeriodStepper(model, schedule, dt)
    weights = _trapezoid_weights(stepper.mesh.times)
    n = stepper.mesh.n_steps
    dim = model.dimension
    prev = stepper.run(u0, out=np.empty((n + 1, dim)))
    cur = np.empty((n + 1, dim))
    history = np.empty(max_periods)
    converged = False
    residual = np.inf
    iterations = 1
    for j in range(2, max_periods + 1):
        stepper.run(prev[-1], out=cur)
        residual = _l2_distance(weights, cur, prev)
        history[j - 2] = residual
        iterations = j
        prev, cur = cur, prev
        if residual < tol:
            converged = True
            break
    if not converged:
        logger.info(
            "period map not converged after %d periods (residual %.3e) at "
            "tau=%.6g, eps=%.3g",
            iterations,
            residual,
            schedule.tau,
            schedule.epsilon,
        )
    return PeriodicOrbit(
        schedule=schedule,
        times=stepper.mesh.times,
        states=prev.copy(),
        iterations=iterations,
        converged=converged,
        residual=float(residual),
        residual_history=history[: iterations - 1].copy(),
        effective_tau=stepper.mesh.effective_tau,
    )


def l2_norm_component(orbit, component: int) -> float:
    """L2(0, 1) norm of one solution component on the orbit's mesh."""
    y = np.asarray(orbit.states)[:, component]
    w = _trapezoid_weights(np.asarray(orbit.times, dtype=float))
    return float(np.sqrt(np.sum(w * y * y)))


def constant_orbit(schedule: SeasonSchedule, dt: float, state) -> PeriodicOrbit:
    """Wrap a constant state as a periodic orbit on the standard mesh.

    Useful for linearizing at the trivial (all-zero) equilibrium, where no
    iteration is needed.
    """
    from .integrator import period_mesh

    mesh = period_mesh(schedule, dt)
    state = np.asarray(state, dtype=float)
    states = np.tile(state, (mesh.n_steps + 1, 1))
    return PeriodicOrbit(
        schedule=schedule,
        times=mesh.times,
        states=states,
        iterations=0,
        converged=True,
        residual=0.0,
        effective_tau=mesh.effective_tau,
    )
