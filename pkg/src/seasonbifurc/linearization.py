"""Monodromy analysis and bifurcation-condition checks along orbits.

Everything here works on the linearization of the seasonal system along a
stored orbit: the blended Jacobian H(t), the jump matrix A = Dfg - Dfd
that measures how different the two season fields are, Floquet multipliers
of the monodromy matrix G(1, 0), kernel vectors when a multiplier sits at
1, the adjoint (dual) solution, the transversality pairing that certifies
an eigenvalue actually crosses the unit circle, and first-order branch
tangents.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import SeasonBifurcError
from .equilibrium import PeriodicOrbit
from .integrator import (
    FundamentalMatrixPath,
    _variational_stages,
    integrate_variational,
    period_mesh,
)
from .mollifier import SeasonSchedule, kernel_eval, season_indicators
from .models import SeasonalModel

__all__ = [
    "MatrixPairAtState",
    "MonodromyReport",
    "TransversalityInconclusive",
    "matrix_pair_at_state",
    "build_H",
    "monodromy_report",
    "dual_solution",
    "transversality",
    "branch_tangent",
]


class TransversalityInconclusive(UserWarning):
    """Raised as a warning when the pairing is too close to zero to sign."""


def _normalize_kernel_vector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    for x in v:
        if abs(x) > 1e-12:
            if x < 0:
                v = -v
            break
    return v


@dataclass(frozen=True, eq=False)
class MatrixPairAtState:
    """Season Jacobians at a fixed state, plus their difference.

    ``A = growth_jac - decline_jac`` is the matrix paired with the kernel
    vectors in the transversality integral; ``H_eval(t)`` blends the two
    Jacobians with the season indicators at time ``t``.
    """

    schedule: SeasonSchedule
    growth_jac: np.ndarray
    decline_jac: np.ndarray
    A: np.ndarray

    def H_eval(self, t: float) -> np.ndarray:
        chi_g, chi_d = season_indicators(self.schedule, float(t))
        return chi_g * self.growth_jac + chi_d * self.decline_jac


def matrix_pair_at_state(
    model: SeasonalModel, schedule: SeasonSchedule, u
) -> MatrixPairAtState:
    u = np.asarray(u, dtype=float)
    jg = np.asarray(model.growth_jacobian(u), dtype=float)
    jd = np.asarray(model.decline_jacobian(u), dtype=float)
    return MatrixPairAtState(
        schedule=schedule, growth_jac=jg, decline_jac=jd, A=jg - jd
    )


def build_H(model: SeasonalModel, schedule: SeasonSchedule, u, t: float):
    """Linearization matrix Dfg(u)*chi_g(t) + Dfd(u)*chi_d(t)."""
    return matrix_pair_at_state(model, schedule, u).H_eval(t)


@dataclass(frozen=True, eq=False)
class MonodromyReport:
    """Floquet data of an orbit.

    ``eigenvalues`` are sorted by decreasing modulus (ties by decreasing
    real part).  ``phi0`` spans ker(I - G(1,0)) and ``phiR`` spans
    ker(I - G(1,0)^T); both are unit vectors with their first nonzero
    entry positive, and both are None unless exactly one multiplier lies
    within ``tol`` of 1.  ``path`` keeps the fundamental matrix G(t, 0)
    on the orbit mesh so downstream checks do not re-integrate.
    """

    monodromy: np.ndarray
    eigenvalues: np.ndarray
    unit_multiplier_count: int
    phi0: np.ndarray | None
    phiR: np.ndarray | None
    tol: float
    path: FundamentalMatrixPath = field(repr=False, default=None)

    @property
    def leading_multiplier(self) -> complex:
        return complex(self.eigenvalues[0])

    def summary(self, transversality_value: float | None = None) -> str:
        """Plain-text report (one key per line) for CLI output."""
        lines = []
        flat = " ".join(f"{x:+.12e}" for x in self.monodromy.ravel())
        lines.append(f"monodromy_row_major = {flat}")
        eigs = ", ".join(
            f"{z.real:+.12e}{z.imag:+.12e}j" for z in self.eigenvalues
        )
        lines.append(f"multipliers = {eigs}")
        lines.append(f"unit_multiplier_tol = {self.tol:g}")
        lines.append(f"unit_multiplier_count = {self.unit_multiplier_count}")
        for name, vec in (("phi0", self.phi0), ("phiR", self.phiR)):
            if vec is None:
                lines.append(f"{name} = undefined")
            else:
                lines.append(
                    f"{name} = " + " ".join(f"{x:+.12e}" for x in vec)
                )
        if transversality_value is not None:
            lines.append(f"transversality = {transversality_value:+.12e}")
        return "\n".join(lines)


def monodromy_report(
    model: SeasonalModel,
    schedule: SeasonSchedule,
    orbit,
    tol: float = 1e-6,
) -> MonodromyReport:
    """Integrate the variational problem along ``orbit`` and analyze G(1,0).

    Counts Floquet multipliers within ``tol`` of 1; when exactly one is
    found, extracts the kernel vectors of I - G(1,0) and of its transpose
    from the singular vectors of the smallest singular value.
    """
    path = integrate_variational(model, schedule, orbit)
    mono = path.monodromy.copy()
    try:
        eigs = np.linalg.eigvals(mono)
    except np.linalg.LinAlgError as exc:
        raise SeasonBifurcError(
            f"eigenvalue computation failed on the monodromy matrix: {exc}"
        ) from exc
    order = np.lexsort((-eigs.real, -np.abs(eigs)))
    eigs = eigs[order]
    count = int(np.count_nonzero(np.abs(eigs - 1.0) < tol))
    phi0 = phiR = None
    if count == 1:
        left, _, right_t = np.linalg.svd(np.eye(model.dimension) - mono)
        phi0 = _normalize_kernel_vector(right_t[-1])
        phiR = _normalize_kernel_vector(left[:, -1])
    return MonodromyReport(
        monodromy=mono,
        eigenvalues=eigs,
        unit_multiplier_count=count,
        phi0=phi0,
        phiR=phiR,
        tol=float(tol),
        path=path,
    )


def dual_solution(
    model: SeasonalModel, schedule: SeasonSchedule, orbit, phiR_terminal
) -> np.ndarray:
    """Adjoint solution Phi_R(t) with Phi_R(1) = ``phiR_terminal``.

    Integrates Phi' = -H(t)^T Phi backward from t=1 with the same
    fourth-order stepping and stage matrices as the forward variational
    solve, so Phi_R(t) agrees with G(1,t)^T phiR to integrator accuracy.
    Returns the per-node values aligned with ``orbit.times``.
    """
    times = np.asarray(orbit.times, dtype=float)
    states = np.asarray(orbit.states, dtype=float)
    n = len(times) - 1
    mesh = period_mesh(schedule, 1.0 / n)
    h = mesh.dt
    stages = list(_variational_stages(model, schedule, times, states, mesh))
    out = np.empty((n + 1, model.dimension))
    phi = np.asarray(phiR_terminal, dtype=float).copy()
    out[n] = phi
    for k in range(n - 1, -1, -1):
        h0, hm, h1 = stages[k]
        k1 = -(h1.T @ phi)
        k2 = -(hm.T @ (phi - 0.5 * h * k1))
        k3 = -(hm.T @ (phi - 0.5 * h * k2))
        k4 = -(h0.T @ (phi - h * k3))
        phi = phi - (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out[k] = phi
    return out


def transversality(
    model: SeasonalModel,
    schedule: SeasonSchedule,
    report: MonodromyReport,
    orbit,
) -> float:
    """Pairing that certifies the critical multiplier moves with tau.

    For a mollified schedule this is the quadrature of
    rho_eps(s - tau) * Phi_R(s) . A(u(s)) Phi_0(s) over one period, where
    Phi_0(t) = G(t,0) phi0 and Phi_R(t) = G(1,t)^T phiR.  For a sharp
    schedule the kernel collapses to a point mass and the integrand is
    evaluated at the switch node instead.  A nonzero value means the
    critical eigenvalue crosses 1 with nonzero speed; values below 1e-10
    in magnitude trigger a :class:`TransversalityInconclusive` warning.
    """
    if report.unit_multiplier_count != 1:
        raise SeasonBifurcError(
            "transversality needs a one-dimensional kernel; report has "
            f"unit_multiplier_count={report.unit_multiplier_count}"
        )
    path = report.path
    if path is None:
        path = integrate_variational(model, schedule, orbit)
    times = np.asarray(path.times, dtype=float)
    states = np.asarray(orbit.states, dtype=float)
    big_phi0 = path.matrices @ report.phi0
    big_phiR = dual_solution(model, schedule, orbit, report.phiR)
    pairing = np.empty(len(times))
    jg = model.growth_jacobian
    jd = model.decline_jacobian
    for k in range(len(times)):
        a = np.asarray(jg(states[k]), dtype=float) - np.asarray(
            jd(states[k]), dtype=float
        )
        pairing[k] = big_phiR[k] @ (a @ big_phi0[k])
    if schedule.epsilon == 0.0:
        k = int(round(path.effective_tau * (len(times) - 1)))
        value = float(pairing[k])
    else:
        weight = kernel_eval(schedule.kernel, times - schedule.tau)
        value = float(np.trapezoid(weight * pairing, times))
    if abs(value) < 1e-10:
        warnings.warn(
            f"transversality inconclusive: pairing {value:.3e} is below "
            "the 1e-10 resolution floor",
            TransversalityInconclusive,
            stacklevel=2,
        )
    return value


def branch_tangent(
    report: MonodromyReport,
    orbit: PeriodicOrbit,
    fundamental: FundamentalMatrixPath,
    s: float,
) -> PeriodicOrbit:
    """First-order approximation u(t) + s*G(t,0)phi0 of a bifurcating branch.

    The result reuses the orbit's mesh and is flagged unconverged: it is a
    tangent predictor, not a solution.  ``s = 0`` returns ``orbit`` itself.
    """
    if report.unit_multiplier_count != 1:
        raise SeasonBifurcError(
            "branch tangent needs a one-dimensional kernel; report has "
            f"unit_multiplier_count={report.unit_multiplier_count}"
        )
    if s == 0:
        return orbit
    big_phi0 = fundamental.matrices @ report.phi0
    states = np.asarray(orbit.states, dtype=float) + float(s) * big_phi0
    return PeriodicOrbit(
        schedule=orbit.schedule,
        times=np.asarray(orbit.times, dtype=float),
        states=states,
        iterations=orbit.iterations,
        converged=False,
        residual=float("inf"),
        effective_tau=orbit.effective_tau,
    )
