"""Kernel, season indicator, and effective-season-length tests.

Reference values come from independent quadrature (scipy.integrate.quad
or dense trapezoid sums) of a locally defined bump profile, never from
the module under test.
"""

import numpy as np
import pytest
from scipy.integrate import quad, simpson

from seasonbifurc import KernelSpec, SeasonSchedule, kernel_eval, r_eps, season_indicators


def _bump_reference(x):
    """Unnormalized bump exp(-1/(1-4x^2)) on (-1/2, 1/2), written from scratch."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 0.5
    out[inside] = np.exp(-1.0 / (1.0 - 4.0 * x[inside] ** 2))
    return out


def _reference_normalization():
    mass, err = quad(lambda s: float(_bump_reference(s)), -0.5, 0.5, epsabs=1e-14, epsrel=1e-14)
    assert err < 1e-12
    return 1.0 / mass


def _kernel_reference(eps, s):
    """rho_eps(s) built only from the reference profile and quad."""
    return _reference_normalization() / eps * _bump_reference(np.asarray(s) / eps)


# ---------------------------------------------------------------------------
# KernelSpec


def test_normalization_matches_quadrature():
    spec = KernelSpec(0.1)
    assert spec.normalization == pytest.approx(_reference_normalization(), abs=1e-10)


def test_epsilon_validation():
    for bad in (-0.1, 1.0, 1.5, float("nan"), float("inf")):
        with pytest.raises(ValueError):
            KernelSpec(bad)
    assert KernelSpec(0.0).sharp
    assert not KernelSpec(0.999).sharp


def test_kernel_mass_is_one():
    # Trapezoid quadrature over the support at 10^4 nodes.
    for eps in (0.1, 0.05):
        kernel = KernelSpec(eps)
        s = np.linspace(-eps / 2, eps / 2, 10_000)
        mass = np.trapezoid(kernel_eval(kernel, s), s)
        assert mass == pytest.approx(1.0, abs=1e-8)


def test_kernel_vanishes_outside_support():
    kernel = KernelSpec(0.1)
    for s in (0.06, -0.06, 0.05, -0.05, 0.5, -3.0):
        assert kernel_eval(kernel, s) == 0.0


def test_kernel_even_and_nonnegative():
    kernel = KernelSpec(0.1)
    s = np.linspace(0.0, 0.06, 301)
    left = kernel_eval(kernel, -s)
    right = kernel_eval(kernel, s)
    assert np.array_equal(left, right)
    assert np.all(right >= 0.0)
    assert kernel_eval(kernel, 0.02) == kernel_eval(kernel, -0.02)


def test_kernel_eval_rejects_sharp():
    with pytest.raises(ValueError):
        kernel_eval(KernelSpec(0.0), 0.0)


def test_kernel_eval_scalar_and_array_forms():
    kernel = KernelSpec(0.2)
    pts = np.array([-0.3, -0.05, 0.0, 0.08, 0.3])
    vec = kernel_eval(kernel, pts)
    assert isinstance(vec, np.ndarray)
    scalars = [kernel_eval(kernel, float(p)) for p in pts]
    assert all(isinstance(v, float) for v in scalars)
    np.testing.assert_allclose(vec, scalars, rtol=0.0, atol=0.0)


def test_kernel_matches_reference_profile():
    kernel = KernelSpec(0.08)
    s = np.linspace(-0.05, 0.05, 401)
    np.testing.assert_allclose(
        kernel_eval(kernel, s), _kernel_reference(0.08, s), rtol=0.0, atol=1e-12
    )


# ---------------------------------------------------------------------------
# SeasonSchedule


def test_schedule_accepts_factories():
    sharp = SeasonSchedule.sharp(0.4)
    assert sharp.tau == 0.4
    assert sharp.epsilon == 0.0
    smooth = SeasonSchedule.mollified(0.4, 0.1)
    assert smooth.epsilon == 0.1
    assert smooth.kernel == KernelSpec(0.1)


def test_schedule_rejects_tau_outside_period():
    for bad in (-0.1, 1.2, float("nan")):
        with pytest.raises(ValueError):
            SeasonSchedule.sharp(bad)


def test_schedule_degenerate_sharp_endpoints_allowed():
    assert SeasonSchedule.sharp(0.0).tau == 0.0
    assert SeasonSchedule.sharp(1.0).tau == 1.0


def test_schedule_mollified_window_must_fit_inside_period():
    # The transition window (tau - eps/2, tau + eps/2) may not cross 0 or 1.
    for bad in (0.05, 0.95, 0.02, 0.99):
        with pytest.raises(ValueError):
            SeasonSchedule.mollified(bad, 0.1)
    assert SeasonSchedule.mollified(0.0501, 0.1).tau == 0.0501
    assert SeasonSchedule.mollified(0.9499, 0.1).tau == 0.9499


# ---------------------------------------------------------------------------
# season_indicators


def test_sharp_indicator_values():
    schedule = SeasonSchedule.sharp(0.4)
    assert season_indicators(schedule, 0.2) == (1.0, 0.0)
    assert season_indicators(schedule, 0.4) == (1.0, 0.0)
    assert season_indicators(schedule, 0.0) == (0.0, 1.0)
    assert season_indicators(schedule, 0.41) == (0.0, 1.0)
    assert season_indicators(schedule, 1.0) == (0.0, 1.0)


def test_sharp_indicator_array_form():
    schedule = SeasonSchedule.sharp(0.4)
    t = np.array([0.1, 0.4, 0.7])
    chi_g, chi_d = season_indicators(schedule, t)
    np.testing.assert_array_equal(chi_g, [1.0, 1.0, 0.0])
    np.testing.assert_array_equal(chi_d, [0.0, 0.0, 1.0])


def test_transition_midpoint_splits_evenly():
    # At t = tau exactly half the kernel mass has been crossed.
    schedule = SeasonSchedule.mollified(0.4, 0.1)
    chi_g, chi_d = season_indicators(schedule, 0.4)
    assert chi_g == pytest.approx(0.5, abs=1e-8)
    assert chi_g + chi_d == pytest.approx(1.0, abs=1e-10)


def test_partition_of_unity_away_from_period_boundary():
    for eps in (0.1, 0.05):
        schedule = SeasonSchedule.mollified(0.4, eps)
        t = np.linspace(eps / 2, 1.0 - eps / 2, 501)
        chi_g, chi_d = season_indicators(schedule, t)
        assert np.max(np.abs(chi_g + chi_d - 1.0)) <= 1e-10


def test_indicators_stay_in_unit_interval():
    schedule = SeasonSchedule.mollified(0.4, 0.1)
    t = np.linspace(0.0, 1.0, 2001)
    chi_g, chi_d = season_indicators(schedule, t)
    for chi in (chi_g, chi_d):
        assert np.all(chi >= -1e-12)
        assert np.all(chi <= 1.0 + 1e-12)


def test_smooth_indicators_match_quadrature_oracle():
    """chi_g(t) is the integral of rho_eps(t - s) over the growth season."""
    eps, tau = 0.1, 0.4
    schedule = SeasonSchedule.mollified(tau, eps)
    for t in (0.05, 0.36, 0.40, 0.43, 0.95):
        lo = max(0.0, t - eps / 2)
        hi = min(tau, t + eps / 2)
        expected = 0.0
        if hi > lo:
            expected, err = quad(
                lambda s: float(_kernel_reference(eps, t - s)),
                lo,
                hi,
                epsabs=1e-13,
                epsrel=1e-13,
            )
            assert err < 1e-11
        chi_g, _ = season_indicators(schedule, t)
        assert chi_g == pytest.approx(expected, abs=1e-10)


def test_indicator_l1_convergence_to_sharp():
    tau = 0.4
    sharp = SeasonSchedule.sharp(tau)
    t = np.linspace(0.0, 1.0, 20_001)
    chi_sharp, _ = season_indicators(sharp, t)
    gaps = []
    for eps in (0.2, 0.1, 0.05, 0.025):
        chi_eps, _ = season_indicators(SeasonSchedule.mollified(tau, eps), t)
        gaps.append(np.trapezoid(np.abs(chi_eps - chi_sharp), t))
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 0.01


# ---------------------------------------------------------------------------
# r_eps


def test_r_eps_sharp_is_identity():
    schedule = SeasonSchedule.sharp(0.5)
    assert r_eps(schedule, 0.37) == 0.37
    grid = np.linspace(0.0, 1.0, 11)
    np.testing.assert_array_equal(r_eps(schedule, grid), grid)


def test_r_eps_zero_argument():
    for eps in (0.0, 0.05, 0.1):
        schedule = SeasonSchedule.mollified(0.5, eps) if eps else SeasonSchedule.sharp(0.5)
        assert r_eps(schedule, 0.0) == 0.0


def test_r_eps_rejects_arguments_outside_unit_interval():
    schedule = SeasonSchedule.mollified(0.5, 0.05)
    for bad in (-0.01, 1.01):
        with pytest.raises(ValueError):
            r_eps(schedule, bad)
    assert r_eps(schedule, 1.0) <= 1.0


def test_r_eps_matches_double_quadrature():
    """Brute-force the defining double integral on a 10^6-node grid.

    Composite Simpson rather than trapezoid: the integrand is cut
    mid-support at t = 0, and the trapezoid boundary error alone would
    exceed the tolerance being verified.
    """
    cases = [(0.05, 0.5), (0.1, 0.3)]
    for eps, tau_arg in cases:
        s = np.linspace(0.0, tau_arg, 1001)
        t = np.linspace(0.0, 1.0, 1001)
        dens = _kernel_reference(eps, t[None, :] - s[:, None])
        inner = simpson(dens, x=t, axis=1)
        expected = simpson(inner, x=s)
        schedule = SeasonSchedule.mollified(0.5, eps)
        assert r_eps(schedule, tau_arg) == pytest.approx(expected, abs=1e-6)


def test_r_eps_equals_indicator_mass():
    # Fubini: r_eps(tau) is the time integral of chi_g over the period.
    eps, tau = 0.1, 0.4
    schedule = SeasonSchedule.mollified(tau, eps)
    t = np.linspace(0.0, 1.0, 40_001)
    chi_g, _ = season_indicators(schedule, t)
    assert r_eps(schedule, tau) == pytest.approx(np.trapezoid(chi_g, t), abs=1e-8)


def test_r_eps_strictly_increasing_on_grid():
    grid = np.linspace(0.0, 1.0, 1001)
    for eps in (0.0, 0.05, 0.2):
        schedule = SeasonSchedule.mollified(0.5, eps) if eps else SeasonSchedule.sharp(0.5)
        values = r_eps(schedule, grid)
        assert np.all(np.diff(values) > 0.0)


def test_r_eps_uniform_convergence_to_identity():
    grid = np.linspace(0.0, 1.0, 1001)
    sups = []
    for eps in (0.2, 0.1, 0.05, 0.025):
        schedule = SeasonSchedule.mollified(0.5, eps)
        sups.append(np.max(np.abs(r_eps(schedule, grid) - grid)))
    assert all(a > b for a, b in zip(sups, sups[1:]))
    assert sups[-1] < 0.01
