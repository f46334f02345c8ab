"""Tests of the closed-form reference layer itself.

These pin down the oracle formulas (thresholds, special values, reductions
to simpler cases) and confirm that the oracle/integrator comparison suite
passes end to end on a small sample.
"""

import numpy as np
import pytest

from seasonbifurc import (
    SeasonSchedule,
    coexistence_equilibrium,
    constant_orbit,
    cross_check_suite,
    find_equilibrium,
    integrate_variational,
    lv_fields,
    lv_malthus_model,
    monodromy_report,
    nondiagonal_fundamental_closed_form,
    period_map,
    sample_admissible_params,
    scalar_equilibrium_closed_form,
    trivial_floquet_closed_form,
)
from conftest import make_params

DT = 0.1 / 365.0


# ---------------------------------------------------------------------------
# Scalar closed form


def test_scalar_extinction_threshold():
    # Survival needs tau > mu/(alpha+mu) = 1/3 at these coefficients.
    at = scalar_equilibrium_closed_form(2.0, 1.0, 1.0, 1.0 / 3.0)
    assert at.extinct
    assert at.v0 == 0.0
    below = scalar_equilibrium_closed_form(2.0, 1.0, 1.0, 0.2)
    assert below.extinct and below.v0 == 0.0
    above = scalar_equilibrium_closed_form(2.0, 1.0, 1.0, 0.34)
    assert not above.extinct
    assert above.v0 > 0.0


def test_scalar_threshold_matches_vanishing_exponent():
    # Exactly at the threshold the fixed-point numerator exp(...) - 1 is 0,
    # so the closed form itself would return v0 = 0 as well.
    alpha, beta, mu = 1.7, 0.9, 1.1
    tau = mu / (alpha + mu)
    v0_formula = alpha * (np.exp(alpha * tau - mu * (1.0 - tau)) - 1.0) / (
        beta * (np.exp(alpha * tau) - 1.0)
    )
    assert v0_formula == pytest.approx(0.0, abs=1e-15)
    assert scalar_equilibrium_closed_form(alpha, beta, mu, tau).extinct


def test_scalar_growth_integral_closed_value():
    sol = scalar_equilibrium_closed_form(2.0, 1.0, 1.0, 0.6)
    # Season integral of the orbit equals (alpha tau - mu (1-tau)) / beta.
    assert sol.growth_integral() == pytest.approx(0.8, abs=1e-8)


def test_scalar_orbit_is_periodic_and_continuous():
    sol = scalar_equilibrium_closed_form(2.0, 1.0, 1.0, 0.7)
    assert sol.evaluate(0.0) == pytest.approx(sol.v0, abs=1e-15)
    assert sol.evaluate(1.0) == pytest.approx(sol.v0, abs=1e-12)
    left = sol.evaluate(sol.tau - 1e-12)
    right = sol.evaluate(sol.tau + 1e-12)
    assert left == pytest.approx(right, abs=1e-9)
    t = np.linspace(0.0, 1.0, 1001)
    assert np.all(sol.evaluate(t) > 0.0)


def test_scalar_fixed_point_confirmed_by_integrator():
    from seasonbifurc import LogisticMalthusParams, logistic_malthus_model, period_mesh

    schedule = SeasonSchedule.sharp(0.7)
    tau_eff = period_mesh(schedule, DT).effective_tau
    sol = scalar_equilibrium_closed_form(2.0, 1.0, 1.0, tau_eff)
    model = logistic_malthus_model(LogisticMalthusParams(r=2.0, mu=1.0, alpha=2.0, beta=1.0))
    image = period_map(model, schedule, np.array([sol.v0]), DT)
    assert image[0] == pytest.approx(sol.v0, abs=1e-7)


def test_scalar_rejects_bad_coefficients():
    with pytest.raises(ValueError):
        scalar_equilibrium_closed_form(0.0, 1.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        scalar_equilibrium_closed_form(1.0, 1.0, 1.0, 1.5)


# ---------------------------------------------------------------------------
# Trivial-orbit Floquet multipliers


def test_trivial_floquet_sharp_values():
    params = make_params()
    at_critical = trivial_floquet_closed_form(params, SeasonSchedule.sharp(1.0 / 3.0))
    np.testing.assert_allclose(at_critical, [1.0, np.exp(-1.0 / 3.0)], rtol=0.0, atol=1e-15)
    all_decline = trivial_floquet_closed_form(params, SeasonSchedule.sharp(0.0))
    np.testing.assert_allclose(all_decline, np.exp([-1.0, -1.0]), rtol=0.0, atol=1e-15)
    assert np.all(all_decline < 1.0)


def test_trivial_floquet_matches_variational_mollified(baseline_model):
    schedule = SeasonSchedule.mollified(0.4, 0.05)
    expected = trivial_floquet_closed_form(make_params(), schedule)
    zero = constant_orbit(schedule, DT, np.zeros(2))
    report = monodromy_report(baseline_model, schedule, zero)
    measured = np.sort(report.eigenvalues.real)[::-1]
    np.testing.assert_allclose(measured, np.sort(expected)[::-1], rtol=0.0, atol=1e-7)


# ---------------------------------------------------------------------------
# Coexistence point


def test_coexistence_baseline_value():
    np.testing.assert_allclose(
        coexistence_equilibrium(make_params()), [2.0, 0.5], rtol=0.0, atol=1e-14
    )


def test_coexistence_diagonal_competition():
    decoupled = make_params(beta_12=0.0, beta_21=0.0)
    point = coexistence_equilibrium(decoupled)
    np.testing.assert_allclose(point, [2.0, 1.0], rtol=0.0, atol=1e-14)


def test_coexistence_point_zeroes_growth_field():
    params = make_params(beta_12=0.5)
    point = coexistence_equilibrium(params)
    growth, _ = lv_fields(params, point)
    np.testing.assert_allclose(growth, [0.0, 0.0], rtol=0.0, atol=1e-12)


# ---------------------------------------------------------------------------
# Non-diagonal fundamental matrix


def _single_species_orbit(params, tau, dt=DT):
    model = lv_malthus_model(params)
    u0 = np.array([params.carrying_bounds[0] / 2.0, 0.0])
    return model, find_equilibrium(model, SeasonSchedule.sharp(tau), u0, dt, tol=1e-12)


def test_nondiagonal_closed_form_matches_variational():
    params = make_params(beta_12=0.25)
    model, orbit = _single_species_orbit(params, 0.5)
    assert orbit.converged
    closed = nondiagonal_fundamental_closed_form(params, orbit.schedule, orbit)
    numeric = integrate_variational(model, orbit.schedule, orbit)
    assert np.max(np.abs(closed.monodromy - numeric.monodromy)) < 1e-5
    np.testing.assert_array_equal(closed.matrices[:, 1, 0], 0.0)


def test_nondiagonal_reduces_to_diagonal_when_uncoupled():
    params = make_params(beta_12=0.0)
    _, orbit = _single_species_orbit(params, 0.5)
    closed = nondiagonal_fundamental_closed_form(params, orbit.schedule, orbit)
    np.testing.assert_array_equal(closed.matrices[:, 0, 1], 0.0)


def test_nondiagonal_zero_orbit_reduces_to_floquet():
    params = make_params(beta_12=0.25)
    schedule = SeasonSchedule.sharp(0.4)
    zero = constant_orbit(schedule, DT, np.zeros(2))
    closed = nondiagonal_fundamental_closed_form(params, schedule, zero)
    expected = trivial_floquet_closed_form(params, SeasonSchedule.sharp(zero.effective_tau))
    np.testing.assert_allclose(np.diag(closed.monodromy), expected, rtol=0.0, atol=1e-10)


def test_nondiagonal_rejects_two_species_orbit():
    params = make_params(beta_12=0.0)
    model = lv_malthus_model(params)
    orbit = find_equilibrium(
        model, SeasonSchedule.sharp(0.7), np.array([1.0, 0.25]), DT, tol=1e-10
    )
    assert np.max(orbit.states[:, 1]) > 1e-3
    with pytest.raises(ValueError):
        nondiagonal_fundamental_closed_form(params, orbit.schedule, orbit)


# ---------------------------------------------------------------------------
# Random admissible draws and the full comparison suite


def test_sample_admissible_params_is_reproducible_and_separated():
    draws = [sample_admissible_params(np.random.default_rng(5)) for _ in range(2)]
    np.testing.assert_array_equal(draws[0].beta, draws[1].beta)
    rng = np.random.default_rng(123)
    for _ in range(10):
        p = sample_admissible_params(rng)
        a1, a2 = p.alpha
        m1, m2 = p.mu
        b11, b21 = p.beta[0, 0], p.beta[1, 0]
        tau_primary = m1 / (a1 + m1)
        tau_secondary = (m2 * b11 - m1 * b21) / ((a2 + m2) * b11 - (a1 + m1) * b21)
        assert tau_primary + 0.05 < tau_secondary < 0.9


def test_cross_check_suite_small_sample_passes():
    results = cross_check_suite(random_draws=2, seed=7)
    assert len(results) > 0
    failures = [r for r in results if not r.passed]
    assert failures == []
    names = {r.name for r in results}
    assert "scalar_fixed_point" in names
    assert any("floquet" in n for n in names)


def test_check_result_row_formatting():
    results = cross_check_suite(random_draws=0)
    line = results[0].row()
    assert line.startswith("pass") or line.startswith("FAIL")
    assert "error=" in line and "tol=" in line
