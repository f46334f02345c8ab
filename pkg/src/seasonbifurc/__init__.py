"""Numerics for seasonally switched ODE systems.

A year of unit length is split into a growth season (0, tau] and a
decline season (tau, 1], each with its own vector field; the switching
can be sharp or mollified by a smooth bump kernel of width eps.  The
package finds periodic equilibria of the resulting systems by period-map
iteration, analyzes their stability through Floquet multipliers of the
monodromy matrix, checks the classical bifurcation conditions along the
way, and locates the critical season lengths where extinction gives way
to single-species survival and then to coexistence.
"""

from .bifurcation import (
    ConditionDEstimate,
    CriticalParameter,
    DiagramRow,
    SolverSettings,
    default_tau_mesh,
    growth_integral_U,
    primary_tau,
    secondary_branch_approx,
    secondary_condition_d,
    secondary_tau_analytic,
    secondary_tau_scan,
    sweep_diagram,
)
from .equilibrium import (
    PeriodicOrbit,
    constant_orbit,
    find_equilibrium,
    l2_norm_component,
    period_map,
)
from .errors import ConfigError, IntegrationError, SeasonBifurcError
from .integrator import (
    FundamentalMatrixPath,
    PeriodStepper,
    Trajectory,
    integrate_horizon,
    integrate_period,
    integrate_variational,
    period_mesh,
    write_states_csv,
)
from .linearization import (
    MatrixPairAtState,
    MonodromyReport,
    TransversalityInconclusive,
    branch_tangent,
    build_H,
    dual_solution,
    matrix_pair_at_state,
    monodromy_report,
    transversality,
)
from .models import (
    AdmissibilityReport,
    LogisticMalthusParams,
    LVMalthusParams,
    SeasonalModel,
    check_admissibility,
    logistic_malthus_fields,
    logistic_malthus_model,
    lv_fields,
    lv_jacobians,
    lv_malthus_model,
    rhs_seasonal,
)
from .mollifier import (
    KernelSpec,
    SeasonSchedule,
    kernel_eval,
    r_eps,
    season_indicators,
)
from .oracles import (
    CheckResult,
    ScalarSeasonSolution,
    coexistence_equilibrium,
    cross_check_suite,
    nondiagonal_fundamental_closed_form,
    sample_admissible_params,
    scalar_equilibrium_closed_form,
    trivial_floquet_closed_form,
)

__version__ = "0.1.0"

__all__ = [
    "AdmissibilityReport",
    "CheckResult",
    "ConditionDEstimate",
    "ConfigError",
    "CriticalParameter",
    "DiagramRow",
    "FundamentalMatrixPath",
    "IntegrationError",
    "KernelSpec",
    "LVMalthusParams",
    "LogisticMalthusParams",
    "MatrixPairAtState",
    "MonodromyReport",
    "PeriodStepper",
    "PeriodicOrbit",
    "ScalarSeasonSolution",
    "SeasonBifurcError",
    "SeasonSchedule",
    "SeasonalModel",
    "SolverSettings",
    "Trajectory",
    "TransversalityInconclusive",
    "branch_tangent",
    "build_H",
    "check_admissibility",
    "coexistence_equilibrium",
    "constant_orbit",
    "cross_check_suite",
    "default_tau_mesh",
    "dual_solution",
    "find_equilibrium",
    "growth_integral_U",
    "integrate_horizon",
    "integrate_period",
    "integrate_variational",
    "kernel_eval",
    "l2_norm_component",
    "logistic_malthus_fields",
    "logistic_malthus_model",
    "lv_fields",
    "lv_jacobians",
    "lv_malthus_model",
    "matrix_pair_at_state",
    "monodromy_report",
    "nondiagonal_fundamental_closed_form",
    "period_map",
    "period_mesh",
    "primary_tau",
    "r_eps",
    "rhs_seasonal",
    "sample_admissible_params",
    "scalar_equilibrium_closed_form",
    "season_indicators",
    "secondary_branch_approx",
    "secondary_condition_d",
    "secondary_tau_analytic",
    "secondary_tau_scan",
    "sweep_diagram",
    "transversality",
    "trivial_floquet_closed_form",
    "write_states_csv",
]
