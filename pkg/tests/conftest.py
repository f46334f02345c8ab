import numpy as np
import pytest

from seasonbifurc import LVMalthusParams, lv_malthus_model


def make_params(beta_12=0.0, beta_21=0.25):
    """Reference two-species parameter set, with adjustable coupling."""
    return LVMalthusParams(
        alpha=np.array([2.0, 1.0]),
        beta=np.array([[1.0, beta_12], [beta_21, 1.0]]),
        mu=np.array([1.0, 1.0]),
    )


@pytest.fixture(scope="session")
def baseline_params():
    return make_params()


@pytest.fixture(scope="session")
def baseline_model(baseline_params):
    return lv_malthus_model(baseline_params)


# ---------------------------------------------------------------------------
# acceptance reporting: one line per criterion at the end of the run

_acceptance_outcomes = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        _acceptance_outcomes[name] = report.outcome
    elif report.when == "setup" and report.outcome != "passed":
        _acceptance_outcomes[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_acceptance_outcomes):
        outcome = _acceptance_outcomes[name]
        mark = "PASS" if outcome == "passed" else outcome.upper()
        terminalreporter.write_line(f"{mark}  {name}")
