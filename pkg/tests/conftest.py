import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from nlsasym.data import InitialData
from nlsasym.rhp import local_params
from nlsasym.scattering import reflection_grid

settings.register_profile("default", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

Z_GRID = np.linspace(-6.0, 6.0, 601)


def scatter(family, amplitude, zs=Z_GRID, dx=0.01):
    return reflection_grid(InitialData(family, amplitude).sample(dx=dx), zs, tol=1e-10)


@pytest.fixture(scope="session")
def sech_sd():
    return scatter("sech", 0.5)


@pytest.fixture(scope="session")
def gauss_sd():
    return scatter("gaussian", 0.5)


@pytest.fixture(scope="session")
def zero_sd():
    return scatter("zero", 0.0)


@pytest.fixture(scope="session")
def sech_lp(sech_sd):
    return local_params(sech_sd, 0.3)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
