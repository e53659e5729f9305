from fractions import Fraction

import pytest

from redlab.models import CycleListPoint, OpenInterval, PointX0, RunConfig
from redlab.reductions import gen_params


@pytest.fixture(scope="session")
def lp_schedule():
    return gen_params("lp", 1.5, 8, 0.5)


@pytest.fixture(scope="session")
def c0_schedule():
    return gen_params("c0", 1.5, 8, 0.5)


@pytest.fixture
def small_config():
    return RunConfig(seed=7, cases=6, samples=200, workers=2, n_max=6)


@pytest.fixture
def zero_point():
    return PointX0()


@pytest.fixture
def cycle_interval():
    return OpenInterval.above(Fraction(5, 4))


@pytest.fixture
def cycle_point(cycle_interval):
    return CycleListPoint(values=(Fraction(7, 4), Fraction(3, 2), Fraction(3, 2)), interval=cycle_interval)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: verification suites at their default case and sample counts")
