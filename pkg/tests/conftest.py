import sys

import pytest
from hypothesis import HealthCheck, settings

from otcert.jobspec import builtin
from otcert.numfield import NumberField
from otcert.units import make_ot_datum

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def _datum(name):
    spec = builtin(name)
    return make_ot_datum(spec.poly, spec.units, conjugate=spec.conjugate)


@pytest.fixture(scope="session")
def K3():
    return NumberField([-2, 0, 0, 1])


@pytest.fixture(scope="session")
def K6():
    return NumberField([-2, 0, 0, 0, 0, 0, 1])


@pytest.fixture(scope="session")
def inoue():
    return _datum("inoue")


@pytest.fixture(scope="session")
def ot6():
    return _datum("ot6")


@pytest.fixture(scope="session")
def ot6_primitive():
    return _datum("ot6-primitive")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = [mod.RESULTS[k] for k in sorted(mod.RESULTS)] if mod else []
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
