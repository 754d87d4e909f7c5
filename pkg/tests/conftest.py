import sys
import pytest
from hypothesis import HealthCheck, settings

from cobring.exactpoly import Truncation
from cobring.maps import map_suite

settings.register_profile(
    "cobring", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("cobring")


@pytest.fixture(scope="session")
def tr3():
    return Truncation(3)


@pytest.fixture(scope="session")
def tr5():
    return Truncation(5)


@pytest.fixture(scope="session")
def suite5(tr5):
    return map_suite(tr5)


@pytest.fixture(scope="session")
def suite3(tr3):
    return map_suite(tr3)


@pytest.fixture(scope="session")
def full_run():
    from cobring.certificate import CertificateConfig, run_certificate

    config = CertificateConfig(N=5, k_max=5)
    return config, run_certificate(config)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
