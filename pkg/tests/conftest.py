import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from extgini.dataset import load_reference_dataset
from extgini.quadrature import QuadratureConfig

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GDP_VALUES = [
    127543.55, 114922.39, 74577.51, 49315.16, 31019.31, 29462.64, 27104.98, 19043.71, 19018.24,
    18692.38, 15783.11, 15294.26, 14472.32, 9843.97, 2791.06, 1616.92, 1402.47,
]


@pytest.fixture(scope="session")
def gdp():
    return load_reference_dataset().sample


@pytest.fixture
def quad():
    return QuadratureConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one PASS/FAIL line per acceptance criterion, shown in the terminal summary
_ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(code, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or rep.when not in ("setup", "call"):
        return
    if rep.when == "setup" and rep.passed:
        return
    code, title = marker.args
    detail = dict(item.user_properties).get("detail", "")
    _ACCEPTANCE[code] = (rep.passed, title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for code in sorted(_ACCEPTANCE, key=lambda c: int(c[1:])):
        passed, title, detail = _ACCEPTANCE[code]
        line = f"{code} {'PASS' if passed else 'FAIL'}  {title}"
        terminalreporter.write_line(f"{line}  [{detail}]" if detail else line)
