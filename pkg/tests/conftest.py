import os
import sys

import pytest
from hypothesis import HealthCheck, settings

from trimanifold import minimal_triangulation

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def sphere():
    return minimal_triangulation("S2")


@pytest.fixture(scope="session")
def torus():
    return minimal_triangulation("T2")


@pytest.fixture(scope="session")
def rp2():
    return minimal_triangulation("RP2")


@pytest.fixture(scope="session")
def sphere3():
    return minimal_triangulation("S3")


SEED_NAMES = ("S2", "T2", "RP2", "S3")


# -- acceptance reporting: one line per criterion ----------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        status = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[rep.outcome]
        _CRITERIA[number] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, title = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}")
