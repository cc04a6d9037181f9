import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from algebroids import catalog as cat  # noqa: E402

_CRITERIA = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and report.when == "call":
        number, title = marker.args
        _CRITERIA.append((number, title, report.passed, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, duration in sorted(_CRITERIA):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2} {status}  {title}  ({duration:.2f}s)")


@pytest.fixture
def rng():
    return random.Random(20261018)


ALGEBROIDS = cat.algebroids()
BASE_ALGEBROIDS = cat.algebroids(adiabatic_too=False)
GROUPOIDS = cat.groupoids()


def ids(objs):
    return [o.name for o in objs]
