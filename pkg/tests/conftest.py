import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from unyielding import MetricSignature, PointConfiguration  # noqa: E402
from unyielding.dependence import check_general_position  # noqa: E402
from unyielding.errors import DegeneracyError  # noqa: E402
from unyielding.sampling import random_configuration, trial_rng  # noqa: E402

CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    ok = CRITERIA.get(number, (title, True))[1]
    if rep.when == "call":
        ok = ok and rep.passed
    elif rep.failed:
        ok = False
    CRITERIA[number] = (title, ok)


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        title, ok = CRITERIA[number]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {number:2d} {title}")


def general_position_config(metric, m, seed, trial, scale=1.0):
    """Random configuration that passes the general-position gate, retried on fresh sub-seeds."""
    for attempt in range(50):
        rng = trial_rng(seed, trial * 1000 + attempt)
        config = random_configuration(metric, m, rng, scale=scale)
        try:
            check_general_position(config)
        except DegeneracyError:
            continue
        return config
    raise RuntimeError("could not draw a general-position configuration")


@pytest.fixture
def square():
    return PointConfiguration(MetricSignature.euclidean(2), np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], float))


@pytest.fixture
def orthocentric():
    return PointConfiguration(MetricSignature.euclidean(2), np.array([[-1, 0], [1, 0], [0, 2], [0, 0.5]]))


def square_with_apex(x):
    return PointConfiguration(MetricSignature.euclidean(2), np.array([[x, 0], [0, 1], [-1, 0], [0, -1]], float))
