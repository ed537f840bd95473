import numpy as np
import pytest

from qmeasure import MeasureSpace, UnitarySystem, pure_state

H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)


@pytest.fixture
def half():
    """Uniform space on two points."""
    return MeasureSpace.uniform(2)


@pytest.fixture
def flat_state(half):
    """Pure state u = 1 on the uniform two-point space."""
    return pure_state(half, np.ones(2))


@pytest.fixture
def hadamard():
    return lambda n: UnitarySystem.constant(H, n)


def random_weights(rng, size, null_rate=0.2):
    w = rng.uniform(0.1, 1.0, size)
    w[rng.random(size) < null_rate] = 0.0
    if w.sum() == 0:
        w[0] = 1.0
    return w / w.sum()


# acceptance reporting: one PASS/FAIL line per criterion in the terminal summary

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion checked by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    detail = "; ".join(f"{k}={v}" for k, v in item.user_properties)
    ok = report.passed
    prev = _criteria.get(number)
    if prev is not None:
        ok = ok and prev[1]
        detail = "; ".join(d for d in (prev[2], detail) if d)
    _criteria[number] = (title, ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok, detail = _criteria[number]
        line = f"criterion {number:2d}  {'PASS' if ok else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  [{detail}]" if detail else ""))
