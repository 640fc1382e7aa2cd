import numpy as np
import pytest

from lelm_lab.apparatus import haar_random, hadamard_lr, projective_separate, uopt_n1
from lelm_lab.bellcore import Statistics


@pytest.fixture(params=list(Statistics), ids=lambda s: s.value)
def stats(request):
    return request.param


def reference_apparatuses(n):
    apps = [hadamard_lr(n), projective_separate(n)]
    if n == 1:
        apps.append(uopt_n1())
    apps.extend(haar_random(n, seed) for seed in (1, 2, 3))
    return apps


def assert_close(a, b, tol):
    assert np.max(np.abs(np.asarray(a) - np.asarray(b))) < tol


_acceptance = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{name:<45} {'PASS' if outcome == 'passed' else 'FAIL'}")
