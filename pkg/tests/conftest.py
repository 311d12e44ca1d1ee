import re

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_criteria: dict = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)(\w*)", report.nodeid)
    if not m:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        key = (int(m.group(1)), m.group(2).lstrip("_"))
        _criteria[key] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (num, tag), outcome in sorted(_criteria.items()):
        label = f"criterion {num}" + (f" [{tag}]" if tag else "")
        terminalreporter.write_line(f"{label}: {'PASS' if outcome == 'passed' else 'FAIL'}")
