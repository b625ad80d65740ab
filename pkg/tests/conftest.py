import math

import pytest

from dpextend.bounds import DpPair, DpParams
from dpextend.gen import fixture

_acceptance: list[tuple[str, str]] = []


@pytest.fixture
def log2_pair():
    return DpPair(DpParams(math.log(2), 0.0))


@pytest.fixture
def ex23():
    return fixture("example2-3")


@pytest.fixture
def fig1():
    return fixture("figure1")


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
