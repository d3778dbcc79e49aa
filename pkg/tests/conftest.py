import pytest
from hypothesis import settings

from hmst3.fieldtower import make_params, tower
from hmst3.hgroup import HGroup

from oracles import NaiveField

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")

_acceptance = {}


def _setup(p, n):
    fp = make_params(p, n)
    F = tower(fp)
    return fp, F, HGroup(F), NaiveField(p, n, fp.fq_poly, fp.d)


@pytest.fixture(scope="session")
def q3():
    return _setup(3, 1)


@pytest.fixture(scope="session")
def q5():
    return _setup(5, 1)


@pytest.fixture(scope="session")
def q9():
    return _setup(3, 2)


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome
    elif "test_acceptance.py" in report.nodeid and report.when == "setup" and report.outcome != "passed":
        _acceptance[report.nodeid.split("::")[-1]] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        verdict = "PASS" if _acceptance[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{verdict}  {name}")
