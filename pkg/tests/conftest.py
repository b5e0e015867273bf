import re

import pytest

from paracoal import generators, unfolding

_criteria = {}


def pytest_runtest_logreport(report):
    match = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not match or report.when != "call" and not (report.when == "setup" and report.failed):
        return
    number, name = int(match.group(1)), match.group(2)
    _criteria.setdefault(number, []).append((name, report.passed))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        parts = _criteria[number]
        ok = all(passed for _, passed in parts)
        failed = [name for name, passed in parts if not passed]
        detail = f" (failed: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}{detail}")


@pytest.fixture(scope="session")
def fig1():
    return generators.gen_example("fig1")


@pytest.fixture(scope="session")
def fig2():
    return generators.gen_example("fig2")


@pytest.fixture(scope="session")
def fig1_tree(fig1):
    return unfolding.unfold(fig1)


@pytest.fixture(scope="session")
def fig2_tree(fig2):
    return unfolding.unfold(fig2)
