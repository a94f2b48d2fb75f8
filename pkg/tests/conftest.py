import pytest

from rbint.fixtures import catalogue

CRITERIA: dict[int, str] = {}
TOLERANCES: dict[int, str] = {}


@pytest.fixture(scope="session")
def cat():
    return catalogue()


def pytest_runtest_logreport(report):
    # acceptance tests are named test_criterion_<n>_...
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    n = int(name.split("_")[2])
    for key, value in report.user_properties:
        if key == "tolerance":
            TOLERANCES[n] = value
    if report.when == "call" or report.outcome != "passed":
        prev = CRITERIA.get(n, "PASS")
        CRITERIA[n] = "FAIL" if report.outcome != "passed" or prev == "FAIL" else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        note = f"  ({TOLERANCES[n]})" if n in TOLERANCES else ""
        terminalreporter.write_line(f"criterion {n}: {CRITERIA[n]}{note}")
