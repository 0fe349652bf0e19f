import pytest

from rowmerge.codebuilder import build


@pytest.fixture(scope="session")
def code66():
    return build(7, 3, 2, 1)


@pytest.fixture(scope="session")
def code100():
    return build(7, 4, 1, 0)


_criteria: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        detail = ""
        for key, val in report.user_properties:
            if key == "detail":
                detail = val
        _criteria[name] = ("PASS" if report.passed else "FAIL", detail)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, (status, detail) in _criteria.items():
        terminalreporter.write_line(f"{status}  {name}  {detail}".rstrip())
