import pytest

_acceptance = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): exit criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    key = tuple(marker.args)
    _acceptance.setdefault(key, "PASS")
    if report.failed or (report.when == "call" and report.skipped):
        _acceptance[key] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), status in sorted(_acceptance.items()):
        terminalreporter.write_line(f"[{status}] {number}. {title}")
