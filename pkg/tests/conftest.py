import pytest


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(name): criterion of the acceptance suite"
    )


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One pass/fail line per acceptance criterion at the end of the run."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(outcome, []):
            marker = getattr(report, "_acceptance_name", None)
            if marker:
                status = "PASS" if outcome == "passed" else "FAIL"
                lines.append((marker, status))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"{status}  {name}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call":
        marker = item.get_closest_marker("acceptance")
        if marker:
            report._acceptance_name = marker.args[0]
