import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(label): exit criterion, reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        results = item.config.stash.setdefault(_RESULTS, [])
        details = "; ".join(f"{k}={v}" for k, v in report.user_properties)
        results.append((marker.args[0], report.outcome, details))


_RESULTS = pytest.StashKey[list]()


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_RESULTS, [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome, details in results:
        status = "PASS" if outcome == "passed" else "FAIL"
        line = f"[{status}] {label}"
        if details:
            line += f"  ({details})"
        terminalreporter.write_line(line)
