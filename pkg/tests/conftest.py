"""Collect acceptance outcomes and print one PASS/FAIL line per criterion."""
import pytest

_RESULTS = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        number, label = marker.args
        entry = _RESULTS.setdefault(number, {"label": label, "ok": True, "failed": []})
        if report.failed:
            entry["ok"] = False
            entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        entry = _RESULTS[number]
        status = "PASS" if entry["ok"] else "FAIL"
        line = f"criterion {number}: {status}  {entry['label']}"
        if entry["failed"]:
            line += "  [failed: " + ", ".join(entry["failed"]) + "]"
        terminalreporter.write_line(line)
