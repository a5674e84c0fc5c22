"""Collects outcomes of tests marked ``acceptance`` and prints one line per
criterion at the end of the run.  A criterion passes only if every test
carrying its number passed."""
from __future__ import annotations

import pytest

_RESULTS: dict[int, dict] = {}
_NOTES: dict[int, list[str]] = {}


@pytest.fixture
def acceptance_log(request):
    """Append a line of numbers to the summary entry of this test's criterion."""
    mark = request.node.get_closest_marker("acceptance")
    number = mark.args[0] if mark else 0

    def log(line: str) -> None:
        _NOTES.setdefault(number, []).append(line)

    return log


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None:
        return
    number, title = mark.args[0], mark.args[1]
    entry = _RESULTS.setdefault(number, {"title": title, "ok": True, "tests": 0, "failed": []})
    if rep.when == "call":
        entry["tests"] += 1
    if rep.failed or (rep.when == "call" and rep.skipped):
        entry["ok"] = False
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_RESULTS):
        e = _RESULTS[number]
        status = "PASS" if e["ok"] else "FAIL"
        tr.write_line(f"criterion {number:>2} {status}  {e['title']}")
        for note in _NOTES.get(number, []):
            tr.write_line(f"              {note}")
        for name in e["failed"]:
            tr.write_line(f"              failed: {name}")
