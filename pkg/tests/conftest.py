"""Collects acceptance outcomes and prints one line per criterion at the end."""

import time

import pytest

_RESULTS: dict[int, dict] = {}


def _entry(item):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return None
    number, title = mark.args
    return _RESULTS.setdefault(number, {"title": title, "ok": True, "notes": [], "seconds": 0.0})


@pytest.fixture
def note(request):
    """Attach a detail string to the current criterion's summary line."""
    entry = _entry(request.node)

    def add(text):
        if entry is not None:
            entry["notes"].append(text)

    return add


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_call(item):
    t0 = time.perf_counter()
    yield
    entry = _entry(item)
    if entry is not None:
        entry["seconds"] += time.perf_counter() - t0


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    entry = _entry(item)
    if entry is not None and report.when in ("setup", "call") and not report.passed:
        entry["ok"] = False
        if report.skipped:
            entry["notes"].append(f"{item.name} skipped")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        r = _RESULTS[number]
        status = "PASS" if r["ok"] else "FAIL"
        notes = "; ".join(r["notes"])
        terminalreporter.write_line(
            f"criterion {number:2d} {status}  {r['title']} ({r['seconds']:.1f}s)"
            + (f": {notes}" if notes else "")
        )
