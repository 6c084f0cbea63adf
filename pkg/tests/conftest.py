import time

import pytest

_RESULTS = {}


class _Recorder:
    def __init__(self, number, title):
        self.number, self.title = number, title
        self.detail = ""
        self.start = time.perf_counter()

    def note(self, detail):
        self.detail = detail


@pytest.fixture
def criterion(request):
    """Record the outcome of one acceptance criterion (marker ``acceptance(n, title)``)."""
    mark = request.node.get_closest_marker("acceptance")
    rec = _Recorder(*mark.args)
    yield rec
    failed = getattr(request.node, "_call_failed", True)
    elapsed = time.perf_counter() - rec.start
    _RESULTS[rec.number] = (not failed, rec.title, rec.detail, elapsed)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when == "call":
        item._call_failed = report.failed


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        ok, title, detail, elapsed = _RESULTS[n]
        extra = f" ({detail})" if detail else ""
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {title}{extra} [{elapsed:.1f} s]")
