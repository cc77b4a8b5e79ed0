"""Per-criterion pass/fail summary for tests tagged ``@pytest.mark.criterion(n, label)``."""

_CRITERIA = {}      # n -> label
_OWNER = {}         # nodeid -> n
_FAILED = set()
_SEEN = set()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, label): acceptance criterion this test certifies")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            n, label = mark.args
            _CRITERIA[n] = label
            _OWNER[item.nodeid] = n


def pytest_runtest_logreport(report):
    n = _OWNER.get(report.nodeid)
    if n is None:
        return
    if report.when == "call" or report.outcome != "passed":
        _SEEN.add(n)
    if report.outcome == "failed" or (report.when == "call" and report.outcome == "skipped"):
        _FAILED.add(n)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        if n not in _SEEN:
            verdict = "NOT RUN"
        else:
            verdict = "FAIL" if n in _FAILED else "PASS"
        tr.write_line(f"criterion {n:2d} [{verdict}] {_CRITERIA[n]}")
