import pytest

CRITERIA = {
    1: "N=15 worked example",
    2: "second-register outcomes and offsets for a=7, N=15",
    3: "QFT spectrum when r divides 2**m",
    4: "QFT spectrum when r does not divide 2**m",
    5: "gate network equals dense DFT",
    6: "approximate QFT",
    7: "decoherence degradation",
    8: "analytic scaling laws and figure of merit",
    9: "multi-attempt amplification",
    10: "pulse-driven CNOT",
}

_items: dict[str, int] = {}
_results: dict[int, list[tuple[str, str]]] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("acceptance")
        if mark:
            _items[item.nodeid] = mark.args[0]


def pytest_runtest_logreport(report):
    n = _items.get(report.nodeid)
    if n is None:
        return
    if report.failed:
        outcome = "failed"
    elif hasattr(report, "wasxfail"):
        outcome = "xfailed"
    elif report.when == "call" and report.passed:
        outcome = "passed"
    else:
        return
    _results.setdefault(n, []).append((report.nodeid.split("::")[-1], outcome))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n, title in CRITERIA.items():
        outcomes = _results.get(n)
        if not outcomes:
            continue
        kinds = {o for _, o in outcomes}
        if "failed" in kinds:
            status = "FAIL"
        elif "xfailed" in kinds:
            deviations = ", ".join(name for name, o in outcomes if o == "xfailed")
            status = f"PASS with known deviation ({deviations} xfail)"
        else:
            status = "PASS"
        tr.write_line(f"criterion {n:2d} [{title}]: {status}")
