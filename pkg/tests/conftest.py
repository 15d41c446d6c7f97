import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.failed:
        previous = _ACCEPTANCE.get(name)
        if previous is None or previous[0] == "passed":
            _ACCEPTANCE[name] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: int(s.split("_")[2])):
        outcome, duration = _ACCEPTANCE[name]
        label = name.removeprefix("test_").replace("_", " ")
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{label}: {status} [{duration:.2f} s]")
