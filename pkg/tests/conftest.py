import re
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

# one summary line per acceptance criterion

_results = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)([a-z]?)_", report.nodeid)
    if not m:
        return
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    _results.setdefault(int(m.group(1)), []).append((m.group(2), report.outcome, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_results):
        parts = _results[num]
        ok = all(outcome == "passed" for _, outcome, _ in parts)
        secs = sum(d for _, _, d in parts)
        detail = ""
        if any(p for p, _, _ in parts):
            detail = " (" + ", ".join(f"{num}{p} {'pass' if o == 'passed' else 'fail'}" for p, o, _ in parts) + ")"
        tr.write_line(f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}{detail}  [{secs:.2f}s]")
