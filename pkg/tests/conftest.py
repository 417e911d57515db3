# tests/conftest.py
#
# After the run, print one PASS/FAIL line per acceptance criterion so the
# verdicts are visible in plain `pytest -v` output.
import re


def pytest_terminal_summary(terminalreporter):
    lines = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            location = getattr(report, "nodeid", "")
            if "test_acceptance.py::test_criterion_" not in location:
                continue
            match = re.search(r"test_criterion_(\d+)", location)
            if not match:
                continue
            number = int(match.group(1))
            verdict = "PASS" if status == "passed" else "FAIL"
            label = location.split("::")[-1].replace(f"test_criterion_{number}_", "")
            lines[number] = f"criterion {number}: {verdict} - {label.replace('_', ' ')}"
    if lines:
        terminalreporter.write_line("")
        terminalreporter.write_line("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line("  " + lines[number])
