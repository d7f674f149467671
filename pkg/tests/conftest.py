import sys
import os

sys.path.insert(0, os.path.dirname(__file__))

ACCEPTANCE_LINES = []


def record_acceptance(name: str, ok: bool, elapsed: float, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    line = f"{status} {name} ({elapsed:.2f}s)"
    if detail:
        line += f" {detail}"
    ACCEPTANCE_LINES.append(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
