import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 9):
        line = mod.RESULTS.get(n, f"criterion {n}: FAIL  (did not run)")
        terminalreporter.write_line(line.splitlines()[0])
