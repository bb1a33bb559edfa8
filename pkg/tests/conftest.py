import sys


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS, key=lambda k: (int(k.rstrip("*")), k)):
        title, status, note = mod.RESULTS[key]
        line = f"criterion {key:>3}  {status:<5} {title}"
        terminalreporter.write_line(line + (f"  [{note}]" if note else ""))
