ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
    failed = sum("[FAIL]" in line for line in ACCEPTANCE_LINES)
    terminalreporter.write_line(f"{len(ACCEPTANCE_LINES) - failed} passed, {failed} failed")
