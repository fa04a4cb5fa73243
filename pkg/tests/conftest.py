from .helpers import ACCEPTANCE_LOG


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LOG):
        terminalreporter.write_line(ACCEPTANCE_LOG[k])
