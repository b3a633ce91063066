import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

import _report  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not _report.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_report.RESULTS):
        terminalreporter.write_line(_report.format_line(n))
