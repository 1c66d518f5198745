import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from decompio.fixtures import fixture  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def fx():
    return fixture


@pytest.fixture
def acceptance_report():
    return ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
