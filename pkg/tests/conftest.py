import pytest

# (criterion number, sub-label, line) appended by tests/test_acceptance.py
ACCEPTANCE_LINES: list[tuple] = []


@pytest.fixture
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
