import pytest

CRITERIA_LINES: list = []


@pytest.fixture
def criterion():
    """Record and print one pass/fail line for an acceptance criterion."""

    def report(number: int, ok: bool) -> bool:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'}"
        print(line)
        CRITERIA_LINES.append((number, line))
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(CRITERIA_LINES):
            terminalreporter.write_line(line)
