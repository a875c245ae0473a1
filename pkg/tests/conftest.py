import pytest


class AcceptanceLog:
    """Collects one pass/fail line per acceptance criterion for the summary."""

    def __init__(self):
        self.lines = {}

    def record(self, index, name, measured, passed):
        verdict = "PASS" if passed else "FAIL"
        self.lines[index] = f"criterion {index} {name}: {measured} -> {verdict}"


_LOG = AcceptanceLog()


@pytest.fixture(scope="session")
def acceptance_log():
    return _LOG


def pytest_terminal_summary(terminalreporter):
    if _LOG.lines:
        terminalreporter.section("acceptance criteria")
        for index in sorted(_LOG.lines):
            terminalreporter.write_line(_LOG.lines[index])
