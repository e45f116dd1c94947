import pytest

from sparsedisp.classify import GridSpec, classify_grid


@pytest.fixture(scope="session")
def default_grid():
    spec = GridSpec()
    return spec, classify_grid(spec)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
