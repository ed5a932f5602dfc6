import pytest

from northshield import linrep


@pytest.fixture(scope="session", autouse=True)
def builtin_reps_self_verify():
    # the LSB-first convention makes a transposed representation easy to ship by mistake
    linrep.self_verify(1000)


def pytest_terminal_summary(terminalreporter):
    from tests_support import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
