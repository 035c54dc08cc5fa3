import pytest

from eulerlagrange import build_solution, find_el_points

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])


@pytest.fixture(scope="session")
def es_2_1():
    return build_solution(2.0, 1.0)


@pytest.fixture(scope="session")
def el_2_1(es_2_1):
    return find_el_points(es_2_1)
