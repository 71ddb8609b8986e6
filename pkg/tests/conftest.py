import pytest

from reidemeister.groups import GroupFamily, build_quotient


@pytest.fixture(scope="session")
def quotient():
    cache = {}

    def get(kind, n, m):
        key = (kind, n, m)
        if key not in cache:
            cache[key] = build_quotient(GroupFamily(kind, n), m)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def sl23(quotient):
    return quotient("SL", 2, 3)


@pytest.fixture(scope="session")
def gl23(quotient):
    return quotient("GL", 2, 3)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
