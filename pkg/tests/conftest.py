import sys

import pytest

from autl.constructions import builtin
from autl.core import group_from_permutations

Q8_PERMS = [[1, 3, 5, 6, 2, 7, 0, 4], [2, 4, 3, 7, 6, 1, 5, 0]]


@pytest.fixture(scope="session")
def q8():
    return builtin("Q8")


@pytest.fixture(scope="session")
def q8_perm():
    return group_from_permutations(8, Q8_PERMS, "Q8perm")


@pytest.fixture(scope="session")
def d8():
    return builtin("D8")


@pytest.fixture(scope="session")
def heis3():
    return builtin("heisenberg3")


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in mod.RESULTS:
            terminalreporter.write_line(line)
