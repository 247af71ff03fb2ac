from pathlib import Path

import pytest

from posetclf.poset import build_poset, make_chain
from posetclf.product import ProductSpace

DATA = Path(__file__).resolve().parents[1] / "src" / "posetclf" / "data"

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def c3():
    return make_chain([0, 1, 2])


@pytest.fixture
def c3x3(c3):
    return ProductSpace((c3, c3))


@pytest.fixture
def cube2():
    b = make_chain([0, 1])
    return ProductSpace((b, b))


@pytest.fixture
def diamond():
    return build_poset(["bot", "a", "b", "top"], [(0, 1), (0, 2), (1, 3), (2, 3)])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
