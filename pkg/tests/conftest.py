import pytest

from dyckcert.model import Bracket, Instance

O1, C1, O2, C2 = Bracket.O1, Bracket.C1, Bracket.O2, Bracket.C2

ACCEPTANCE_LINES: list[tuple[str, bool, str]] = []


@pytest.fixture
def single():
    return Instance(1, 1, 1)


@pytest.fixture
def wrap3():
    """1 -o1-> 2 -c1-> 3, source 1, target 3."""
    return Instance(3, 1, 3, {(1, 2, O1), (2, 3, C1)})


@pytest.fixture
def cycle2():
    """1 -o1-> 2 -c1-> 1: every 1 -> 2 walk has odd length."""
    return Instance(2, 1, 2, {(1, 2, O1), (2, 1, C1)})


@pytest.fixture
def open_edge():
    return Instance(2, 1, 2, {(1, 2, O1)})


@pytest.fixture
def acceptance_report():
    def report(name: str, ok: bool, detail: str = ""):
        ACCEPTANCE_LINES.append((name, ok, detail))
    return report


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
