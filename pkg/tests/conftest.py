import pytest

from gramcon.grammar import parse_grammar
from gramcon.transforms import to_cnf

_REPORT = []


@pytest.fixture
def report():
    """Collect one pass/fail line per acceptance criterion."""
    return _REPORT.append


def pytest_terminal_summary(terminalreporter):
    if _REPORT:
        terminalreporter.section("acceptance criteria")
        for line in _REPORT:
            terminalreporter.write_line(line)


@pytest.fixture
def parens():
    return parse_grammar("S -> S S\nS -> '(' S ')'\nS -> '(' ')'\n")


@pytest.fixture
def parens_cnf(parens):
    return to_cnf(parens)
