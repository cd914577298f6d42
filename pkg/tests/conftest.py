from importlib import resources

import pytest

from nmcalc.core import Apply, Atom
from nmcalc.syntax import parse_logic, parse_sequent

FIXTURES = resources.files("nmcalc") / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def circ2():
    return parse_logic(fixture_text("circ2.mvl"))


@pytest.fixture(scope="session")
def classical():
    return parse_logic(fixture_text("classical.mvl"))


@pytest.fixture
def seq(circ2):
    return lambda text: parse_sequent(text, circ2)


p, q = Atom("p"), Atom("q")
circ_p = Apply("circ", (p,))
