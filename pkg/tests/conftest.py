from __future__ import annotations

import sys

import pytest

from mixlab.algebra import LaurentPoly
from mixlab.haar import SystemSpec
from mixlab.text import parse_poly


def P(text: str, p: int = 2, d: int = 2) -> LaurentPoly:
    return parse_poly(text, p, d)


@pytest.fixture
def ledrappier() -> SystemSpec:
    return SystemSpec.ledrappier()


SYSTEMS = {
    "ledrappier": (2, "1+u1+u2"),
    "four_term": (2, "1+u1+u2+u1*u2"),
    "ternary": (3, "1+u1+u2"),
}


def system(name: str) -> SystemSpec:
    p, text = SYSTEMS[name]
    return SystemSpec(p, 2, parse_poly(text, p, 2))


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[n])
