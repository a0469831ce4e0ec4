from __future__ import annotations

import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mixedmms import CakeDensity, Instance  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def uniform(total) -> CakeDensity:
    return CakeDensity.uniform(Fraction(total))


def steps(*triples) -> CakeDensity:
    return CakeDensity.from_triples(triples)


@pytest.fixture
def identical_pair() -> Instance:
    """Two identical agents, goods [1, 1], uniform cake worth 2."""
    return Instance.create([[1, 1], [1, 1]], [uniform(2), uniform(2)])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
