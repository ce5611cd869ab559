import random
from fractions import Fraction

import pytest


def random_simplex(rng, count, low=1, high=9):
    """Positive rationals summing to 1."""
    raw = [Fraction(rng.randint(low, high)) for _ in range(count)]
    total = sum(raw)
    return [x / total for x in raw]


@pytest.fixture
def rng():
    return random.Random(20240611)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
