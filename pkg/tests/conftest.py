import itertools
from fractions import Fraction as F

from starmop.measures import CharlierParams, MeixnerParams

CHARLIER_VALUES = (F(1, 2), 1, 2, 3)
MEIXNER_VALUES = (F(1, 4), F(1, 3), F(1, 2))
BETA_VALUES = (F(1, 2), 1, 3)


def charlier_grid(r):
    return [CharlierParams(a) for a in itertools.permutations(CHARLIER_VALUES, r)]


def meixner_grid(r):
    return [MeixnerParams(c, b)
            for c in itertools.permutations(MEIXNER_VALUES, r) for b in BETA_VALUES]


def full_grid(rs=(1, 2, 3)):
    out = []
    for r in rs:
        out += charlier_grid(r) + meixner_grid(r)
    return out


def small_grid():
    """A few representative parameter sets per family and r, for quick tests."""
    return [
        CharlierParams((F(1, 2),)),
        CharlierParams((1, 2)),
        CharlierParams((3, F(1, 2), 2)),
        MeixnerParams((F(1, 3),), F(1, 2)),
        MeixnerParams((F(1, 2), F(1, 4)), 3),
        MeixnerParams((F(1, 4), F(1, 3), F(1, 2)), 1),
    ]


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
