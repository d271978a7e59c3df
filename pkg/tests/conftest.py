import math

import numpy as np
import pytest

from frgeom import build_mesh, make_density, make_tangent


@pytest.fixture
def u2():
    return build_mesh("two_atom", 2)


@pytest.fixture
def u4():
    return build_mesh("n_atom_uniform", 4)


@pytest.fixture
def circle16():
    return build_mesh("circle", 16)


@pytest.fixture
def flat(u2):
    return make_density(u2, [1.0, 1.0])


@pytest.fixture
def tilted(u2):
    return make_density(u2, [1.6, 0.4])


@pytest.fixture
def mirrored(u2):
    return make_density(u2, [0.4, 1.6])


@pytest.fixture
def swing(u2):
    return make_tangent(u2, [1.0, -1.0])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# l for the pair (1, 1), (1.6, 0.4): sin(l) = 0.6, cos(l) = 0.8
ARC_LENGTH = 2.0 * math.atan(1.0 / 3.0)


# report lines from test_acceptance.py, echoed after the run even when output is captured
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
