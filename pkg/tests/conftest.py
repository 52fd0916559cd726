import numpy as np
import pytest

from fedvcg import Instance, standard_economy

ALPHA = float(np.sqrt(10.0))

# Reference payment schedules for the 10-owner benchmark economy
# (alpha = sqrt(10), quality prior [0, 5], cost-type prior [0, 1]).
# Keyed by the uniform quality level; owners have cost types 0.1 .. 1.0.
# Values are (acceptance, vcg payment) per owner, rounded to 2 decimals.
UNIFORM_QUALITY_SCHEDULES = {
    1.0: (
        [1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 0.00, 0.00, 0.00, 0.00],
        [0.67, 0.67, 0.67, 0.67, 0.67, 0.67, 0.00, 0.00, 0.00, 0.00],
    ),
    2.0: (
        [1.00, 1.00, 1.00, 1.00, 1.00, 0.00, 0.00, 0.00, 0.00, 0.00],
        [1.06, 1.06, 1.06, 1.06, 1.06, 0.00, 0.00, 0.00, 0.00, 0.00],
    ),
    3.0: (
        [1.00, 1.00, 1.00, 1.00, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00],
        [1.45, 1.45, 1.45, 1.45, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00],
    ),
    4.0: (
        [1.00, 1.00, 1.00, 0.91, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00],
        [1.70, 1.70, 1.70, 1.55, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00],
    ),
}

# Keyed by the uniform cost-type level; owners have qualities 0.5 .. 5.0.
UNIFORM_COST_SCHEDULES = {
    0.2: (
        [1.00] * 10,
        [0.15, 0.30, 0.46, 0.61, 0.77, 0.93, 1.09, 1.25, 1.42, 1.58],
    ),
    0.4: (
        [1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 1.00, 0.41, 0.00, 0.00],
        [0.20, 0.40, 0.60, 0.80, 1.00, 1.20, 1.40, 0.65, 0.00, 0.00],
    ),
    0.6: (
        [1.00, 1.00, 1.00, 1.00, 0.78, 0.00, 0.00, 0.00, 0.00, 0.00],
        [0.30, 0.60, 0.90, 1.20, 1.17, 0.00, 0.00, 0.00, 0.00, 0.00],
    ),
    0.8: (
        [1.00, 1.00, 1.00, 0.45, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00],
        [0.40, 0.80, 1.20, 0.73, 0.00, 0.00, 0.00, 0.00, 0.00, 0.00],
    ),
}


@pytest.fixture
def spec():
    return standard_economy(alpha=ALPHA)


@pytest.fixture
def uniform_quality_instance():
    """Ten owners, quality 1, cost types 0.1 .. 1.0."""
    return Instance(np.ones(10), (np.arange(10) + 1) / 10)


def quality_instance(level: float) -> Instance:
    return Instance(np.full(10, level), (np.arange(10) + 1) / 10)


def cost_instance(level: float) -> Instance:
    return Instance((np.arange(10) + 1) * 0.5, np.full(10, level))
