import numpy as np
import pytest

from beamspec import BeamParams

XI_IRRATIONAL = 1.0 / np.sqrt(2.0)


@pytest.fixture
def canonical():
    """The workhorse configuration used across the suite."""
    return BeamParams(a=1.0, b=1.0, alpha=0.05, xi=XI_IRRATIONAL)


@pytest.fixture
def undamped():
    return BeamParams(a=1.0, b=1.0, alpha=0.0, xi=XI_IRRATIONAL)
