"""Shared fixtures: small butterflies and seeded generators."""

import numpy as np
import pytest

from src.topology.butterfly import build_butterfly


@pytest.fixture
def g3():
    return build_butterfly(3)


@pytest.fixture
def g4():
    return build_butterfly(4)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
