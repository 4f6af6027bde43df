"""Shared fixtures: the published scenario and a seeded generator."""
import numpy as np
import pytest

from thzhybrid.config import to_params
from thzhybrid.schema import HybridParams, RunConfig


@pytest.fixture(scope="session")
def params() -> HybridParams:
    return to_params(RunConfig())


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)
