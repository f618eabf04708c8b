"""Shared fixtures."""

from __future__ import annotations

import numpy as np
import pytest
import structlog

from paraxial_tomo.core import Grid2D
from paraxial_tomo.paraxial import WaveParams


@pytest.fixture(autouse=True)
def reset_structlog():
    yield
    structlog.reset_defaults()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)


@pytest.fixture
def small_grid() -> Grid2D:
    return Grid2D.square(33, 1.0)


@pytest.fixture
def grid64() -> Grid2D:
    return Grid2D.square(64, 1.0)


@pytest.fixture
def params() -> WaveParams:
    return WaveParams(length_L=1.0, l_over_lambda=100.0)


def random_complex(rng: np.random.Generator, shape: tuple[int, ...]) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
