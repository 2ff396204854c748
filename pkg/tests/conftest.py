"""Shared fixtures: canonical parameter sets and grids.

The baseline model used throughout the tests is the cubic strong-Allee
channel ``g(v) = (1 - v)(v - 0.4)`` with ``d = 0.02``, ``L = 10``,
``m1 = m2 = 0.02``, ``sigma = 0.2`` and uniform unit cross sections; tests
override individual knobs per case.
"""

from __future__ import annotations

import numpy as np
import pytest

from benthdrift.discretize import Grid
from benthdrift.model import (
    ModelSpec,
    logistic,
    strong_allee_cubic,
    uniform_geometry,
)


def make_cubic_spec(**overrides) -> ModelSpec:
    """Baseline strong-Allee spec with keyword overrides."""
    params = dict(
        d=0.02,
        q=0.0,
        mu=0.1,
        sigma=0.2,
        m1=0.02,
        m2=0.02,
        b_u=0.0,
        b_d=0.0,
        growth=strong_allee_cubic(),
        geometry=uniform_geometry(10.0),
    )
    params.update(overrides)
    return ModelSpec(**params)


def make_logistic_spec(**overrides) -> ModelSpec:
    """Baseline logistic spec (open downstream end) with overrides."""
    params = dict(
        d=0.02,
        q=0.2,
        mu=0.04,
        sigma=0.2,
        m1=0.02,
        m2=0.02,
        b_u=0.0,
        b_d=1.0,
        growth=logistic(0.09),
        geometry=uniform_geometry(10.0),
    )
    params.update(overrides)
    return ModelSpec(**params)


@pytest.fixture
def cubic_spec() -> ModelSpec:
    return make_cubic_spec()


@pytest.fixture
def grid() -> Grid:
    return Grid(n=400, L=10.0)


@pytest.fixture
def coarse_grid() -> Grid:
    return Grid(n=100, L=10.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260819)
