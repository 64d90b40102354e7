# -*- coding: utf-8 -*-

import numpy as np
import pytest

import diversipy
from diversipy import core
from diversipy import instances


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def log_dir(tmp_path, monkeypatch):
    """Keeps log files written by the command-line program out of the working directory."""
    path = tmp_path / "logs"
    monkeypatch.setattr(diversipy, "LOG_DIR", str(path))
    return path


@pytest.fixture
def star_metric():
    """Point 0 at distance 1 from points 1, 2, 3, which are pairwise 2 apart."""
    return core.FiniteMetric([[0, 1, 1, 1],
                              [1, 0, 2, 2],
                              [1, 2, 0, 2],
                              [1, 2, 2, 0]])


@pytest.fixture
def unit_square():
    """Corners of the unit square, in tour order."""
    points = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    return core.FiniteMetric(np.sqrt(((points[:, None] - points[None]) ** 2).sum(axis=2)))


@pytest.fixture
def random_metrics():
    """Builds `count` Euclidean metrics on n points from a fixed seed."""
    def build(count, n, seed=0):
        gen = np.random.default_rng(seed)
        return [instances.random_metric(n, gen) for _ in range(count)]
    return build
