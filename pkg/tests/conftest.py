"""
Pytest configuration and fixtures.
"""

import numpy as np
import pytest

from src.graph_core.lattice import build_box
from src.models.weighted_graph import BoxSpec, WeightedGraph


@pytest.fixture
def rng():
    """
    Provide a seeded random generator.

    Returns:
        numpy Generator with a fixed seed
    """
    return np.random.default_rng(12345)


@pytest.fixture
def single_vertex():
    """One vertex, no edges, theta = 1."""
    return WeightedGraph.from_edges(1, [], theta=1.0)


@pytest.fixture
def two_vertex():
    """Two vertices joined by an edge of weight 1, theta = 1."""
    return WeightedGraph.from_edges(2, [(0, 1, 1.0)], theta=1.0)


@pytest.fixture
def three_path():
    """Path 0 - 1 - 2 with unit weights and theta = 1."""
    return WeightedGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)], theta=1.0)


@pytest.fixture
def triangle():
    """Triangle with unit weights and theta = 1."""
    return WeightedGraph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], theta=1.0)


@pytest.fixture
def four_cycle():
    """Cycle on four vertices with unequal weights and theta."""
    return WeightedGraph.from_edges(
        4,
        [(0, 1, 1.0), (1, 2, 0.7), (2, 3, 1.3), (0, 3, 0.5)],
        theta=[1.0, 0.8, 1.2, 0.9],
    )


@pytest.fixture
def star():
    """Center 0 with three arms of weight 1."""
    return WeightedGraph.from_edges(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)], theta=1.0)


@pytest.fixture
def wired_square():
    """3 x 3 box with its wired boundary vertex, W = 1, theta = 1."""
    return build_box(BoxSpec(2, 1, wired=True), 1.0, 1.0)
