import pytest

from mlsgraph import MetricGraph


@pytest.fixture
def theta() -> MetricGraph:
    """Two vertices joined by parallel edges of lengths 1, 2, 3."""
    return MetricGraph([0, 1], [(0, 0, 1, 1), (1, 0, 1, 2), (2, 0, 1, 3)], name="theta")


@pytest.fixture
def dumbbell() -> MetricGraph:
    """Self-loops of lengths 2 and 3 joined by a bridge of length 1."""
    return MetricGraph([0, 1], [(0, 0, 0, 2), (1, 1, 1, 3), (2, 0, 1, 1)], name="dumbbell")


@pytest.fixture
def pendant_theta() -> MetricGraph:
    """Theta on vertices {1,2} with a pendant leaf 0; the basepoint falls
    outside the core."""
    return MetricGraph(
        [0, 1, 2],
        [(0, 1, 2, 1), (1, 1, 2, 2), (2, 1, 2, 3), (3, 0, 1, 5)],
        name="pendant-theta")
