import numpy as np
import pytest

from ghspace import validate_metric


def euclidean_space(rng, n, dim=None):
    """Random point set in the unit cube, as a metric space."""
    dim = dim or int(rng.integers(1, 4))
    p = rng.random((n, dim))
    return validate_metric(np.sqrt(((p[:, None] - p[None]) ** 2).sum(-1)))


def brute_distortion(X, Y, pairs):
    return max(
        abs(X.dist[i, k] - Y.dist[j, l]) for i, j in pairs for k, l in pairs
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def two_and_five():
    return validate_metric([[0, 2], [2, 0]]), validate_metric([[0, 5], [5, 0]])


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
