import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from swexp.model import hamming_metric, validate_source

settings.register_profile(
    "default",
    deadline=None,
    max_examples=25,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

EXAMPLE_PMF = [[0.49, 0.005, 0.005], [0.015, 0.27, 0.015], [0.05, 0.05, 0.1]]


@pytest.fixture(scope="session")
def example_source():
    return validate_source(EXAMPLE_PMF)


@pytest.fixture(scope="session")
def ham01():
    return hamming_metric(3, 0.1)


def random_source(rng, x_size, y_size, alpha=1.0):
    return validate_source(rng.dirichlet(alpha * np.ones(x_size * y_size)).reshape(x_size, y_size))


def random_metric(rng, x_size, y_size):
    from swexp.model import DecodingMetric

    return DecodingMetric(rng.uniform(0.05, 1.0, size=(x_size, y_size)))


def binary_source(p_flip=0.1, p1=0.5):
    """Doubly binary source: X ~ Bern(p1), Y = X through a BSC(p_flip)."""
    px = np.array([1 - p1, p1])
    W = np.array([[1 - p_flip, p_flip], [p_flip, 1 - p_flip]])
    return validate_source(px[:, None] * W)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
