import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from pgl.rng import stream

settings.register_profile(
    "pgl",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("pgl")


@pytest.fixture
def rng():
    return stream(20261016)


def seeded(seed):
    return stream(seed, 7)


def assert_span_equal(a, b, tol=1e-9):
    assert a.dim == b.dim
    assert a.distance(b) <= tol
