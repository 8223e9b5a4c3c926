import numpy as np
import pytest
from hypothesis import settings

from fwcs.foxwright import FWParams

settings.register_profile("fwcs", deadline=None, max_examples=40, derandomize=True)
settings.load_profile("fwcs")

CANONICAL = {
    "C0": FWParams([], []),
    "C1": FWParams([], [(1, 1)]),
    "C2": FWParams([], [(2, 1)]),
    "C3": FWParams([(2, 1)], [(3, 1)]),
}


def rel(a, b) -> float:
    a, b = complex(a), complex(b)
    return abs(a - b) / abs(b) if b != 0 else abs(a)


def random_params(rng: np.random.Generator, min_delta: float = -0.5, p_max: int = 2, q_max: int = 2) -> FWParams:
    """Random entire parameter set with delta above ``min_delta``."""
    while True:
        p = int(rng.integers(0, p_max + 1))
        q = int(rng.integers(0, q_max + 1))
        upper = [(float(rng.uniform(0.3, 3.0)), float(rng.uniform(0.3, 2.0))) for _ in range(p)]
        lower = [(float(rng.uniform(0.3, 3.0)), float(rng.uniform(0.3, 2.0))) for _ in range(q)]
        prm = FWParams(upper, lower)
        if prm.delta > min_delta:
            return prm


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
