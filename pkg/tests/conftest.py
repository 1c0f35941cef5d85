import numpy as np
import pytest

from sspectrum import QuatMatrix, Quaternion


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def rel(A: QuatMatrix, B: QuatMatrix) -> float:
    """Relative difference against max(|A|, |B|, 1)."""
    return (A - B).norm() / max(A.norm(), B.norm(), 1.0)


def qrel(a: Quaternion, b: Quaternion) -> float:
    return (a - b).norm() / max(a.norm(), b.norm(), 1.0)


def random_unit_ball_quaternion(rng, radius: float = 1.0) -> Quaternion:
    """Uniform-ish draw with |q| <= radius (for absolute-tolerance checks)."""
    while True:
        c = rng.uniform(-1.0, 1.0, 4)
        if c @ c <= 1.0:
            return Quaternion(*(radius * c))
