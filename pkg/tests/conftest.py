import numpy as np
import pytest

from qconverse.linalg import random_density


@pytest.fixture
def pauli_x():
    return np.array([[0, 1], [1, 0]], dtype=complex)


def random_psd(d, seed, rank=None):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, rank or d)) + 1j * rng.standard_normal((d, rank or d))
    return g @ g.conj().T


@pytest.fixture
def rho3():
    return random_density(3, 5)
