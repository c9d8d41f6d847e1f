import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)


def random_hermitian(rng, n, scale=1.0):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (z + z.conj().T) / 2.0


def random_density(rng, n, rank=None):
    """Random density matrix via a normalized Wishart factor."""
    rank = rank or n
    z = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    m = z @ z.conj().T
    return m / np.trace(m).real
