import numpy as np
import pytest

from aqradius import Weight


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_pd_weight(rng, n, spread=(0.1, 10.0)):
    """Random Hermitian PD weight: unitary conjugation of a log-uniform diagonal."""
    u = np.linalg.qr(crandn(rng, n, n))[0]
    d = np.exp(rng.uniform(np.log(spread[0]), np.log(spread[1]), n))
    return Weight((u * d) @ u.conj().T)


def random_q(rng):
    modulus = 1.0 - rng.random()
    phase = rng.uniform(0.0, 2.0 * np.pi)
    return modulus * np.exp(1j * phase)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
