import numpy as np
import pytest

from qmonogamy.states import generator, ghz_state, ou_state, w_state


@pytest.fixture(scope="session")
def w4():
    return w_state(4)


@pytest.fixture(scope="session")
def ghz3():
    return ghz_state(3)


@pytest.fixture(scope="session")
def ou():
    return ou_state()


def random_hermitian(n: int, seed: int) -> np.ndarray:
    rng = generator(seed)
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (z + z.conj().T) / 2.0
