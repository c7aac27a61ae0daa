import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture(autouse=True)
def _no_env_caps(monkeypatch):
    monkeypatch.delenv("SPINLAB_MAX_N", raising=False)
    monkeypatch.delenv("SPINLAB_CORES", raising=False)


def random_hermitian(m, rng):
    G = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    return (G + G.conj().T) / 2
