import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(987654321)


@pytest.fixture
def random_density(rng):
    """Factory for random full-rank density matrices (Wishart construction)."""
    def make(dim=4):
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        rho = g @ g.conj().T
        return rho / np.trace(rho).real
    return make


@pytest.fixture
def random_unitary(rng):
    """Factory for Haar-ish random unitaries (QR with phase fix)."""
    def make(dim=4):
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        q, r = np.linalg.qr(g)
        d = np.diag(r)
        return q * (d / np.abs(d))[None, :]
    return make


@pytest.fixture
def bell_state():
    """|Phi+><Phi+| = (|00> + |11>)(<00| + <11|)/2."""
    v = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)
    return np.outer(v, v.conj())
