import numpy as np
import pytest

from isoclinic.subspaces import Subspace


def complex_gaussian(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(rng, n):
    q, r = np.linalg.qr(complex_gaussian(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hermitian(rng, n):
    a = complex_gaussian(rng, n, n)
    return 0.5 * (a + a.conj().T)


def compression_cosines_sq(v: Subspace, w: Subspace):
    """Eigenvalues of Q_V^* P_W Q_V, descending; independent of any SVD."""
    pw = w.basis @ w.basis.conj().T
    c = v.basis.conj().T @ pw @ v.basis
    return np.sort(np.linalg.eigvalsh(0.5 * (c + c.conj().T)))[::-1]


def basis_state(n, *idx):
    return np.eye(n, dtype=complex)[:, list(idx)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)
