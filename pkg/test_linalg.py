import numpy as np
import pytest

from core.errors import DomainError, NonHermitianInput
from core.linalg import I2, X, Y, Z, check_hermitian, herm_eig, herm_fn, is_unitary, kron, kron_all, spectral_norm


def random_hermitian(dim, seed=0):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return 0.5 * (a + a.conj().T)


def test_kron_orders_factors_left_to_right():
    zi = kron(Z, I2)
    assert zi.shape == (4, 4)
    assert np.allclose(np.diag(zi), [1, 1, -1, -1])
    assert np.allclose(kron_all([X, Y, Z]), np.kron(np.kron(X, Y), Z))


def test_check_hermitian_rejects_skew_part():
    h = random_hermitian(4)
    check_hermitian(h)
    with pytest.raises(NonHermitianInput):
        check_hermitian(h + 1e-6j * np.eye(4))
    with pytest.raises(NonHermitianInput):
        check_hermitian(np.zeros((2, 3)))


def test_herm_eig_reassembles_and_sorts():
    h = random_hermitian(8, seed=3)
    eig = herm_eig(h)
    assert np.all(np.diff(eig.eigenvalues) >= 0)
    assert np.linalg.norm(eig.reassemble() - h) < 1e-9
    q = eig.eigenvectors
    assert np.allclose(q.conj().T @ q, np.eye(8), atol=1e-10)


def test_eigenvector_phase_convention():
    q = herm_eig(random_hermitian(6, seed=5)).eigenvectors
    for j in range(q.shape[1]):
        col = q[:, j]
        first = col[np.argmax(np.abs(col) > 1e-12)]
        assert abs(first.imag) < 1e-12 and first.real > 0


def test_herm_fn_exponential_is_unitary_and_matches_pauli_formula():
    u = herm_fn(0.3 * Z, lambda lam: np.exp(-1j * lam))
    assert np.allclose(u, np.cos(0.3) * I2 - 1j * np.sin(0.3) * Z)
    assert is_unitary(herm_fn(random_hermitian(4), lambda lam: np.exp(-2j * lam)))


def test_herm_fn_domain():
    with pytest.raises(DomainError):
        herm_fn(2 * Z, np.arccos, domain=(-1, 1))
    with pytest.raises(DomainError):
        herm_fn(-Z, np.log)


def test_spectral_norm():
    assert spectral_norm(X) == pytest.approx(1.0)
    assert spectral_norm(np.diag([0.5, -3.0])) == pytest.approx(3.0)
    assert spectral_norm(np.zeros((2, 2))) == 0.0
