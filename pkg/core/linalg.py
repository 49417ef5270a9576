import logging
from dataclasses import dataclass
from functools import reduce
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from core.errors import DomainError, NonHermitianInput

log = logging.getLogger("qsplab")

ComplexMatrix = NDArray[np.complex128]

HERMITIAN_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-9

# --- Pauli matrices, qubit 0 is the leftmost tensor factor ---
I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: NDArray[np.float64]
    eigenvectors: ComplexMatrix

    def reassemble(self) -> ComplexMatrix:
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.conj().T


def as_matrix(a) -> ComplexMatrix:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def kron(a, b) -> ComplexMatrix:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors) -> ComplexMatrix:
    return reduce(np.kron, (as_matrix(f) for f in factors))


def check_hermitian(h, tol=HERMITIAN_TOL) -> ComplexMatrix:
    m = as_matrix(h)
    if m.shape[0] != m.shape[1]:
        raise NonHermitianInput(f"matrix is not square: {m.shape}")
    skew = np.linalg.norm(m - m.conj().T, 2)
    if skew > tol:
        raise NonHermitianInput(f"||h - h^dagger|| = {skew:.3e} exceeds {tol:.0e}")
    return m


def _fix_phases(vectors: ComplexMatrix) -> ComplexMatrix:
    """Rotate each column so its first non-negligible component is real positive."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        k = int(np.argmax(np.abs(col) > 1e-12))
        out[:, j] = col * (abs(col[k]) / col[k])
    return out


def herm_eig(h) -> EigenDecomposition:
    m = check_hermitian(h)
    m = 0.5 * (m + m.conj().T)
    values, vectors = np.linalg.eigh(m)
    decomposition = EigenDecomposition(values, _fix_phases(vectors))
    residual = np.linalg.norm(decomposition.reassemble() - m, 2)
    if residual > RECONSTRUCTION_TOL:
        log.warning(f"eigendecomposition residual {residual:.3e} above {RECONSTRUCTION_TOL:.0e}")
    return decomposition


def herm_fn(h, f: Callable, domain=None) -> ComplexMatrix:
    """Lift a scalar function through the eigendecomposition of h.

    `domain` is an optional closed interval (lo, hi); eigenvalues outside it
    raise DomainError. Functions that produce NaN on an eigenvalue raise too.
    """
    eig = herm_eig(h)
    lam = eig.eigenvalues
    if domain is not None:
        lo, hi = domain
        bad = lam[(lam < lo) | (lam > hi)]
        if bad.size:
            raise DomainError(f"eigenvalues {bad} outside [{lo}, {hi}]")
    with np.errstate(invalid="ignore"):
        values = np.asarray(f(lam), dtype=complex)
    if not np.all(np.isfinite(values)):
        raise DomainError("function undefined on part of the spectrum")
    q = eig.eigenvectors
    return (q * values) @ q.conj().T


def spectral_norm(a) -> float:
    m = as_matrix(a)
    gram = m.conj().T @ m
    return float(np.sqrt(max(np.linalg.eigvalsh(0.5 * (gram + gram.conj().T))[-1], 0.0)))


def is_unitary(u, tol=1e-10) -> bool:
    m = as_matrix(u)
    return m.shape[0] == m.shape[1] and spectral_norm(m.conj().T @ m - np.eye(m.shape[0])) <= tol
