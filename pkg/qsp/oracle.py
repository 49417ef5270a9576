import numpy as np

from core.errors import DomainError
from core.linalg import ComplexMatrix, herm_eig

EDGE_TOL = 1e-12


def build_oracle(h) -> ComplexMatrix:
    """U = Q diag(e^{i arccos lambda_j}) Q^dagger, so that (U + U^dagger)/2 = h."""
    eig = herm_eig(h)
    lam = eig.eigenvalues
    outside = lam[np.abs(lam) > 1 + EDGE_TOL]
    if outside.size:
        raise DomainError(f"eigenvalues {outside} outside [-1, 1]; normalize the Hamiltonian first")
    phases = np.exp(1j * np.arccos(np.clip(lam, -1.0, 1.0)))
    q = eig.eigenvectors
    return (q * phases) @ q.conj().T
