from dataclasses import dataclass

import numpy as np

from core.linalg import ComplexMatrix, is_unitary

PROJECTOR_TOL = 1e-10
I2 = np.eye(2, dtype=complex)


def check_projector(p, tol=PROJECTOR_TOL) -> ComplexMatrix:
    p = np.asarray(p, dtype=complex)
    if p.shape != (2, 2):
        raise ValueError(f"projector must be 2x2, got {p.shape}")
    if np.linalg.norm(p @ p - p) > tol or np.linalg.norm(p - p.conj().T) > tol:
        raise ValueError("matrix is not an orthogonal projector")
    if abs(np.trace(p) - 1) > tol:
        raise ValueError(f"projector has trace {np.trace(p).real:.6f}, expected rank 1")
    return p


def projector_from(vector) -> ComplexMatrix:
    v = np.asarray(vector, dtype=complex)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


@dataclass(frozen=True)
class QspPhaseSet:
    """E0 plus the circuit projectors p_1..p_2n, in product order.

    Odd-numbered projectors control U, even-numbered ones control U^dagger.
    """
    e0: ComplexMatrix
    projectors: tuple

    def __post_init__(self):
        e0 = np.asarray(self.e0, dtype=complex)
        if e0.shape != (2, 2) or not is_unitary(e0, PROJECTOR_TOL):
            raise ValueError("E0 must be a 2x2 unitary")
        projectors = tuple(check_projector(p) for p in self.projectors)
        if len(projectors) % 2:
            raise ValueError(f"need an even number of projectors, got {len(projectors)}")
        object.__setattr__(self, "e0", e0)
        object.__setattr__(self, "projectors", projectors)

    @property
    def n(self) -> int:
        return len(self.projectors) // 2

    def stripping_projectors(self) -> list:
        """R_k with F(t) = E0 E_{R_1}(t)...E_{R_2n}(t); even slots flip to I - p."""
        return [p if k % 2 == 0 else I2 - p for k, p in enumerate(self.projectors)]


def e_p(projector, t):
    """E_P(t) = t P + t^{-1} (I - P) for every t in an array."""
    t = np.asarray(t, dtype=complex)[..., None, None]
    return t * projector + (I2 - projector) / t


def evaluate_phases(phases: QspPhaseSet, t) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=complex))
    out = np.broadcast_to(phases.e0, t.shape + (2, 2)).copy()
    for r in phases.stripping_projectors():
        out = out @ e_p(r, t)
    return out


def phase_polynomial(phases: QspPhaseSet) -> np.ndarray:
    """Coefficients of F(t) for t-exponents -2n..2n, shape (4n+1, 2, 2)."""
    coeffs = phases.e0[None].copy()
    for r in phases.stripping_projectors():
        grown = np.zeros((coeffs.shape[0] + 2, 2, 2), dtype=complex)
        grown[:-2] += coeffs @ (I2 - r)
        grown[2:] += coeffs @ r
        coeffs = grown
    return coeffs


def random_phase_set(n: int, rng: np.random.Generator) -> QspPhaseSet:
    q, r = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    e0 = q * (np.diag(r) / np.abs(np.diag(r)))
    projectors = [projector_from(rng.normal(size=2) + 1j * rng.normal(size=2)) for _ in range(2 * n)]
    return QspPhaseSet(e0, tuple(projectors))
