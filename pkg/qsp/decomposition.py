import logging

import numpy as np

from approximation.laurent import LaurentPolynomial, full_circle_grid
from core.errors import DecompositionFailure
from core.linalg import X, Y, Z
from qsp.phases import I2, QspPhaseSet, evaluate_phases, projector_from

log = logging.getLogger("qsplab")

UNITARY_TOL = 1e-8
DEGENERATE_TOL = 1e-12
STRIP_TOL = 1e-6
RECONSTRUCTION_TOL = 1e-8
ZERO_PROJECTOR = np.diag([1.0, 0.0]).astype(complex)


def embed(a: LaurentPolynomial, b: LaurentPolynomial, c: LaurentPolynomial, d: LaurentPolynomial) -> np.ndarray:
    """z-coefficients (exponents -n..n) of F = a I - i b X + i c Y + d Z."""
    n = max(p.degree for p in (a, b, c, d))
    ca, cb, cc, cd = (p.centered(n) for p in (a, b, c, d))
    return (ca[:, None, None] * I2 - 1j * cb[:, None, None] * X
            + 1j * cc[:, None, None] * Y + cd[:, None, None] * Z)


def to_t_lattice(coeffs_z: np.ndarray) -> np.ndarray:
    """Double every exponent: z^k = t^{2k}."""
    out = np.zeros((2 * coeffs_z.shape[0] - 1, 2, 2), dtype=complex)
    out[::2] = coeffs_z
    return out


def evaluate_t(coeffs_t: np.ndarray, t) -> np.ndarray:
    m = (coeffs_t.shape[0] - 1) // 2
    powers = np.power.outer(np.atleast_1d(np.asarray(t, dtype=complex)), np.arange(-m, m + 1))
    return np.einsum("tk,kij->tij", powers, coeffs_t)


def _unitarity_defect(values: np.ndarray) -> float:
    gram = np.conj(np.swapaxes(values, 1, 2)) @ values
    return float(np.max(np.linalg.norm(gram - I2, axis=(1, 2))))


def _choose_projector(top, bottom):
    top_norm, bottom_norm = np.linalg.norm(top), np.linalg.norm(bottom)
    if max(top_norm, bottom_norm) < DEGENERATE_TOL:
        return ZERO_PROJECTOR
    if top_norm >= bottom_norm:
        # F_m P = F_m: P projects onto the row space of the leading coefficient
        return projector_from(np.linalg.svd(top)[2][0].conj())
    # F_{-m} P = 0: P projects onto the null space of the trailing coefficient
    return I2 - projector_from(np.linalg.svd(bottom)[2][0].conj())


def decompose_matrix(coeffs_z: np.ndarray, grid_points=1001) -> QspPhaseSet:
    """Strip E_P layers from the right until a constant E0 remains."""
    n = (coeffs_z.shape[0] - 1) // 2
    phi = full_circle_grid(grid_points)
    original = to_t_lattice(np.asarray(coeffs_z, dtype=complex))
    defect = _unitarity_defect(evaluate_t(original, np.exp(1j * phi)))
    if defect > UNITARY_TOL:
        raise DecompositionFailure("embedding is not unitary on the circle", residual=defect)

    f = original
    stripped = []
    for layer in range(2 * n, 0, -1):
        p = _choose_projector(f[-1], f[0])
        grown = np.zeros((f.shape[0] + 2, 2, 2), dtype=complex)
        grown[:-2] += f @ p
        grown[2:] += f @ (I2 - p)
        residual = max(np.linalg.norm(grown[k]) for k in (0, 1, -2, -1))
        if residual > STRIP_TOL:
            raise DecompositionFailure("stripping left a residual", layer=layer, residual=residual)
        f = grown[2:-2]
        stripped.append(p)

    e0 = f[0]
    # R_k back to circuit projectors: even slots control U^dagger and flip to I - R
    rs = stripped[::-1]
    projectors = tuple(r if k % 2 == 0 else I2 - r for k, r in enumerate(rs))
    u, _, vh = np.linalg.svd(e0)
    phases = QspPhaseSet(u @ vh, projectors)

    t = np.exp(1j * phi / 2)
    error = float(np.max(np.linalg.norm(evaluate_phases(phases, t) - evaluate_t(original, t), axis=(1, 2))))
    log.debug(f"decomposed degree {n}: reassembly error {error:.3e}")
    if error > RECONSTRUCTION_TOL * max(1, n):
        raise DecompositionFailure("phase product does not reproduce the input", residual=error)
    return phases


def decompose(a, b, c, d, grid_points=1001) -> QspPhaseSet:
    return decompose_matrix(embed(a, b, c, d), grid_points)
