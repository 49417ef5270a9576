import logging
from dataclasses import dataclass

import numpy as np

from core.errors import NormalizationError, SizeError
from core.linalg import PAULI, ComplexMatrix, kron_all, spectral_norm

log = logging.getLogger("qsplab")


@dataclass(frozen=True)
class PauliTerm:
    coefficient: float
    axes: str  # one label per site from "IXYZ"

    def __post_init__(self):
        if not np.isfinite(self.coefficient):
            raise ValueError(f"non-finite coefficient on {self.axes}")
        if set(self.axes) - set("IXYZ"):
            raise ValueError(f"bad Pauli labels {self.axes!r}")

    @property
    def string(self) -> ComplexMatrix:
        return kron_all(PAULI[a] for a in self.axes)

    def matrix(self) -> ComplexMatrix:
        return self.coefficient * self.string


@dataclass(frozen=True)
class TfimSpec:
    """Modified transverse-field Ising chain with open boundaries."""
    N: int = 4
    J_Z: float = 1.0
    J_X: float = 0.1
    h_x: float = 0.1
    alpha: float = 7 / 50

    def __post_init__(self):
        if self.N < 2:
            raise SizeError(f"TFIM needs N >= 2 sites, got {self.N}")
        if self.alpha <= 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")


def _two_site(N, i, label):
    return "I" * i + label * 2 + "I" * (N - i - 2)


def pauli_terms(spec: TfimSpec) -> list[PauliTerm]:
    """ZZ and XX on every bond in bond order, then the X field on every site."""
    terms = []
    for i in range(spec.N - 1):
        terms.append(PauliTerm(-spec.alpha * spec.J_Z, _two_site(spec.N, i, "Z")))
        terms.append(PauliTerm(-spec.alpha * spec.J_X, _two_site(spec.N, i, "X")))
    for i in range(spec.N):
        terms.append(PauliTerm(-spec.alpha * spec.h_x, "I" * i + "X" + "I" * (spec.N - i - 1)))
    return terms


def build_tfim(spec: TfimSpec) -> ComplexMatrix:
    h = sum(t.matrix() for t in pauli_terms(spec))
    norm = spectral_norm(h)
    if norm > 1.0:
        raise NormalizationError(f"||H|| = {norm:.6f} > 1; lower alpha (now {spec.alpha})")
    log.debug(f"TFIM N={spec.N}: ||H|| = {norm:.6f}")
    return h


def build_observable(N: int) -> ComplexMatrix:
    """I (x) Z (x) Z (x) I..., the two-site correlation on sites 1 and 2."""
    if N < 3:
        raise SizeError(f"observable needs N >= 3 sites, got {N}")
    return kron_all(PAULI[a] for a in "IZZ" + "I" * (N - 3))


def zero_state(N: int) -> ComplexMatrix:
    rho = np.zeros((2**N, 2**N), dtype=complex)
    rho[0, 0] = 1.0
    return rho
