import logging
import math
from dataclasses import dataclass

import numpy as np

from approximation.jacobi_anger import DEFAULT_GRID_POINTS, TruncationReport, build_hs_laurent, numeric_degree
from core.linalg import ComplexMatrix, herm_eig, herm_fn, is_unitary, spectral_norm
from qsp.completion import complete
from qsp.decomposition import ZERO_PROJECTOR, decompose
from qsp.oracle import build_oracle
from qsp.phases import I2, QspPhaseSet, evaluate_phases
from simulation.density import Circuit, DensityMatrix

log = logging.getLogger("qsplab")


def controlled(projector, u) -> ComplexMatrix:
    """C_p U = |p><p| (x) U + |q><q| (x) I with the ancilla as qubit 0."""
    return np.kron(projector, u) + np.kron(I2 - projector, np.eye(u.shape[0]))


@dataclass(frozen=True)
class QspCircuit:
    phases: QspPhaseSet
    oracle: ComplexMatrix
    ancilla_count: int = 1

    def __post_init__(self):
        if not is_unitary(self.oracle):
            raise ValueError("oracle is not unitary")

    @property
    def n(self) -> int:
        return self.phases.n

    @property
    def gates(self) -> list:
        """Product order: [E0 (x) I, C_p1 U, C_p2 U^dagger, ...]."""
        u = self.oracle
        gates = [np.kron(self.phases.e0, np.eye(u.shape[0]))]
        for k, p in enumerate(self.phases.projectors):
            gates.append(controlled(p, u if k % 2 == 0 else u.conj().T))
        return gates

    def to_circuit(self) -> Circuit:
        return Circuit(tuple(reversed(self.gates)), label="qsp")

    def unitary(self) -> ComplexMatrix:
        total = np.eye(2 * self.oracle.shape[0], dtype=complex)
        for g in self.gates:
            total = total @ g
        return total

    def plus_block(self) -> ComplexMatrix:
        """<+| U_QSP |+> acting on the system register."""
        d = self.oracle.shape[0]
        blocks = self.unitary().reshape(2, d, 2, d)
        return 0.5 * (blocks[0, :, 0] + blocks[0, :, 1] + blocks[1, :, 0] + blocks[1, :, 1])


def assemble_circuit(phases: QspPhaseSet, oracle) -> QspCircuit:
    return QspCircuit(phases, np.asarray(oracle, dtype=complex))


def circuit_depth(n: int, d_o: int = 1) -> int:
    if n < 0 or d_o < 1:
        raise ValueError(f"need n >= 0 and d_o >= 1, got n={n}, d_o={d_o}")
    return 2 * n * d_o + 1


def success_probability(phases: QspPhaseSet, oracle, rho: DensityMatrix) -> float:
    """sum_l <lambda_l|rho|lambda_l> |F_{++}(e^{i arccos(lambda_l)/2})|^2."""
    u = np.asarray(oracle, dtype=complex)
    eig = herm_eig(0.5 * (u + u.conj().T))
    weights = np.real(np.einsum("il,ij,jl->l", eig.eigenvectors.conj(), rho.matrix, eig.eigenvectors))
    t = np.exp(0.5j * np.arccos(np.clip(eig.eigenvalues, -1.0, 1.0)))
    f = evaluate_phases(phases, t)
    block = 0.5 * f.sum(axis=(1, 2))
    return float(np.clip(np.sum(weights * np.abs(block) ** 2), 0.0, 1.0))


def qsp_operator_error(circuit: QspCircuit, tau: float, h) -> float:
    """|| <+|U_QSP|+> - e^{-i tau H}/sqrt2 ||."""
    ideal = herm_fn(h, lambda lam: np.exp(-1j * tau * lam)) / math.sqrt(2)
    return spectral_norm(circuit.plus_block() - ideal)


# --- pipeline ---
def build_qsp_circuit(h, tau: float, eps_coeff: float, rule="strict", grid_points=DEFAULT_GRID_POINTS) -> tuple[QspCircuit, TruncationReport]:
    report = numeric_degree(tau, eps_coeff, grid_points, rule=rule)
    a, b = build_hs_laurent(tau, report.R)
    c, d = complete(a, b)
    phases = decompose(a, b, c, d)
    log.info(f"QSP circuit tau={tau}: degree {report.n}, depth {circuit_depth(report.n)}, linf {report.linf_error:.2e}")
    return assemble_circuit(phases, build_oracle(h)), report


def echo_circuit(h, n: int) -> QspCircuit:
    """Depth-matched stand-in: E0 = I and every control on |0><0|, so U_QSP = I."""
    phases = QspPhaseSet(I2, tuple([ZERO_PROJECTOR] * (2 * n)))
    return assemble_circuit(phases, build_oracle(h))
