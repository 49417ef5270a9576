import logging
from dataclasses import dataclass

import numpy as np

from core.errors import DimensionMismatch, RangeError, ZeroProbability
from core.linalg import ComplexMatrix

log = logging.getLogger("qsplab")

STATE_TOL = 1e-10
PSD_TOL = 1e-9
MIN_PROBABILITY = 1e-12
MAX_P = 0.75
LABELS = ("qsp", "trotter")


def _qubits(dim: int) -> int:
    m = dim.bit_length() - 1
    if dim < 2 or 2**m != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of two")
    return m


@dataclass(frozen=True)
class DensityMatrix:
    matrix: ComplexMatrix

    def __post_init__(self):
        rho = np.asarray(self.matrix, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise DimensionMismatch(f"density matrix must be square, got {rho.shape}")
        _qubits(rho.shape[0])
        if np.max(np.abs(rho - rho.conj().T)) > STATE_TOL:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho).real - 1) > STATE_TOL:
            raise ValueError(f"density matrix has trace {np.trace(rho).real:.12f}")
        if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0] < -PSD_TOL:
            raise ValueError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "matrix", rho)

    @classmethod
    def pure(cls, vector) -> "DensityMatrix":
        v = np.asarray(vector, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    @property
    def qubits(self) -> int:
        return _qubits(self.matrix.shape[0])

    @property
    def purity(self) -> float:
        return float(np.real(np.vdot(self.matrix, self.matrix)))


@dataclass(frozen=True)
class NoiseModel:
    p: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.p <= MAX_P:
            raise RangeError(f"depolarizing probability {self.p} outside [0, 3/4]")

    def scaled(self, factor: float) -> "NoiseModel":
        return NoiseModel(self.p * factor)


@dataclass(frozen=True)
class Circuit:
    """Layers in time order; every layer is one noise exposure on every qubit."""
    layers: tuple
    label: str = "qsp"

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown circuit label {self.label!r}")
        layers = tuple(np.asarray(u, dtype=complex) for u in self.layers)
        if not layers:
            raise ValueError("circuit needs at least one layer")
        dim = layers[0].shape[0]
        for k, u in enumerate(layers):
            if u.shape != (dim, dim):
                raise DimensionMismatch(f"layer {k} has shape {u.shape}, expected {(dim, dim)}")
            if np.max(np.abs(u.conj().T @ u - np.eye(dim))) > STATE_TOL:
                raise ValueError(f"layer {k} is not unitary")
        object.__setattr__(self, "layers", layers)

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def qubits(self) -> int:
        return _qubits(self.layers[0].shape[0])

    def unitary(self) -> ComplexMatrix:
        total = np.eye(self.layers[0].shape[0], dtype=complex)
        for u in self.layers:
            total = u @ total
        return total


# --- channel ---
def _depolarize(rho: np.ndarray, m: int, p: float) -> np.ndarray:
    """(1 - 4p/3) rho + (2p/3) I_q (x) Tr_q rho on every qubit q in turn."""
    if p == 0.0:
        return rho
    dim = rho.shape[0]
    for q in range(m):
        tensor = rho.reshape((2,) * (2 * m))
        reduced = np.trace(tensor, axis1=q, axis2=m + q)
        mixed = np.moveaxis(np.multiply.outer(np.eye(2), reduced), [0, 1], [q, m + q])
        rho = (1 - 4 * p / 3) * rho + (2 * p / 3) * mixed.reshape(dim, dim)
    return rho


def depolarize_all(rho: DensityMatrix, p: float) -> DensityMatrix:
    NoiseModel(p)
    return DensityMatrix(_depolarize(rho.matrix, rho.qubits, p))


def evolve(circuit: Circuit, rho0: DensityMatrix, noise: NoiseModel) -> DensityMatrix:
    if circuit.qubits != rho0.qubits:
        raise DimensionMismatch(f"circuit acts on {circuit.qubits} qubits, state has {rho0.qubits}")
    m = rho0.qubits
    rho = rho0.matrix
    for u in circuit.layers:
        rho = _depolarize(u @ rho @ u.conj().T, m, noise.p)
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(rho / np.trace(rho).real)


# --- measurement ---
def postselect_plus(rho_full: DensityMatrix) -> tuple[DensityMatrix, float]:
    """Project ancilla qubit 0 onto |+>; returns the reduced state and its probability."""
    d = rho_full.matrix.shape[0] // 2
    blocks = rho_full.matrix.reshape(2, d, 2, d)
    unnormalized = 0.5 * (blocks[0, :, 0] + blocks[0, :, 1] + blocks[1, :, 0] + blocks[1, :, 1])
    prob = float(np.trace(unnormalized).real)
    if prob < MIN_PROBABILITY:
        raise ZeroProbability(prob)
    reduced = unnormalized / prob
    return DensityMatrix(0.5 * (reduced + reduced.conj().T)), prob


def expectation(o, rho: DensityMatrix) -> float:
    o = np.asarray(o, dtype=complex)
    if o.shape != rho.matrix.shape:
        raise DimensionMismatch(f"observable {o.shape} vs state {rho.matrix.shape}")
    value = np.trace(o @ rho.matrix)
    if abs(value.imag) > STATE_TOL:
        log.warning(f"expectation has imaginary part {value.imag:.3e}")
    return float(value.real)


def plus_state(system) -> DensityMatrix:
    """|+><+| (x) system, ancilla first."""
    plus = 0.5 * np.ones((2, 2), dtype=complex)
    sys = system.matrix if isinstance(system, DensityMatrix) else np.asarray(system, dtype=complex)
    return DensityMatrix(np.kron(plus, sys))
