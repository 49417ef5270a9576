import logging
import math

import numpy as np

from model.tfim import PauliTerm
from simulation.density import Circuit

log = logging.getLogger("qsplab")


def trotter_steps(tau: float, eps: float) -> int:
    """r = ceil(tau / sqrt(eps)), so that (tau/r)^2 <= eps."""
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return max(1, math.ceil(tau / math.sqrt(eps)))


def term_exponential(term: PauliTerm, dt: float) -> np.ndarray:
    """exp(-i dt c P) = cos(dt c) I - i sin(dt c) P for a Pauli string P."""
    string = term.string
    angle = dt * term.coefficient
    return math.cos(angle) * np.eye(string.shape[0]) - 1j * math.sin(angle) * string


def build_trotter(terms: list[PauliTerm], tau: float, eps: float, steps=None) -> Circuit:
    """First-order product formula, one layer per term exponential, term 1 applied first."""
    r = steps if steps is not None else trotter_steps(tau, eps)
    dt = tau / r
    step = [term_exponential(t, dt) for t in terms]
    log.debug(f"trotter tau={tau}: r={r}, dt^2={dt * dt:.3e}, depth={r * len(step)}")
    return Circuit(tuple(step) * r, label="trotter")
