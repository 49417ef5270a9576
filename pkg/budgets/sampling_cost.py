import math
from dataclasses import dataclass

from simulation.trotter import trotter_steps

FIXED_SHOTS = 5_000_000


@dataclass(frozen=True)
class BudgetInput:
    p: float        # per-layer depolarizing strength
    depth: int      # noisy layers
    n: int          # QSP degree
    R: int          # truncation order
    eps: float      # target precision
    p_qsp: float    # post-selection success probability

    def __post_init__(self):
        if not 0 <= self.p < 1:
            raise ValueError(f"p must lie in [0, 1), got {self.p}")
        if self.depth < 1 or self.n < 1 or self.R < 0:
            raise ValueError(f"bad circuit shape depth={self.depth}, n={self.n}, R={self.R}")
        if not 0 < self.eps < 1:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if not 0 < self.p_qsp < 1:
            raise ValueError(f"p_qsp must lie in (0, 1), got {self.p_qsp}")


def m_e_bound(p: float, depth: int) -> float:
    """log10 of p^(-2D), the exponential lower bound on noisy copies."""
    if not 0 < p < 1:
        raise ValueError(f"p must lie in (0, 1), got {p}")
    return 2 * depth * math.log10(1 / p)


def m_s_bound(b: BudgetInput) -> float:
    """log(2/(1-p_qsp)) / ((1-p)^d * 4 ln2 * n(R+1) * eps^2), natural logs throughout."""
    return math.log(2 / (1 - b.p_qsp)) / ((1 - b.p) ** b.depth * 4 * math.log(2) * b.n * (b.R + 1) * b.eps**2)


def trotter_budget(tau: float, eps: float, depth: int, p: float, p_success: float = 0.5) -> float:
    """m_s_bound at accuracy dt^2 with r = ceil(tau/sqrt(eps)); Trotter has no n(R+1) factor."""
    dt = tau / trotter_steps(tau, eps)
    return m_s_bound(BudgetInput(p, depth, 1, 0, dt**2, p_success))


def fixed_budget_is_feasible(m_s: float, p: float, depth: int, shots: int = FIXED_SHOTS) -> bool:
    """True when M_s < shots < M_e; without noise M_e is unbounded."""
    if m_s >= shots:
        return False
    return p == 0 or math.log10(shots) < m_e_bound(p, depth)
